#include "teamspectra/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "teamspectra/csv.hpp"
#include "teamspectra/errors.hpp"
#include "teamspectra/ingest.hpp"
#include "teamspectra/rng.hpp"

namespace teamspectra::synth {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::int64_t kReferenceDuration = 1380;  // seconds

struct PendingEvent {
    int team = 0;
    std::int64_t raw_ms = 0;
    int seq = 0;  // draw order within the team, for a stable sort
    EventKind kind = EventKind::ChampionKill;
    int giver = 0;     // team-local
    int receiver = 0;  // team-local
    bool explicit_assist = true;
    int victim = 0;  // team-local index on the opposing side (champion kills)
};

int argmax5(const std::array<double, 5>& values, int skip = -1) {
    int best = -1;
    for (int i = 0; i < 5; ++i) {
        if (i == skip) continue;
        if (best < 0 || values[i] > values[best]) best = i;
    }
    return best;
}

// Whole-unit coordinates: the wire format carries integer map positions.
MapPoint offset_point(const MapPoint& origin, double distance, double angle) {
    return {static_cast<double>(std::llround(origin.x + distance * std::cos(angle))),
            static_cast<double>(std::llround(origin.y + distance * std::sin(angle)))};
}

std::string padded_index(std::uint64_t index) {
    std::string digits = std::to_string(index);
    return std::string(digits.size() < 7 ? 7 - digits.size() : 0, '0') + digits;
}

Rank draw_rank(double latent, Rng& rng) {
    const int ordinal =
        std::clamp(static_cast<int>(std::floor(10.0 * normal_cdf(latent))), 0, 9);
    Rank rank;
    rank.tier = static_cast<Tier>(ordinal);
    if (tier_has_division(rank.tier)) {
        rank.division = static_cast<Division>(rng.bounded(4));
        rank.league_points = static_cast<int>(rng.bounded(101));
    } else {
        rank.league_points = static_cast<int>(rng.bounded(1400));
    }
    return rank;
}

std::int64_t positive_round(double value) {
    return std::max<std::int64_t>(0, std::llround(value));
}

// Maps the team's latent quantile onto a three-archetype cooperation
// mixture: a quarter of teams play hub-centric ball (band around 0.10),
// half play an unremarkable middle game (around 0.50), and a quarter
// spread their assists broadly (around 0.90). The map is strictly
// increasing in the latent, so rank_coop_correlation keeps its meaning,
// and the gaps between bands give the team-level metrics genuine modes
// rather than one smear.
double cooperation_from_unit(double u) {
    if (u < 0.25) return 0.10 + 0.10 * (u / 0.25 - 0.5);
    if (u < 0.75) return 0.50 + 0.14 * ((u - 0.25) / 0.50 - 0.5);
    return 0.90 + 0.10 * ((u - 0.75) / 0.25 - 0.5);
}

}  // namespace

SynthMatch generate_match(const SynthConfig& config, std::uint64_t index) {
    if (config.rank_coop_correlation < -1.0 || config.rank_coop_correlation > 1.0)
        throw DomainError("rank_coop_correlation must lie in [-1, 1]");
    Rng rng(derive_stream(config.seed, index));

    SynthMatch out;
    const std::string id = "SYN" + padded_index(index);
    out.record.match_id = id;
    out.record.queue_kind = QueueKind::RankedSolo;
    out.record.ended_early = false;
    out.timeline.match_id = id;
    out.truth.match_id = id;

    const std::int64_t duration =
        kReferenceDuration + static_cast<std::int64_t>(rng.bounded(1021));
    out.record.duration_s = duration;
    const double minutes = static_cast<double>(duration) / 60.0;
    const double length_scale =
        static_cast<double>(duration) / static_cast<double>(kReferenceDuration);

    // --- latent team state ------------------------------------------------
    const double rho = config.rank_coop_correlation;
    std::array<double, 2> rank_latent{};
    for (int t = 0; t < 2; ++t) {
        TeamTruth& truth = out.truth.teams[t];
        const double z = rng.normal();
        truth.cooperation = cooperation_from_unit(normal_cdf(z));
        rank_latent[t] = rho * z + std::sqrt(1.0 - rho * rho) * rng.normal();
        for (int i = 0; i < 5; ++i) {
            truth.skill[i] = rng.normal();
            truth.support[i] = rng.normal();
        }
        truth.mean_skill =
            (truth.skill[0] + truth.skill[1] + truth.skill[2] + truth.skill[3] +
             truth.skill[4]) /
            5.0;
        truth.hub_receiver = argmax5(truth.skill);
        truth.hub_giver = argmax5(truth.support, truth.hub_receiver);
    }

    const double margin =
        config.beta_coop *
            (out.truth.teams[0].cooperation - out.truth.teams[1].cooperation) +
        config.beta_skill *
            (out.truth.teams[0].mean_skill - out.truth.teams[1].mean_skill);
    out.truth.p_first_team_won = 1.0 / (1.0 + std::exp(-margin));
    out.truth.winner = rng.unit() < out.truth.p_first_team_won ? 0 : 1;

    // --- assist events ----------------------------------------------------
    std::vector<PendingEvent> pending;
    std::array<std::array<std::int64_t, 5>, 2> kills{}, deaths{}, assists{},
        towers{}, elites{};
    for (int t = 0; t < 2; ++t) {
        const TeamTruth& truth = out.truth.teams[t];
        // Cooperative play creates assists: shared kills credit more helpers,
        // so the event budget itself grows with c (mean_assists is the budget
        // of a fully cooperative team). Hub-centric teams produce sparser
        // graphs concentrated on the carry lane, which also keeps any one
        // player's degree from dwarfing the cooperative teams' spread.
        const double budget = config.mean_assists * (0.4 + 0.6 * truth.cooperation);
        const int count = rng.poisson(budget * length_scale);
        for (int e = 0; e < count; ++e) {
            PendingEvent ev;
            ev.team = t;
            ev.seq = e;
            ev.raw_ms = static_cast<std::int64_t>(
                rng.bounded(static_cast<std::uint64_t>(duration) * 1000));
            if (rng.unit() < truth.cooperation) {
                // Any ordered pair, all twenty equally likely.
                const int pair = static_cast<int>(rng.bounded(20));
                ev.giver = pair / 4;
                const int other = pair % 4;
                ev.receiver = other >= ev.giver ? other + 1 : other;
            } else {
                ev.giver = truth.hub_giver;
                ev.receiver = truth.hub_receiver;
            }
            const double kind_draw = rng.unit();
            if (kind_draw < 0.7) {
                ev.kind = EventKind::ChampionKill;
                ev.explicit_assist = rng.unit() < config.explicit_assist_prob;
                ev.victim = static_cast<int>(rng.bounded(5));
            } else {
                ev.kind = kind_draw < 0.85 ? EventKind::BuildingKill
                                           : EventKind::EliteMonsterKill;
                ev.explicit_assist = true;  // pressure applies to kills only
            }
            pending.push_back(ev);
        }
    }

    std::stable_sort(pending.begin(), pending.end(),
                     [](const PendingEvent& a, const PendingEvent& b) {
                         if (a.raw_ms != b.raw_ms) return a.raw_ms < b.raw_ms;
                         if (a.team != b.team) return a.team < b.team;
                         return a.seq < b.seq;
                     });

    // Strictly increasing timestamps keep each kill's position frame
    // unambiguous (the frame at the kill's own instant always wins).
    std::int64_t previous = -1;
    for (PendingEvent& ev : pending) {
        ev.raw_ms = std::max(ev.raw_ms, previous + 1);
        previous = ev.raw_ms;
    }

    for (const PendingEvent& ev : pending) {
        const std::array<int, 5> own = team_participants(ev.team);
        const std::array<int, 5> enemy = team_participants(1 - ev.team);

        TimelineEvent event;
        event.timestamp_ms = ev.raw_ms;
        event.kind = ev.kind;
        event.killer_id = own[ev.receiver];
        if (ev.explicit_assist) event.assister_ids.push_back(own[ev.giver]);

        if (ev.kind == EventKind::ChampionKill) {
            event.victim_id = enemy[ev.victim];
            const MapPoint site{
                static_cast<double>(1000 + rng.bounded(13001)),
                static_cast<double>(1000 + rng.bounded(13001))};
            event.position = site;

            // The frame pins every teammate: killer at the site, the giver
            // close by, everyone else well outside the pressure radius.
            PositionFrame frame;
            frame.timestamp_ms = ev.raw_ms;
            for (int node = 0; node < 5; ++node) {
                const double angle = rng.uniform(0.0, kTwoPi);
                MapPoint where;
                if (node == ev.receiver)
                    where = site;
                else if (node == ev.giver)
                    where = offset_point(site, 0.5 * config.pressure_radius, angle);
                else
                    where = offset_point(site, 3.5 * config.pressure_radius, angle);
                frame.positions[own[node]] = where;
            }
            out.timeline.frames.push_back(frame);

            ++kills[ev.team][ev.receiver];
            ++deaths[1 - ev.team][ev.victim];
            if (ev.explicit_assist) ++assists[ev.team][ev.giver];
        } else if (ev.kind == EventKind::BuildingKill) {
            ++towers[ev.team][ev.receiver];
            ++assists[ev.team][ev.giver];
        } else {
            ++elites[ev.team][ev.receiver];
            ++assists[ev.team][ev.giver];
        }
        out.timeline.events.push_back(event);
    }

    // --- box scores and ranks ----------------------------------------------
    constexpr Role kRoles[5] = {Role::Top, Role::Jungle, Role::Mid, Role::Bottom,
                                Role::Support};
    for (int t = 0; t < 2; ++t) {
        const TeamTruth& truth = out.truth.teams[t];
        TeamSide& side = out.record.teams[t];
        side.won = out.truth.winner == t;
        const std::array<int, 5> own = team_participants(t);
        for (int i = 0; i < 5; ++i) {
            PlayerRow player;
            player.player_id = id + "_p" + std::to_string(own[i]);
            player.role = kRoles[i];

            const double c = truth.cooperation;
            const double s = truth.skill[i];
            const double u = truth.support[i];
            // Economy runs mostly on personal skill with a mild cooperation
            // dividend; pushing the dividend higher folds the two latent
            // traits into one axis and the per-minute block stops being
            // separable from the interaction-structure block.
            const double gold_pm = 380.0 + 55.0 * s + 40.0 * c + 25.0 * rng.normal();
            const double xp_pm = 420.0 + 50.0 * s + 30.0 * c + 25.0 * rng.normal();
            const double vision_pm =
                1.2 + 0.35 * s + 0.35 * u + 0.5 * c + 0.3 * rng.normal();
            const double minions = (180.0 + 25.0 * s + 15.0 * rng.normal()) * length_scale;

            player.gold = positive_round(gold_pm * minutes);
            player.experience = positive_round(xp_pm * minutes);
            player.vision_score = positive_round(vision_pm * minutes);
            player.minion_kills = positive_round(minions);
            player.kills = kills[t][i];
            player.deaths = deaths[t][i];
            player.assists = assists[t][i];
            player.tower_kills = towers[t][i];
            player.elite_kills = elites[t][i];
            player.rank = draw_rank(rank_latent[t] + config.rank_jitter * rng.normal(), rng);
            side.players.push_back(player);
        }
    }

    return out;
}

std::vector<SynthMatch> generate_corpus(const SynthConfig& config) {
    if (config.matches < 0) throw DomainError("match count cannot be negative");
    std::vector<SynthMatch> corpus;
    corpus.reserve(static_cast<std::size_t>(config.matches));
    for (int i = 0; i < config.matches; ++i)
        corpus.push_back(generate_match(config, static_cast<std::uint64_t>(i)));
    return corpus;
}

void write_corpus(const std::vector<SynthMatch>& corpus,
                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "matches");
    std::filesystem::create_directories(dir / "timelines");
    for (const SynthMatch& m : corpus) {
        const std::string name = m.record.match_id + ".json";
        std::ofstream match_out(dir / "matches" / name);
        match_out << ingest::serialize_match(m.record);
        std::ofstream timeline_out(dir / "timelines" / name);
        timeline_out << ingest::serialize_timeline(m.timeline);
        if (!match_out || !timeline_out)
            throw TransportError("failed writing corpus files under " + dir.string());
    }
    write_ground_truth(corpus, dir / "ground_truth.csv");
}

void write_ground_truth(const std::vector<SynthMatch>& corpus,
                        const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw TransportError("cannot open " + file.string());
    csv::Writer writer(out);
    writer.header({"match_id", "team", "cooperation", "mean_skill", "hub_giver",
                   "hub_receiver", "win_prob", "won"});
    for (const SynthMatch& m : corpus) {
        for (int t = 0; t < 2; ++t) {
            const TeamTruth& truth = m.truth.teams[t];
            const double p = t == 0 ? m.truth.p_first_team_won
                                    : 1.0 - m.truth.p_first_team_won;
            writer.row({m.record.match_id, std::to_string(t),
                        csv::format_double(truth.cooperation),
                        csv::format_double(truth.mean_skill),
                        std::to_string(truth.hub_giver),
                        std::to_string(truth.hub_receiver), csv::format_double(p),
                        m.truth.winner == t ? "1" : "0"});
        }
    }
}

}  // namespace teamspectra::synth
