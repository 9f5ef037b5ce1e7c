#include "teamspectra/ingest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "teamspectra/errors.hpp"

namespace teamspectra {

const char* to_string(QueueKind q) {
    switch (q) {
        case QueueKind::RankedSolo: return "ranked_solo";
        case QueueKind::RankedFlex: return "ranked_flex";
        case QueueKind::Other: return "other";
    }
    return "other";
}

const char* to_string(Role r) {
    switch (r) {
        case Role::Top: return "top";
        case Role::Mid: return "mid";
        case Role::Bottom: return "bottom";
        case Role::Jungle: return "jungle";
        case Role::Support: return "support";
    }
    return "top";
}

const char* to_string(Tier t) {
    switch (t) {
        case Tier::Iron: return "iron";
        case Tier::Bronze: return "bronze";
        case Tier::Silver: return "silver";
        case Tier::Gold: return "gold";
        case Tier::Platinum: return "platinum";
        case Tier::Emerald: return "emerald";
        case Tier::Diamond: return "diamond";
        case Tier::Master: return "master";
        case Tier::Grandmaster: return "grandmaster";
        case Tier::Challenger: return "challenger";
    }
    return "iron";
}

const char* to_string(Division d) {
    switch (d) {
        case Division::IV: return "IV";
        case Division::III: return "III";
        case Division::II: return "II";
        case Division::I: return "I";
    }
    return "IV";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::ChampionKill: return "champion_kill";
        case EventKind::BuildingKill: return "building_kill";
        case EventKind::EliteMonsterKill: return "elite_monster_kill";
    }
    return "champion_kill";
}

}  // namespace teamspectra

namespace teamspectra::ingest {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(ctx + key, "missing required field");
    return *it;
}

std::int64_t require_int(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_number_integer()) throw SchemaError(ctx + key, "expected integer");
    return v.get<std::int64_t>();
}

std::int64_t require_nonneg_int(const json& obj, const char* key, const std::string& ctx) {
    std::int64_t v = require_int(obj, key, ctx);
    if (v < 0) throw SchemaError(ctx + key, "must be non-negative");
    return v;
}

std::string require_string(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_string()) throw SchemaError(ctx + key, "expected string");
    return v.get<std::string>();
}

bool require_bool(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_boolean()) throw SchemaError(ctx + key, "expected boolean");
    return v.get<bool>();
}

QueueKind parse_queue(const std::string& s, const std::string& ctx) {
    if (s == "ranked_solo") return QueueKind::RankedSolo;
    if (s == "ranked_flex") return QueueKind::RankedFlex;
    if (s == "other") return QueueKind::Other;
    throw SchemaError(ctx, "unknown queue '" + s + "'");
}

Role parse_role(const std::string& s, const std::string& ctx) {
    if (s == "top") return Role::Top;
    if (s == "mid") return Role::Mid;
    if (s == "bottom") return Role::Bottom;
    if (s == "jungle") return Role::Jungle;
    if (s == "support") return Role::Support;
    throw SchemaError(ctx, "unknown role '" + s + "'");
}

Tier parse_tier(const std::string& s, const std::string& ctx) {
    static const std::pair<const char*, Tier> table[] = {
        {"iron", Tier::Iron},         {"bronze", Tier::Bronze},
        {"silver", Tier::Silver},     {"gold", Tier::Gold},
        {"platinum", Tier::Platinum}, {"emerald", Tier::Emerald},
        {"diamond", Tier::Diamond},   {"master", Tier::Master},
        {"grandmaster", Tier::Grandmaster}, {"challenger", Tier::Challenger}};
    for (const auto& [name, tier] : table)
        if (s == name) return tier;
    throw SchemaError(ctx, "unknown tier '" + s + "'");
}

Division parse_division(const std::string& s, const std::string& ctx) {
    if (s == "IV") return Division::IV;
    if (s == "III") return Division::III;
    if (s == "II") return Division::II;
    if (s == "I") return Division::I;
    throw SchemaError(ctx, "unknown division '" + s + "'");
}

Rank parse_rank(const json& j, const std::string& ctx) {
    Rank r;
    r.tier = parse_tier(require_string(j, "tier", ctx), ctx + "tier");
    const json& div = require(j, "division", ctx);
    if (div.is_null()) {
        r.division.reset();
    } else if (div.is_string()) {
        r.division = parse_division(div.get<std::string>(), ctx + "division");
    } else {
        throw SchemaError(ctx + "division", "expected string or null");
    }
    r.league_points = static_cast<int>(require_int(j, "lp", ctx));
    if (tier_has_division(r.tier)) {
        if (!r.division) throw SchemaError(ctx + "division", "required below master");
        if (r.league_points < 0 || r.league_points > 100)
            throw SchemaError(ctx + "lp", "league points must lie in [0, 100]");
    } else if (r.division) {
        throw SchemaError(ctx + "division", "must be null at master and above");
    }
    return r;
}

PlayerRow parse_player(const json& j, const std::string& ctx) {
    PlayerRow p;
    p.player_id = require_string(j, "player_id", ctx);
    p.role = parse_role(require_string(j, "role", ctx), ctx + "role");
    p.gold = require_nonneg_int(j, "gold", ctx);
    p.experience = require_nonneg_int(j, "experience", ctx);
    p.vision_score = require_nonneg_int(j, "vision_score", ctx);
    p.kills = require_nonneg_int(j, "kills", ctx);
    p.deaths = require_nonneg_int(j, "deaths", ctx);
    p.assists = require_nonneg_int(j, "assists", ctx);
    p.tower_kills = require_nonneg_int(j, "tower_kills", ctx);
    p.elite_kills = require_nonneg_int(j, "elite_kills", ctx);
    p.minion_kills = require_nonneg_int(j, "minion_kills", ctx);
    const json& rank = require(j, "rank", ctx);
    if (!rank.is_null()) p.rank = parse_rank(rank, ctx + "rank.");
    return p;
}

json rank_to_json(const Rank& r) {
    json j;
    j["tier"] = to_string(r.tier);
    j["division"] = r.division ? json(to_string(*r.division)) : json(nullptr);
    j["lp"] = r.league_points;
    return j;
}

json player_to_json(const PlayerRow& p) {
    json j;
    j["player_id"] = p.player_id;
    j["role"] = to_string(p.role);
    j["gold"] = p.gold;
    j["experience"] = p.experience;
    j["vision_score"] = p.vision_score;
    j["kills"] = p.kills;
    j["deaths"] = p.deaths;
    j["assists"] = p.assists;
    j["tower_kills"] = p.tower_kills;
    j["elite_kills"] = p.elite_kills;
    j["minion_kills"] = p.minion_kills;
    j["rank"] = p.rank ? rank_to_json(*p.rank) : json(nullptr);
    return j;
}

json parse_document(std::string_view raw, const char* what) {
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded()) throw SchemaError(what, "document is not valid JSON");
    if (!doc.is_object()) throw SchemaError(what, "document root must be an object");
    return doc;
}

}  // namespace

MatchRecord parse_match(std::string_view raw_json) {
    json doc = parse_document(raw_json, "match");

    MatchRecord m;
    m.match_id = require_string(doc, "match_id", "");
    m.queue_kind = parse_queue(require_string(doc, "queue", ""), "queue");
    m.duration_s = require_int(doc, "duration_s", "");
    if (m.duration_s <= 0) throw SchemaError("duration_s", "must be positive");
    m.ended_early = require_bool(doc, "ended_early", "");

    const json& teams = require(doc, "teams", "");
    if (!teams.is_array()) throw SchemaError("teams", "expected array");
    if (teams.size() != 2)
        throw CardinalityError("match " + m.match_id + " has " +
                               std::to_string(teams.size()) + " teams, expected 2");

    int winners = 0;
    for (std::size_t t = 0; t < 2; ++t) {
        const std::string ctx = "teams[" + std::to_string(t) + "].";
        const json& tj = teams[t];
        if (!tj.is_object()) throw SchemaError(ctx, "expected object");
        TeamSide& side = m.teams[t];
        side.won = require_bool(tj, "won", ctx);
        winners += side.won ? 1 : 0;
        const json& players = require(tj, "players", ctx);
        if (!players.is_array()) throw SchemaError(ctx + "players", "expected array");
        if (players.size() != 5)
            throw CardinalityError("match " + m.match_id + " team " + std::to_string(t) +
                                   " has " + std::to_string(players.size()) +
                                   " players, expected 5");
        bool role_seen[5] = {};
        for (std::size_t p = 0; p < players.size(); ++p) {
            const std::string pctx = ctx + "players[" + std::to_string(p) + "].";
            side.players.push_back(parse_player(players[p], pctx));
            int role = static_cast<int>(side.players.back().role);
            if (role_seen[role])
                throw SchemaError(pctx + "role", "duplicate role within team");
            role_seen[role] = true;
        }
    }
    if (winners != 1)
        throw SchemaError("teams.won", "exactly one team must have won=true");
    return m;
}

Timeline parse_timeline(std::string_view raw_json) {
    json doc = parse_document(raw_json, "timeline");

    Timeline tl;
    tl.match_id = require_string(doc, "match_id", "");
    const json& events = require(doc, "events", "");
    if (!events.is_array()) throw SchemaError("events", "expected array");
    tl.events.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const std::string ctx = "events[" + std::to_string(i) + "].";
        const json& ej = events[i];
        TimelineEvent e;
        e.timestamp_ms = require_nonneg_int(ej, "t_ms", ctx);
        const std::string kind = require_string(ej, "kind", ctx);
        if (kind == "champion_kill") e.kind = EventKind::ChampionKill;
        else if (kind == "building_kill") e.kind = EventKind::BuildingKill;
        else if (kind == "elite_monster_kill") e.kind = EventKind::EliteMonsterKill;
        else throw SchemaError(ctx + "kind", "unknown event kind '" + kind + "'");
        e.killer_id = static_cast<int>(require_int(ej, "killer", ctx));
        if (e.killer_id < 1 || e.killer_id > 10)
            throw SchemaError(ctx + "killer", "participant index must lie in 1..10");
        const json& victim = require(ej, "victim", ctx);
        if (!victim.is_null()) {
            if (!victim.is_number_integer())
                throw SchemaError(ctx + "victim", "expected integer or null");
            int v = victim.get<int>();
            if (v < 1 || v > 10)
                throw SchemaError(ctx + "victim", "participant index must lie in 1..10");
            e.victim_id = v;
        }
        const json& assisters = require(ej, "assisters", ctx);
        if (!assisters.is_array()) throw SchemaError(ctx + "assisters", "expected array");
        for (const json& a : assisters) {
            if (!a.is_number_integer())
                throw SchemaError(ctx + "assisters", "expected integer entries");
            int idx = a.get<int>();
            if (idx < 1 || idx > 10)
                throw SchemaError(ctx + "assisters", "participant index must lie in 1..10");
            if (idx == e.killer_id)
                throw SchemaError(ctx + "assisters", "killer cannot assist itself");
            e.assister_ids.push_back(idx);
        }
        const json& pos = require(ej, "pos", ctx);
        if (!pos.is_null()) {
            if (!pos.is_array() || pos.size() != 2)
                throw SchemaError(ctx + "pos", "expected [x, y] or null");
            e.position = MapPoint{pos[0].get<double>(), pos[1].get<double>()};
        }
        tl.events.push_back(std::move(e));
    }

    // Frames are optional; older documents carry events only.
    auto frames = doc.find("frames");
    if (frames != doc.end() && frames->is_array()) {
        for (std::size_t i = 0; i < frames->size(); ++i) {
            const std::string ctx = "frames[" + std::to_string(i) + "].";
            const json& fj = (*frames)[i];
            PositionFrame f;
            f.timestamp_ms = require_nonneg_int(fj, "t_ms", ctx);
            const json& pos = require(fj, "pos", ctx);
            if (!pos.is_object()) throw SchemaError(ctx + "pos", "expected object");
            for (auto it = pos.begin(); it != pos.end(); ++it) {
                int participant = 0;
                try {
                    participant = std::stoi(it.key());
                } catch (const std::exception&) {
                    throw SchemaError(ctx + "pos", "keys must be participant indices");
                }
                if (participant < 1 || participant > 10)
                    throw SchemaError(ctx + "pos", "participant index must lie in 1..10");
                const json& xy = it.value();
                if (!xy.is_array() || xy.size() != 2)
                    throw SchemaError(ctx + "pos", "expected [x, y] per participant");
                f.positions[participant] = MapPoint{xy[0].get<double>(), xy[1].get<double>()};
            }
            tl.frames.push_back(std::move(f));
        }
    }
    return tl;
}

std::string serialize_match(const MatchRecord& m) {
    json doc;
    doc["match_id"] = m.match_id;
    doc["queue"] = to_string(m.queue_kind);
    doc["duration_s"] = m.duration_s;
    doc["ended_early"] = m.ended_early;
    json teams = json::array();
    for (const TeamSide& side : m.teams) {
        json tj;
        tj["won"] = side.won;
        json players = json::array();
        for (const PlayerRow& p : side.players) players.push_back(player_to_json(p));
        tj["players"] = std::move(players);
        teams.push_back(std::move(tj));
    }
    doc["teams"] = std::move(teams);
    return doc.dump(2) + "\n";
}

std::string serialize_timeline(const Timeline& tl) {
    json doc;
    doc["match_id"] = tl.match_id;
    json events = json::array();
    for (const TimelineEvent& e : tl.events) {
        json ej;
        ej["t_ms"] = e.timestamp_ms;
        ej["kind"] = to_string(e.kind);
        ej["killer"] = e.killer_id;
        ej["victim"] = e.victim_id ? json(*e.victim_id) : json(nullptr);
        ej["assisters"] = e.assister_ids;
        ej["pos"] = e.position ? json::array({std::llround(e.position->x),
                                              std::llround(e.position->y)})
                               : json(nullptr);
        events.push_back(std::move(ej));
    }
    doc["events"] = std::move(events);
    if (!tl.frames.empty()) {
        json frames = json::array();
        for (const PositionFrame& f : tl.frames) {
            json fj;
            fj["t_ms"] = f.timestamp_ms;
            json pos = json::object();
            for (const auto& [participant, point] : f.positions)
                pos[std::to_string(participant)] =
                    json::array({std::llround(point.x), std::llround(point.y)});
            fj["pos"] = std::move(pos);
            frames.push_back(std::move(fj));
        }
        doc["frames"] = std::move(frames);
    }
    return doc.dump(2) + "\n";
}

std::vector<MatchRecord> filter_corpus(std::vector<MatchRecord> records,
                                       const FilterOptions& opts) {
    std::vector<MatchRecord> kept;
    kept.reserve(records.size());
    std::unordered_set<std::string> seen;
    for (MatchRecord& m : records) {
        const bool ranked =
            (m.queue_kind == QueueKind::RankedSolo && opts.include_ranked_solo) ||
            (m.queue_kind == QueueKind::RankedFlex && opts.include_ranked_flex);
        if (!ranked) continue;
        if (m.duration_s < opts.min_duration_s) continue;
        if (m.ended_early) continue;
        if (m.teams[0].players.size() != 5 || m.teams[1].players.size() != 5) continue;
        if (!seen.insert(m.match_id).second) continue;
        kept.push_back(std::move(m));
    }
    return kept;
}

double per_minute(double raw, std::int64_t duration_s) {
    if (duration_s == 0) throw DomainError("per_minute: duration_s must be positive");
    if (duration_s < 0) throw DomainError("per_minute: duration_s must be positive");
    return raw * 60.0 / static_cast<double>(duration_s);
}

PerMinuteMetrics per_minute_metrics(const PlayerRow& row, std::int64_t duration_s) {
    PerMinuteMetrics pm;
    pm.gold_pm = per_minute(static_cast<double>(row.gold), duration_s);
    pm.xp_pm = per_minute(static_cast<double>(row.experience), duration_s);
    pm.vision_pm = per_minute(static_cast<double>(row.vision_score), duration_s);
    pm.assists_pm = per_minute(static_cast<double>(row.assists), duration_s);
    pm.minions_pm = per_minute(static_cast<double>(row.minion_kills), duration_s);
    return pm;
}

namespace {
std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

MatchRecord load_match_file(const std::filesystem::path& path) {
    return parse_match(read_file(path));
}

Timeline load_timeline_file(const std::filesystem::path& path) {
    return parse_timeline(read_file(path));
}

}  // namespace teamspectra::ingest
