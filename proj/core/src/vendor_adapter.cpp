#include "teamspectra/vendor_adapter.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "teamspectra/errors.hpp"

namespace teamspectra::client {

using nlohmann::json;

namespace {

json parse_document(std::string_view raw, const char* what) {
    json doc = json::parse(raw, nullptr, false);
    if (doc.is_discarded()) throw SchemaError(what, "document is not valid JSON");
    return doc;
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object()) throw SchemaError(ctx, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(ctx + key, "missing required field");
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_string()) throw SchemaError(ctx + key, "expected string");
    return v.get<std::string>();
}

std::int64_t require_int(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_number_integer()) throw SchemaError(ctx + key, "expected integer");
    return v.get<std::int64_t>();
}

bool require_bool(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_boolean()) throw SchemaError(ctx + key, "expected boolean");
    return v.get<bool>();
}

constexpr std::int64_t kQueueSolo = 420;
constexpr std::int64_t kQueueFlex = 440;
constexpr std::int64_t kQueueOther = 400;  // normal draft stands in for "other"

QueueKind queue_from_id(std::int64_t id) {
    if (id == kQueueSolo) return QueueKind::RankedSolo;
    if (id == kQueueFlex) return QueueKind::RankedFlex;
    return QueueKind::Other;
}

std::int64_t queue_to_id(QueueKind kind) {
    switch (kind) {
        case QueueKind::RankedSolo: return kQueueSolo;
        case QueueKind::RankedFlex: return kQueueFlex;
        case QueueKind::Other: return kQueueOther;
    }
    return kQueueOther;
}

Role role_from_position(const std::string& position, const std::string& ctx) {
    if (position == "TOP") return Role::Top;
    if (position == "JUNGLE") return Role::Jungle;
    if (position == "MIDDLE") return Role::Mid;
    if (position == "BOTTOM") return Role::Bottom;
    if (position == "UTILITY") return Role::Support;
    throw SchemaError(ctx, "unknown team position '" + position + "'");
}

const char* position_from_role(Role role) {
    switch (role) {
        case Role::Top: return "TOP";
        case Role::Jungle: return "JUNGLE";
        case Role::Mid: return "MIDDLE";
        case Role::Bottom: return "BOTTOM";
        case Role::Support: return "UTILITY";
    }
    return "TOP";
}

const char* kTierUpper[] = {"IRON",    "BRONZE",  "SILVER", "GOLD",
                            "PLATINUM", "EMERALD", "DIAMOND", "MASTER",
                            "GRANDMASTER", "CHALLENGER"};

Tier tier_from_vendor(const std::string& text, const std::string& ctx) {
    for (int i = 0; i < 10; ++i)
        if (text == kTierUpper[i]) return static_cast<Tier>(i);
    throw SchemaError(ctx, "unknown tier '" + text + "'");
}

Division division_from_vendor(const std::string& text, const std::string& ctx) {
    if (text == "I") return Division::I;
    if (text == "II") return Division::II;
    if (text == "III") return Division::III;
    if (text == "IV") return Division::IV;
    throw SchemaError(ctx, "unknown division '" + text + "'");
}

const char* division_to_vendor(Division d) {
    switch (d) {
        case Division::I: return "I";
        case Division::II: return "II";
        case Division::III: return "III";
        case Division::IV: return "IV";
    }
    return "I";
}

}  // namespace

VendorSummoner summoner_from_vendor(std::string_view raw_json) {
    const json doc = parse_document(raw_json, "summoner");
    VendorSummoner s;
    s.summoner_id = require_string(doc, "id", "");
    s.puuid = require_string(doc, "puuid", "");
    s.name = require_string(doc, "name", "");
    return s;
}

std::string summoner_to_vendor(const VendorSummoner& summoner) {
    json doc;
    doc["id"] = summoner.summoner_id;
    doc["puuid"] = summoner.puuid;
    doc["name"] = summoner.name;
    return doc.dump(2) + "\n";
}

std::vector<std::string> match_ids_from_vendor(std::string_view raw_json) {
    const json doc = parse_document(raw_json, "match ids");
    if (!doc.is_array()) throw SchemaError("match ids", "expected array");
    std::vector<std::string> ids;
    ids.reserve(doc.size());
    for (const json& entry : doc) {
        if (!entry.is_string())
            throw SchemaError("match ids", "expected string entries");
        ids.push_back(entry.get<std::string>());
    }
    return ids;
}

std::string match_ids_to_vendor(const std::vector<std::string>& ids) {
    return json(ids).dump(2) + "\n";
}

MatchRecord match_from_vendor(std::string_view raw_json) {
    const json doc = parse_document(raw_json, "vendor match");
    const json& metadata = require(doc, "metadata", "");
    const json& info = require(doc, "info", "");

    MatchRecord m;
    m.match_id = require_string(metadata, "matchId", "metadata.");
    m.queue_kind = queue_from_id(require_int(info, "queueId", "info."));
    m.duration_s = require_int(info, "gameDuration", "info.");
    if (m.duration_s <= 0) throw SchemaError("info.gameDuration", "must be positive");
    m.ended_early = require_bool(info, "gameEndedInEarlySurrender", "info.");

    const json& teams = require(info, "teams", "info.");
    if (!teams.is_array() || teams.size() != 2)
        throw CardinalityError("vendor match " + m.match_id +
                               " must carry exactly 2 teams");
    int winners = 0;
    for (const json& tj : teams) {
        const std::int64_t team_id = require_int(tj, "teamId", "info.teams.");
        const bool win = require_bool(tj, "win", "info.teams.");
        if (team_id == 100) m.teams[0].won = win;
        else if (team_id == 200) m.teams[1].won = win;
        else throw SchemaError("info.teams.teamId", "must be 100 or 200");
        winners += win ? 1 : 0;
    }
    if (winners != 1)
        throw SchemaError("info.teams.win", "exactly one team must have won");

    const json& participants = require(info, "participants", "info.");
    if (!participants.is_array() || participants.size() != 10)
        throw CardinalityError("vendor match " + m.match_id +
                               " must carry exactly 10 participants");
    for (std::size_t i = 0; i < participants.size(); ++i) {
        const std::string ctx = "info.participants[" + std::to_string(i) + "].";
        const json& pj = participants[i];
        const std::int64_t team_id = require_int(pj, "teamId", ctx);
        if (team_id != 100 && team_id != 200)
            throw SchemaError(ctx + "teamId", "must be 100 or 200");
        TeamSide& side = m.teams[team_id == 100 ? 0 : 1];

        PlayerRow p;
        p.player_id = require_string(pj, "puuid", ctx);
        p.role = role_from_position(require_string(pj, "teamPosition", ctx),
                                    ctx + "teamPosition");
        p.gold = require_int(pj, "goldEarned", ctx);
        p.experience = require_int(pj, "champExperience", ctx);
        p.vision_score = require_int(pj, "visionScore", ctx);
        p.kills = require_int(pj, "kills", ctx);
        p.deaths = require_int(pj, "deaths", ctx);
        p.assists = require_int(pj, "assists", ctx);
        p.tower_kills = require_int(pj, "turretKills", ctx);
        p.elite_kills = require_int(pj, "dragonKills", ctx) +
                        require_int(pj, "baronKills", ctx);
        p.minion_kills = require_int(pj, "totalMinionsKilled", ctx);
        side.players.push_back(std::move(p));
    }
    for (int t = 0; t < 2; ++t)
        if (m.teams[t].players.size() != 5)
            throw CardinalityError("vendor match " + m.match_id + " team " +
                                   std::to_string(t) + " does not have 5 players");
    return m;
}

std::vector<VendorParticipant> participants_from_vendor(std::string_view raw_json) {
    const json doc = parse_document(raw_json, "vendor match");
    const json& info = require(doc, "info", "");
    const json& participants = require(info, "participants", "info.");
    if (!participants.is_array())
        throw SchemaError("info.participants", "expected array");
    std::vector<VendorParticipant> out;
    out.reserve(participants.size());
    for (std::size_t i = 0; i < participants.size(); ++i) {
        const std::string ctx = "info.participants[" + std::to_string(i) + "].";
        out.push_back({require_string(participants[i], "puuid", ctx),
                       require_string(participants[i], "summonerId", ctx)});
    }
    return out;
}

std::string match_to_vendor(const MatchRecord& match,
                            const std::vector<std::string>& summoner_ids) {
    if (summoner_ids.size() != 10)
        throw DomainError("vendor rendering needs 10 summoner ids");

    json doc;
    json puuids = json::array();
    json participants = json::array();
    std::size_t slot = 0;
    for (int t = 0; t < 2; ++t) {
        const TeamSide& side = match.teams[static_cast<std::size_t>(t)];
        if (side.players.size() != 5)
            throw CardinalityError("vendor rendering needs 5 players per team");
        for (const PlayerRow& p : side.players) {
            puuids.push_back(p.player_id);
            json pj;
            pj["puuid"] = p.player_id;
            pj["summonerId"] = summoner_ids[slot++];
            pj["teamId"] = t == 0 ? 100 : 200;
            pj["teamPosition"] = position_from_role(p.role);
            pj["goldEarned"] = p.gold;
            pj["champExperience"] = p.experience;
            pj["visionScore"] = p.vision_score;
            pj["kills"] = p.kills;
            pj["deaths"] = p.deaths;
            pj["assists"] = p.assists;
            pj["turretKills"] = p.tower_kills;
            pj["dragonKills"] = p.elite_kills;
            pj["baronKills"] = 0;
            pj["totalMinionsKilled"] = p.minion_kills;
            pj["win"] = side.won;
            participants.push_back(std::move(pj));
        }
    }
    doc["metadata"]["matchId"] = match.match_id;
    doc["metadata"]["participants"] = std::move(puuids);
    doc["info"]["queueId"] = queue_to_id(match.queue_kind);
    doc["info"]["gameDuration"] = match.duration_s;
    doc["info"]["gameEndedInEarlySurrender"] = match.ended_early;
    doc["info"]["participants"] = std::move(participants);
    doc["info"]["teams"] = json::array(
        {{{"teamId", 100}, {"win", match.teams[0].won}},
         {{"teamId", 200}, {"win", match.teams[1].won}}});
    return doc.dump(2) + "\n";
}

namespace {

int participant_in_range(std::int64_t value, const std::string& ctx) {
    if (value < 1 || value > 10)
        throw SchemaError(ctx, "participant index must lie in 1..10");
    return static_cast<int>(value);
}

std::optional<TimelineEvent> event_from_vendor(const json& ej, const std::string& ctx) {
    const std::string type = require_string(ej, "type", ctx);
    TimelineEvent e;
    if (type == "CHAMPION_KILL") e.kind = EventKind::ChampionKill;
    else if (type == "BUILDING_KILL") e.kind = EventKind::BuildingKill;
    else if (type == "ELITE_MONSTER_KILL") e.kind = EventKind::EliteMonsterKill;
    else return std::nullopt;  // other event types carry no assist signal

    e.timestamp_ms = require_int(ej, "timestamp", ctx);
    e.killer_id = participant_in_range(require_int(ej, "killerId", ctx),
                                       ctx + "killerId");
    if (e.kind == EventKind::ChampionKill)
        e.victim_id = participant_in_range(require_int(ej, "victimId", ctx),
                                           ctx + "victimId");
    auto assisters = ej.find("assistingParticipantIds");
    if (assisters != ej.end() && !assisters->is_null()) {
        if (!assisters->is_array())
            throw SchemaError(ctx + "assistingParticipantIds", "expected array");
        for (const json& a : *assisters) {
            if (!a.is_number_integer())
                throw SchemaError(ctx + "assistingParticipantIds",
                                  "expected integer entries");
            const int idx = participant_in_range(
                a.get<std::int64_t>(), ctx + "assistingParticipantIds");
            if (idx != e.killer_id) e.assister_ids.push_back(idx);
        }
    }
    auto position = ej.find("position");
    if (position != ej.end() && !position->is_null()) {
        e.position = MapPoint{
            static_cast<double>(require_int(*position, "x", ctx + "position.")),
            static_cast<double>(require_int(*position, "y", ctx + "position."))};
    }
    return e;
}

json event_to_vendor(const TimelineEvent& e) {
    json ej;
    switch (e.kind) {
        case EventKind::ChampionKill: ej["type"] = "CHAMPION_KILL"; break;
        case EventKind::BuildingKill: ej["type"] = "BUILDING_KILL"; break;
        case EventKind::EliteMonsterKill: ej["type"] = "ELITE_MONSTER_KILL"; break;
    }
    ej["timestamp"] = e.timestamp_ms;
    ej["killerId"] = e.killer_id;
    if (e.victim_id) ej["victimId"] = *e.victim_id;
    if (!e.assister_ids.empty()) ej["assistingParticipantIds"] = e.assister_ids;
    if (e.position)
        ej["position"] = {{"x", std::llround(e.position->x)},
                          {"y", std::llround(e.position->y)}};
    return ej;
}

}  // namespace

Timeline timeline_from_vendor(std::string_view raw_json) {
    const json doc = parse_document(raw_json, "vendor timeline");
    const json& metadata = require(doc, "metadata", "");
    const json& info = require(doc, "info", "");

    Timeline tl;
    tl.match_id = require_string(metadata, "matchId", "metadata.");

    const json& frames = require(info, "frames", "info.");
    if (!frames.is_array()) throw SchemaError("info.frames", "expected array");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const std::string ctx = "info.frames[" + std::to_string(i) + "].";
        const json& fj = frames[i];
        const std::int64_t frame_ts = require_int(fj, "timestamp", ctx);

        auto events = fj.find("events");
        if (events != fj.end() && events->is_array()) {
            for (std::size_t e = 0; e < events->size(); ++e) {
                auto parsed = event_from_vendor(
                    (*events)[e], ctx + "events[" + std::to_string(e) + "].");
                if (parsed) tl.events.push_back(std::move(*parsed));
            }
        }

        auto pframes = fj.find("participantFrames");
        if (pframes != fj.end() && pframes->is_object() && !pframes->empty()) {
            PositionFrame frame;
            frame.timestamp_ms = frame_ts;
            for (auto it = pframes->begin(); it != pframes->end(); ++it) {
                int participant = 0;
                try {
                    participant = std::stoi(it.key());
                } catch (const std::exception&) {
                    throw SchemaError(ctx + "participantFrames",
                                      "keys must be participant indices");
                }
                participant_in_range(participant, ctx + "participantFrames");
                const json& pos =
                    require(it.value(), "position", ctx + "participantFrames.");
                frame.positions[participant] = MapPoint{
                    static_cast<double>(require_int(pos, "x", ctx)),
                    static_cast<double>(require_int(pos, "y", ctx))};
            }
            tl.frames.push_back(std::move(frame));
        }
    }
    return tl;
}

std::string timeline_to_vendor(const Timeline& timeline) {
    json frames = json::array();
    std::size_t next_event = 0;

    // Events are grouped into the canonical position frames by timestamp;
    // assumes events sorted ascending (canonical documents are).
    for (const PositionFrame& f : timeline.frames) {
        json fj;
        fj["timestamp"] = f.timestamp_ms;
        json events = json::array();
        while (next_event < timeline.events.size() &&
               timeline.events[next_event].timestamp_ms <= f.timestamp_ms)
            events.push_back(event_to_vendor(timeline.events[next_event++]));
        fj["events"] = std::move(events);
        json pframes = json::object();
        for (const auto& [participant, point] : f.positions)
            pframes[std::to_string(participant)] = {
                {"position",
                 {{"x", std::llround(point.x)}, {"y", std::llround(point.y)}}}};
        fj["participantFrames"] = std::move(pframes);
        frames.push_back(std::move(fj));
    }

    if (next_event < timeline.events.size()) {
        json fj;
        fj["timestamp"] = timeline.events.back().timestamp_ms;
        json events = json::array();
        while (next_event < timeline.events.size())
            events.push_back(event_to_vendor(timeline.events[next_event++]));
        fj["events"] = std::move(events);
        frames.push_back(std::move(fj));
    }

    json doc;
    doc["metadata"]["matchId"] = timeline.match_id;
    doc["info"]["frames"] = std::move(frames);
    return doc.dump(2) + "\n";
}

std::optional<Rank> rank_from_vendor_entries(std::string_view raw_json) {
    const json doc = parse_document(raw_json, "league entries");
    if (!doc.is_array()) throw SchemaError("league entries", "expected array");

    const json* chosen = nullptr;
    for (const json& entry : doc) {
        const std::string queue = require_string(entry, "queueType", "entries.");
        if (queue == "RANKED_SOLO_5x5") {
            chosen = &entry;
            break;
        }
        if (queue == "RANKED_FLEX_SR" && chosen == nullptr) chosen = &entry;
    }
    if (chosen == nullptr) return std::nullopt;

    Rank r;
    r.tier = tier_from_vendor(require_string(*chosen, "tier", "entries."),
                              "entries.tier");
    r.league_points =
        static_cast<int>(require_int(*chosen, "leaguePoints", "entries."));
    if (tier_has_division(r.tier)) {
        r.division = division_from_vendor(
            require_string(*chosen, "rank", "entries."), "entries.rank");
    }
    return r;
}

std::string rank_to_vendor_entries(const std::optional<Rank>& rank,
                                   const std::string& summoner_id) {
    json entries = json::array();
    if (rank) {
        json entry;
        entry["summonerId"] = summoner_id;
        entry["queueType"] = "RANKED_SOLO_5x5";
        entry["tier"] = kTierUpper[static_cast<int>(rank->tier)];
        entry["rank"] =
            rank->division ? division_to_vendor(*rank->division) : "I";
        entry["leaguePoints"] = rank->league_points;
        entries.push_back(std::move(entry));
    }
    return entries.dump(2) + "\n";
}

}  // namespace teamspectra::client
