#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace teamspectra {

enum class QueueKind { RankedSolo, RankedFlex, Other };

enum class Role { Top, Mid, Bottom, Jungle, Support };

// Ladder tiers, ordered weakest to strongest. Tiers below Master carry a
// division (IV..I) and 0..100 league points.
enum class Tier {
    Iron,
    Bronze,
    Silver,
    Gold,
    Platinum,
    Emerald,
    Diamond,
    Master,
    Grandmaster,
    Challenger
};

enum class Division { IV, III, II, I };

struct Rank {
    Tier tier = Tier::Iron;
    std::optional<Division> division;  // present iff tier < Master
    int league_points = 0;

    bool operator==(const Rank&) const = default;
};

inline int tier_ordinal(Tier t) { return static_cast<int>(t); }
inline bool tier_has_division(Tier t) { return t < Tier::Master; }

struct PlayerRow {
    std::string player_id;
    Role role = Role::Top;
    std::int64_t gold = 0;
    std::int64_t experience = 0;
    std::int64_t vision_score = 0;
    std::int64_t kills = 0;
    std::int64_t deaths = 0;
    std::int64_t assists = 0;
    std::int64_t tower_kills = 0;
    std::int64_t elite_kills = 0;
    std::int64_t minion_kills = 0;
    std::optional<Rank> rank;

    bool operator==(const PlayerRow&) const = default;
};

struct TeamSide {
    bool won = false;
    std::vector<PlayerRow> players;  // exactly 5 after parsing

    bool operator==(const TeamSide&) const = default;
};

struct MatchRecord {
    std::string match_id;
    QueueKind queue_kind = QueueKind::Other;
    std::int64_t duration_s = 0;
    bool ended_early = false;
    std::array<TeamSide, 2> teams;

    bool operator==(const MatchRecord&) const = default;
};

// Per-minute rates derived from a PlayerRow and the match duration.
struct PerMinuteMetrics {
    double gold_pm = 0.0;
    double xp_pm = 0.0;
    double vision_pm = 0.0;
    double assists_pm = 0.0;
    double minions_pm = 0.0;
};

enum class EventKind { ChampionKill, BuildingKill, EliteMonsterKill };

struct MapPoint {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const MapPoint&) const = default;
};

// One timestamped in-game event. Participant indices are 1..10; the first
// team holds 1..5 and the second 6..10.
struct TimelineEvent {
    std::int64_t timestamp_ms = 0;
    EventKind kind = EventKind::ChampionKill;
    int killer_id = 0;
    std::optional<int> victim_id;
    std::vector<int> assister_ids;
    std::optional<MapPoint> position;

    bool operator==(const TimelineEvent&) const = default;
};

// Sampled participant positions at one instant. Used to locate teammates
// relative to a kill when awarding map-pressure assists.
struct PositionFrame {
    std::int64_t timestamp_ms = 0;
    std::map<int, MapPoint> positions;  // participant index -> map point

    bool operator==(const PositionFrame&) const = default;
};

struct Timeline {
    std::string match_id;
    std::vector<TimelineEvent> events;
    std::vector<PositionFrame> frames;  // sorted by timestamp

    bool operator==(const Timeline&) const = default;
};

// Participant indices (1..10) for one side of a match.
inline std::array<int, 5> team_participants(int team_index) {
    const int base = team_index == 0 ? 1 : 6;
    return {base, base + 1, base + 2, base + 3, base + 4};
}

const char* to_string(QueueKind q);
const char* to_string(Role r);
const char* to_string(Tier t);
const char* to_string(Division d);
const char* to_string(EventKind k);

}  // namespace teamspectra
