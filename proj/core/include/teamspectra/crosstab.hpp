#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teamspectra/cluster.hpp"

namespace teamspectra::analytics {

// One team in one match, after clustering: the team's collective cluster
// role plus the count of members in each individual playstyle role.
struct TeamObservation {
    std::string match_id;
    int team = 0;
    bool won = false;
    ClusterRole collective_role = ClusterRole::Average;
    int acquiring = 0;
    int sharing = 0;
    int average = 0;
};

// The playstyle held by at least 3 of the team's 5 players, if any. At
// most one playstyle can reach that bar, so the result is unambiguous.
std::optional<ClusterRole> majority_type(const TeamObservation& team);

// A team is low-skilled when sharing + average members form a majority
// (>= 3 of 5) and high-skilled when acquiring + average members do. Both
// or neither counts as mixed.
enum class SkillClass { LowSkilled, Mixed, HighSkilled };

SkillClass skill_class(const TeamObservation& team);
std::string to_string(SkillClass skill);

struct WinRateRow {
    std::string scope;  // "team", "player", or "overall"
    std::string group;
    long long n = 0;  // teams, or players for player-scope rows
    long long wins = 0;
    double win_rate = 0.0;  // nan when the group is empty
};

// Win rate within each team cluster and each player cluster, plus an
// overall row. When both teams of every match are present the overall
// rate is exactly 0.5: each match contributes one win and one loss.
std::vector<WinRateRow> marginal_win_rates(
    const std::vector<TeamObservation>& teams);

// Win rate for every (collective role, skill class) combination,
// role-major order, scope "team".
std::vector<WinRateRow> consolidated_win_rates(
    const std::vector<TeamObservation>& teams);

struct CrosstabCell {
    long long matches = 0;
    long long wins = 0;
    double win_rate = 0.0;  // nan when empty
};

struct WinRateTable {
    std::vector<std::string> rows;  // collective roles
    std::vector<std::string> cols;  // majority playstyles
    std::vector<std::vector<CrosstabCell>> cells;  // cells[row][col]
    std::vector<CrosstabCell> row_totals;  // every team with the row label
};

// Team clusters crossed with the majority playstyle among each team's
// players. Teams where no playstyle reaches 3 of 5 fall outside every
// column but still count toward their row's total.
WinRateTable crosstab(const std::vector<TeamObservation>& teams);

struct HeadToHead {
    std::vector<std::string> groups;  // (role, skill) combinations
    Eigen::MatrixXd matches;          // ordered-pair encounter counts
    Eigen::MatrixXd win_rate;         // row group's rate vs col group; nan when empty
};

// Pairs the two teams of each match; matches with a missing side are
// skipped. Each pairing feeds two cells, one per ordering.
HeadToHead head_to_head(const std::vector<TeamObservation>& teams);

}  // namespace teamspectra::analytics
