#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teamspectra/match.hpp"
#include "teamspectra/teamgraph.hpp"

namespace teamspectra::analytics {

enum class Level { Individual, Collective };

Level parse_level(const std::string& text);  // "individual" | "collective"
std::string to_string(Level level);

// One row per player (individual) or per team (collective), z-scored.
// Individual columns: vision_pm, gold_pm, xp_pm, player_in_degree,
// player_out_degree. Collective columns: avg_gold_pm, avg_vision_pm,
// avg_xp_pm, team_in_centrality, team_out_centrality, egr.
struct FeatureMatrix {
    Eigen::MatrixXd x;
    std::vector<std::string> names;
    std::vector<std::string> match_ids;  // row -> source match
    std::vector<int> teams;              // row -> team index (0 or 1)
    std::vector<int> participants;       // row -> participant id; 0 for teams
    std::vector<int> labels;             // 1 = row's team won

    // Column positions labeling relies on.
    int gold_column() const;
    std::vector<int> centralization_columns() const;  // collective only
};

struct AssemblyStats {
    int teams_dropped_empty_graph = 0;  // zero assist weight: no centralization
    int teams_winsorized = 0;           // disconnected: resistance capped
    double egr_cap = 0.0;               // the p99 value used for capping
};

// Per-match graph metrics, one entry per team.
using GraphIndex = std::map<std::string, std::array<graph::GraphMetrics, 2>>;

// Joins box-score metrics with graph metrics and z-scores every column
// (population standard deviation). Every match must have graph metrics for
// both teams (MissingGraph otherwise). Teams whose graph has zero total
// weight are dropped (their centralization is undefined); disconnected
// teams get their resistance replaced by the 99th percentile of the finite
// values (linear-interpolation quantile), so one unreachable player does
// not dominate the scale. A constant column raises DegenerateMatrix.
FeatureMatrix assemble_features(Level level,
                                const std::vector<MatchRecord>& matches,
                                const GraphIndex& graphs,
                                AssemblyStats* stats = nullptr);

// Quantile with linear interpolation between closest ranks; q in [0, 1].
double quantile(std::vector<double> values, double q);

// Team skill tier: the mean tier ordinal of ranked players, rounded to
// nearest. Empty when no player on the team has a rank.
std::optional<int> team_tier_ordinal(const TeamSide& team);

}  // namespace teamspectra::analytics
