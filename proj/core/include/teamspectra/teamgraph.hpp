#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "teamspectra/match.hpp"

namespace teamspectra::graph {

inline constexpr int kTeamSize = 5;

enum class AssistKind { KillAssist, TowerAssist, EliteAssist, MapPressure };

// One directed assist: giver helped receiver secure an objective.
// Node indices are team-local (0..4).
struct AssistEdgeEvent {
    int giver = 0;
    int receiver = 0;
    AssistKind kind = AssistKind::KillAssist;
    std::int64_t timestamp_ms = 0;
};

// 5-node directed weighted assist graph for one team in one match.
// weight(i, j) counts assists flowing from node i to node j; the diagonal
// is identically zero and total_weight() equals the aggregated event count.
class TeamGraph {
public:
    using Matrix = Eigen::Matrix<double, kTeamSize, kTeamSize>;

    TeamGraph() : w_(Matrix::Zero()) {}
    explicit TeamGraph(const Matrix& w);

    double weight(int from, int to) const { return w_(from, to); }
    const Matrix& weights() const { return w_; }
    double total_weight() const { return w_.sum(); }

private:
    Matrix w_;
};

enum class Direction { In, Out };

struct ExtractOptions {
    double pressure_radius = 2000.0;  // map units
    bool enable_map_pressure = true;
};

struct ExtractStats {
    int kills_without_position = 0;  // champion kills skipped for pressure
};

// Pulls every assist edge for one team out of a timeline. Explicit
// assisters yield one edge per assister for all three event kinds; champion
// kills additionally award a MapPressure edge to each teammate who is
// neither the killer nor a listed assister and whose recorded position
// (nearest frame at or before the kill) lies within pressure_radius of the
// kill position.
std::vector<AssistEdgeEvent> extract_assists(const Timeline& timeline,
                                             const std::array<int, 5>& team,
                                             const ExtractOptions& opts = {},
                                             ExtractStats* stats = nullptr);

// Unit weight per event, all kinds equal.
TeamGraph build_graph(const std::vector<AssistEdgeEvent>& events);

// In: sum of column `node`; Out: sum of row `node`.
double degree(const TeamGraph& g, int node, Direction dir);

// Freeman-style degree centralization in [0, 1]:
//     sum_i (C_max - C_i) / ((N - 1) * A)
// Throws UndefinedForEmptyGraph when the graph has zero total weight.
double centralization(const TeamGraph& g, Direction dir);

struct EgrResult {
    bool disconnected = false;
    double value = 0.0;  // meaningful iff !disconnected

    bool operator==(const EgrResult&) const = default;
};

// Effective graph resistance of the symmetrized graph W + W^T:
//     EGR = N * sum over the N-1 nonzero Laplacian eigenvalues of 1/mu.
// More than one eigenvalue at (relative) zero_tol means the symmetrized
// graph is disconnected; that is reported as a value, not an error.
EgrResult effective_graph_resistance(const TeamGraph& g, double zero_tol = 1e-9);

// All five per-team metrics in one pass.
struct GraphMetrics {
    Eigen::Matrix<double, kTeamSize, 1> in_degree;
    Eigen::Matrix<double, kTeamSize, 1> out_degree;
    double total_weight = 0.0;
    double in_centralization = 0.0;   // nan when total weight is zero
    double out_centralization = 0.0;  // nan when total weight is zero
    EgrResult egr;
};

GraphMetrics compute_metrics(const TeamGraph& g, double zero_tol = 1e-9);

}  // namespace teamspectra::graph
