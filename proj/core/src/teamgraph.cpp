#include "teamspectra/teamgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "teamspectra/errors.hpp"

namespace teamspectra::graph {

TeamGraph::TeamGraph(const Matrix& w) : w_(w) {
    for (int i = 0; i < kTeamSize; ++i) {
        if (w_(i, i) != 0.0)
            throw std::invalid_argument("team graph diagonal must be zero");
        for (int j = 0; j < kTeamSize; ++j)
            if (w_(i, j) < 0.0)
                throw std::invalid_argument("team graph weights must be non-negative");
    }
}

namespace {

int local_node(const std::array<int, 5>& team, int participant) {
    for (int i = 0; i < kTeamSize; ++i)
        if (team[i] == participant) return i;
    return -1;
}

AssistKind explicit_kind(EventKind k) {
    switch (k) {
        case EventKind::ChampionKill: return AssistKind::KillAssist;
        case EventKind::BuildingKill: return AssistKind::TowerAssist;
        case EventKind::EliteMonsterKill: return AssistKind::EliteAssist;
    }
    return AssistKind::KillAssist;
}

// Positions of the team at the nearest frame at or before t_ms. Frames are
// sorted by timestamp; participants absent from every frame up to t_ms have
// no recorded position.
const PositionFrame* frame_at_or_before(const std::vector<PositionFrame>& frames,
                                        std::int64_t t_ms) {
    const PositionFrame* best = nullptr;
    for (const PositionFrame& f : frames) {
        if (f.timestamp_ms > t_ms) break;
        best = &f;
    }
    return best;
}

double distance(const MapPoint& a, const MapPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

std::vector<AssistEdgeEvent> extract_assists(const Timeline& timeline,
                                             const std::array<int, 5>& team,
                                             const ExtractOptions& opts,
                                             ExtractStats* stats) {
    std::vector<AssistEdgeEvent> edges;
    for (const TimelineEvent& ev : timeline.events) {
        const int killer = local_node(team, ev.killer_id);
        if (killer < 0) continue;  // opposing team's event

        bool is_assister[kTeamSize] = {};
        for (int assister_id : ev.assister_ids) {
            const int a = local_node(team, assister_id);
            if (a < 0 || a == killer) continue;
            is_assister[a] = true;
            edges.push_back({a, killer, explicit_kind(ev.kind), ev.timestamp_ms});
        }

        if (ev.kind != EventKind::ChampionKill || !opts.enable_map_pressure)
            continue;
        if (!ev.position) {
            if (stats) ++stats->kills_without_position;
            continue;
        }
        const PositionFrame* frame =
            frame_at_or_before(timeline.frames, ev.timestamp_ms);
        if (!frame) continue;
        for (int node = 0; node < kTeamSize; ++node) {
            if (node == killer || is_assister[node]) continue;
            auto it = frame->positions.find(team[node]);
            if (it == frame->positions.end()) continue;
            if (distance(it->second, *ev.position) <= opts.pressure_radius)
                edges.push_back(
                    {node, killer, AssistKind::MapPressure, ev.timestamp_ms});
        }
    }
    return edges;
}

TeamGraph build_graph(const std::vector<AssistEdgeEvent>& events) {
    TeamGraph::Matrix w = TeamGraph::Matrix::Zero();
    for (const AssistEdgeEvent& e : events) {
        if (e.giver < 0 || e.giver >= kTeamSize || e.receiver < 0 ||
            e.receiver >= kTeamSize)
            throw std::invalid_argument("assist edge node index out of range");
        if (e.giver == e.receiver)
            throw std::invalid_argument("assist edge cannot be a self-loop");
        w(e.giver, e.receiver) += 1.0;
    }
    return TeamGraph(w);
}

double degree(const TeamGraph& g, int node, Direction dir) {
    if (node < 0 || node >= kTeamSize)
        throw std::invalid_argument("node index out of range");
    return dir == Direction::In ? g.weights().col(node).sum()
                                : g.weights().row(node).sum();
}

namespace {

double centralization_of(const Eigen::Matrix<double, kTeamSize, 1>& degrees,
                         double total) {
    const double dmax = degrees.maxCoeff();
    // sum_i (dmax - d_i) == N * dmax - A since degrees sum to A
    return (kTeamSize * dmax - total) / ((kTeamSize - 1) * total);
}

}  // namespace

double centralization(const TeamGraph& g, Direction dir) {
    const double total = g.total_weight();
    if (total <= 0.0)
        throw UndefinedForEmptyGraph(
            "centralization is undefined for a graph with zero assist weight");
    Eigen::Matrix<double, kTeamSize, 1> degrees;
    for (int i = 0; i < kTeamSize; ++i) degrees(i) = degree(g, i, dir);
    return centralization_of(degrees, total);
}

EgrResult effective_graph_resistance(const TeamGraph& g, double zero_tol) {
    const TeamGraph::Matrix sym = g.weights() + g.weights().transpose();
    TeamGraph::Matrix lap = -sym;
    for (int i = 0; i < kTeamSize; ++i) lap(i, i) = sym.row(i).sum();

    Eigen::SelfAdjointEigenSolver<TeamGraph::Matrix> solver(lap);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("laplacian eigendecomposition failed");
    const auto mu = solver.eigenvalues();  // ascending

    const double largest = mu(kTeamSize - 1);
    const double cutoff = largest > 0.0 ? zero_tol * largest : zero_tol;
    int zeros = 0;
    for (int i = 0; i < kTeamSize; ++i)
        if (mu(i) <= cutoff) ++zeros;
    if (zeros > 1) return {true, 0.0};

    double inv_sum = 0.0;
    for (int i = 1; i < kTeamSize; ++i) inv_sum += 1.0 / mu(i);
    return {false, kTeamSize * inv_sum};
}

GraphMetrics compute_metrics(const TeamGraph& g, double zero_tol) {
    GraphMetrics m;
    for (int i = 0; i < kTeamSize; ++i) {
        m.in_degree(i) = degree(g, i, Direction::In);
        m.out_degree(i) = degree(g, i, Direction::Out);
    }
    m.total_weight = g.total_weight();
    if (m.total_weight > 0.0) {
        m.in_centralization = centralization_of(m.in_degree, m.total_weight);
        m.out_centralization = centralization_of(m.out_degree, m.total_weight);
    } else {
        m.in_centralization = std::numeric_limits<double>::quiet_NaN();
        m.out_centralization = std::numeric_limits<double>::quiet_NaN();
    }
    m.egr = effective_graph_resistance(g, zero_tol);
    return m;
}

}  // namespace teamspectra::graph
