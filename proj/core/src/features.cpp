#include "teamspectra/features.hpp"

#include <algorithm>
#include <cmath>

#include "teamspectra/errors.hpp"
#include "teamspectra/ingest.hpp"
#include "teamspectra/stats.hpp"

namespace teamspectra::analytics {

Level parse_level(const std::string& text) {
    if (text == "individual") return Level::Individual;
    if (text == "collective") return Level::Collective;
    throw DomainError("unknown level '" + text + "' (individual or collective)");
}

std::string to_string(Level level) {
    return level == Level::Individual ? "individual" : "collective";
}

namespace {

int column_of(const std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw DomainError("feature matrix has no column " + name);
    return static_cast<int>(it - names.begin());
}

const std::vector<std::string> kIndividualNames = {
    "vision_pm", "gold_pm", "xp_pm", "player_in_degree", "player_out_degree"};
const std::vector<std::string> kCollectiveNames = {
    "avg_gold_pm", "avg_vision_pm", "avg_xp_pm", "team_in_centrality",
    "team_out_centrality", "egr"};

}  // namespace

int FeatureMatrix::gold_column() const {
    return column_of(names, names == kCollectiveNames ? "avg_gold_pm" : "gold_pm");
}

std::vector<int> FeatureMatrix::centralization_columns() const {
    return {column_of(names, "team_in_centrality"),
            column_of(names, "team_out_centrality"), column_of(names, "egr")};
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    if (q < 0.0 || q > 1.0) throw DomainError("quantile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::optional<int> team_tier_ordinal(const TeamSide& team) {
    int sum = 0;
    int count = 0;
    for (const PlayerRow& p : team.players) {
        if (!p.rank) continue;
        sum += tier_ordinal(p.rank->tier);
        ++count;
    }
    if (count == 0) return std::nullopt;
    return static_cast<int>(
        std::llround(static_cast<double>(sum) / static_cast<double>(count)));
}

FeatureMatrix assemble_features(Level level,
                                const std::vector<MatchRecord>& matches,
                                const GraphIndex& graphs, AssemblyStats* stats) {
    FeatureMatrix out;
    out.names = level == Level::Individual ? kIndividualNames : kCollectiveNames;

    AssemblyStats local;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> capped_rows;  // collective rows awaiting the cap
    std::vector<double> finite_egr;

    for (const MatchRecord& match : matches) {
        const auto found = graphs.find(match.match_id);
        if (found == graphs.end())
            throw MissingGraph("no team graphs for match " + match.match_id);

        for (int t = 0; t < 2; ++t) {
            const graph::GraphMetrics& gm = found->second[t];
            if (gm.total_weight <= 0.0) {
                ++local.teams_dropped_empty_graph;
                continue;
            }
            const TeamSide& side = match.teams[t];
            const int won = side.won ? 1 : 0;

            if (level == Level::Collective) {
                if (!gm.egr.disconnected) finite_egr.push_back(gm.egr.value);
                double xp = 0.0, vision = 0.0, gold = 0.0;
                for (const PlayerRow& p : side.players) {
                    const PerMinuteMetrics pm =
                        ingest::per_minute_metrics(p, match.duration_s);
                    xp += pm.xp_pm;
                    vision += pm.vision_pm;
                    gold += pm.gold_pm;
                }
                if (gm.egr.disconnected) capped_rows.push_back(rows.size());
                rows.push_back({gold / 5.0, vision / 5.0, xp / 5.0,
                                gm.in_centralization, gm.out_centralization,
                                gm.egr.disconnected ? 0.0 : gm.egr.value});
                out.match_ids.push_back(match.match_id);
                out.teams.push_back(t);
                out.participants.push_back(0);
                out.labels.push_back(won);
            } else {
                const std::array<int, 5> members = team_participants(t);
                for (int node = 0; node < graph::kTeamSize; ++node) {
                    const PlayerRow& p = side.players[node];
                    const PerMinuteMetrics pm =
                        ingest::per_minute_metrics(p, match.duration_s);
                    rows.push_back({pm.vision_pm, pm.gold_pm, pm.xp_pm,
                                    gm.in_degree(node), gm.out_degree(node)});
                    out.match_ids.push_back(match.match_id);
                    out.teams.push_back(t);
                    out.participants.push_back(members[node]);
                    out.labels.push_back(won);
                }
            }
        }
    }

    if (!capped_rows.empty()) {
        if (finite_egr.empty())
            throw DomainError("every team graph is disconnected; resistance scale undefined");
        local.egr_cap = quantile(finite_egr, 0.99);
        local.teams_winsorized = static_cast<int>(capped_rows.size());
        for (std::size_t r : capped_rows) rows[r].back() = local.egr_cap;
    } else if (level == Level::Collective && !finite_egr.empty()) {
        local.egr_cap = quantile(finite_egr, 0.99);
    }

    out.x.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(out.names.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            out.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c];

    standardize_in_place(out.x);
    if (stats) *stats = local;
    return out;
}

}  // namespace teamspectra::analytics
