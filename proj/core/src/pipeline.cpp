#include "teamspectra/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "teamspectra/cluster.hpp"
#include "teamspectra/crosstab.hpp"
#include "teamspectra/csv.hpp"
#include "teamspectra/efa.hpp"
#include "teamspectra/errors.hpp"
#include "teamspectra/evaluate.hpp"
#include "teamspectra/features.hpp"
#include "teamspectra/ingest.hpp"
#include "teamspectra/learn.hpp"
#include "teamspectra/rng.hpp"
#include "teamspectra/stats.hpp"
#include "teamspectra/svg.hpp"
#include "teamspectra/synth.hpp"
#include "teamspectra/teamgraph.hpp"

namespace teamspectra::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

bool PipelineConfig::stage_enabled(const std::string& name) const {
    return std::find(stages.begin(), stages.end(), name) != stages.end();
}

namespace {

struct Context {
    const PipelineConfig& config;
    fs::path out;
    fs::path corpus;
};

// ---------------------------------------------------------------------------
// Stage wiring: what each stage consumes and leaves behind. "corpus" stands
// for the matches/ + timelines/ document tree; everything else is a file in
// the output directory.

struct StageSpec {
    const char* name;
    std::vector<const char*> needs;
    std::vector<const char*> produces;
};

const std::vector<StageSpec>& stage_specs() {
    static const std::vector<StageSpec> specs = {
        {"synth", {}, {"corpus"}},
        {"filter", {"corpus"}, {"filtered.csv"}},
        {"graphs", {"corpus", "filtered.csv"}, {"graphs.csv"}},
        {"features",
         {"corpus", "filtered.csv", "graphs.csv"},
         {"features_individual.csv", "features_collective.csv"}},
        {"efa",
         {"features_individual.csv", "features_collective.csv"},
         {"efa_individual_loadings.csv", "efa_collective_loadings.csv",
          "efa_individual_scores.csv", "efa_collective_scores.csv",
          "table1_loadings.csv"}},
        {"train",
         {"efa_individual_scores.csv", "efa_collective_scores.csv"},
         {"table2_eval.csv", "fig3_importances.csv"}},
        {"cluster",
         {"efa_individual_scores.csv", "efa_collective_scores.csv"},
         {"clusters_individual.csv", "clusters_collective.csv",
          "team_observations.csv"}},
        {"stats",
         {"team_observations.csv", "filtered.csv", "graphs.csv"},
         {"table3_winrates.csv", "table4_crosstab.csv",
          "table5_consolidated.csv", "fig6_h2h.csv", "fig7_rank_metrics.csv",
          "kw_tests.csv"}},
        {"report", {}, {"run_manifest.json"}},
    };
    return specs;
}

std::string producer_of(const std::string& artifact) {
    for (const StageSpec& spec : stage_specs())
        for (const char* p : spec.produces)
            if (artifact == p) return spec.name;
    return "unknown";
}

bool artifact_on_disk(const Context& ctx, const std::string& artifact) {
    if (artifact == "corpus") return fs::exists(ctx.corpus / "matches");
    return fs::exists(ctx.out / artifact);
}

// Verifies up front that every enabled stage will find its inputs, either
// from an earlier enabled stage or already on disk.
void check_dependencies(const Context& ctx,
                        const std::vector<std::string>& to_run) {
    std::set<std::string> will_have;
    for (const StageSpec& spec : stage_specs()) {
        const bool enabled =
            std::find(to_run.begin(), to_run.end(), spec.name) != to_run.end();
        if (!enabled) continue;
        for (const char* need : spec.needs)
            if (!will_have.contains(need) && !artifact_on_disk(ctx, need))
                throw StageError(spec.name,
                                 std::string("missing ") + need +
                                     " (produced by the " + producer_of(need) +
                                     " stage)");
        for (const char* p : spec.produces) will_have.insert(p);
    }
}

// ---------------------------------------------------------------------------
// Shared loaders.

std::string fmt(double v) { return csv::format_double(v); }

std::vector<std::string> ordered_match_ids(const csv::Table& filtered) {
    const std::size_t id_col = filtered.column("match_id");
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (const std::vector<std::string>& row : filtered.rows)
        if (seen.insert(row[id_col]).second) ids.push_back(row[id_col]);
    return ids;
}

analytics::GraphIndex load_graph_index(const fs::path& path) {
    const csv::Table t = csv::load_file(path);
    const std::size_t c_id = t.column("match_id");
    const std::size_t c_team = t.column("team");
    const std::size_t c_a = t.column("A");
    std::array<std::size_t, 5> c_in{}, c_out{};
    for (int i = 0; i < 5; ++i) {
        c_in[static_cast<std::size_t>(i)] =
            t.column("in_deg_" + std::to_string(i));
        c_out[static_cast<std::size_t>(i)] =
            t.column("out_deg_" + std::to_string(i));
    }
    const std::size_t c_cin = t.column("c_in");
    const std::size_t c_cout = t.column("c_out");
    const std::size_t c_egr = t.column("egr");
    const std::size_t c_disc = t.column("disconnected");

    analytics::GraphIndex index;
    for (const std::vector<std::string>& row : t.rows) {
        graph::GraphMetrics m;
        for (int i = 0; i < 5; ++i) {
            m.in_degree(i) = csv::parse_double(row[c_in[static_cast<std::size_t>(i)]]);
            m.out_degree(i) = csv::parse_double(row[c_out[static_cast<std::size_t>(i)]]);
        }
        m.total_weight = csv::parse_double(row[c_a]);
        m.in_centralization = csv::parse_double(row[c_cin]);
        m.out_centralization = csv::parse_double(row[c_cout]);
        m.egr.value = csv::parse_double(row[c_egr]);
        m.egr.disconnected = row[c_disc] == "1";
        const long long team = csv::parse_int(row[c_team]);
        if (team < 0 || team > 1)
            throw SchemaError("graphs.csv team", "must be 0 or 1");
        index[row[c_id]][static_cast<std::size_t>(team)] = m;
    }
    return index;
}

int find_col(const std::vector<std::string>& names, const std::string& name) {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return static_cast<int>(j);
    throw SchemaError(name, "column not found");
}

analytics::ClusterRole role_from_string(const std::string& text) {
    using analytics::ClusterRole;
    for (const ClusterRole role :
         {ClusterRole::Acquiring, ClusterRole::Sharing, ClusterRole::Average,
          ClusterRole::Cooperative, ClusterRole::NonCooperative})
        if (text == analytics::to_string(role)) return role;
    throw SchemaError("role", "unknown cluster role '" + text + "'");
}

// ---------------------------------------------------------------------------
// Stages.

void stage_synth(const Context& ctx) {
    synth::SynthConfig sc;
    sc.seed = ctx.config.seed;
    sc.matches = ctx.config.synth_matches;
    sc.beta_coop = ctx.config.beta_coop;
    sc.beta_skill = ctx.config.beta_skill;
    sc.rank_coop_correlation = ctx.config.rank_coop_correlation;
    sc.pressure_radius = ctx.config.pressure_radius;
    synth::write_corpus(synth::generate_corpus(sc), ctx.corpus);
}

void stage_filter(const Context& ctx) {
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry :
         fs::directory_iterator(ctx.corpus / "matches"))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<MatchRecord> records;
    records.reserve(files.size());
    for (const fs::path& f : files) records.push_back(ingest::load_match_file(f));

    ingest::FilterOptions opts;
    opts.include_ranked_solo = ctx.config.include_ranked_solo;
    opts.include_ranked_flex = ctx.config.include_ranked_flex;
    opts.min_duration_s = ctx.config.min_duration_s;
    const std::vector<MatchRecord> kept =
        ingest::filter_corpus(std::move(records), opts);

    csv::Table t;
    t.header = {"match_id", "team", "won", "tier"};
    for (const MatchRecord& m : kept) {
        for (int team = 0; team < 2; ++team) {
            const TeamSide& side = m.teams[static_cast<std::size_t>(team)];
            const std::optional<int> tier = analytics::team_tier_ordinal(side);
            t.rows.push_back({m.match_id, std::to_string(team),
                              side.won ? "1" : "0",
                              tier ? std::to_string(*tier) : ""});
        }
    }
    csv::save_file(ctx.out / "filtered.csv", t);
}

void stage_graphs(const Context& ctx) {
    const csv::Table filtered = csv::load_file(ctx.out / "filtered.csv");
    const std::vector<std::string> ids = ordered_match_ids(filtered);

    csv::Table t;
    t.header = graphs_csv_header();
    for (const std::string& id : ids) {
        const Timeline tl =
            ingest::load_timeline_file(ctx.corpus / "timelines" / (id + ".json"));
        append_graph_rows(t, id, tl, ctx.config.pressure_radius);
    }
    csv::save_file(ctx.out / "graphs.csv", t);
}

void stage_features(const Context& ctx) {
    const csv::Table filtered = csv::load_file(ctx.out / "filtered.csv");
    const std::vector<std::string> ids = ordered_match_ids(filtered);
    std::vector<MatchRecord> matches;
    matches.reserve(ids.size());
    for (const std::string& id : ids)
        matches.push_back(
            ingest::load_match_file(ctx.corpus / "matches" / (id + ".json")));
    const analytics::GraphIndex graphs = load_graph_index(ctx.out / "graphs.csv");

    for (const analytics::Level level :
         {analytics::Level::Individual, analytics::Level::Collective}) {
        const analytics::FeatureMatrix fm =
            analytics::assemble_features(level, matches, graphs);
        csv::Table t;
        t.header = {"match_id", "team", "participant", "label"};
        t.header.insert(t.header.end(), fm.names.begin(), fm.names.end());
        for (Eigen::Index i = 0; i < fm.x.rows(); ++i) {
            const std::size_t r = static_cast<std::size_t>(i);
            std::vector<std::string> row{
                fm.match_ids[r], std::to_string(fm.teams[r]),
                std::to_string(fm.participants[r]), std::to_string(fm.labels[r])};
            for (Eigen::Index j = 0; j < fm.x.cols(); ++j)
                row.push_back(fmt(fm.x(i, j)));
            t.rows.push_back(std::move(row));
        }
        csv::save_file(
            ctx.out / ("features_" + analytics::to_string(level) + ".csv"), t);
    }
}

void stage_efa(const Context& ctx) {
    csv::Table table1;
    table1.header = {"level", "factor", "feature", "loading"};

    for (const analytics::Level level :
         {analytics::Level::Individual, analytics::Level::Collective}) {
        const std::string lname = analytics::to_string(level);
        const analytics::FeatureMatrix ft =
            load_feature_csv(ctx.out / ("features_" + lname + ".csv"));
        const EfaTables tables =
            run_efa(level, ft, ctx.config.n_factors, ctx.config.varimax);

        write_efa_loadings(ctx.out / ("efa_" + lname + "_loadings.csv"), ft,
                           tables);
        write_efa_scores(ctx.out / ("efa_" + lname + "_scores.csv"), ft, tables);

        for (int f = 0; f < 2; ++f)
            for (std::size_t p = 0; p < ft.names.size(); ++p)
                table1.rows.push_back(
                    {lname, tables.factor_names[static_cast<std::size_t>(f)],
                     ft.names[p],
                     fmt(tables.loadings(static_cast<Eigen::Index>(p), f))});
    }
    csv::save_file(ctx.out / "table1_loadings.csv", table1);
}

void push_eval_row(csv::Table& t, const std::string& level,
                   const std::string& algo, const std::string& protocol,
                   const learn::EvalReport& r) {
    t.rows.push_back({level, algo, protocol, fmt(r.accuracy), fmt(r.precision),
                      fmt(r.recall), fmt(r.f1), fmt(r.auc),
                      std::to_string(r.tp), std::to_string(r.fp),
                      std::to_string(r.fn), std::to_string(r.tn)});
}

void stage_train(const Context& ctx) {
    csv::Table t2;
    t2.header = {"level", "algo", "protocol", "accuracy", "precision", "recall",
                 "f1",    "auc",  "tp",       "fp",       "fn",        "tn"};
    csv::Table f3;
    f3.header = {"level", "algo", "factor", "importance"};

    const std::array<learn::Algo, 4> algos = {learn::Algo::Blr, learn::Algo::Tree,
                                              learn::Algo::Forest,
                                              learn::Algo::Gbt};
    int level_idx = 0;
    for (const analytics::Level level :
         {analytics::Level::Individual, analytics::Level::Collective}) {
        const std::string lname = analytics::to_string(level);
        const analytics::FeatureMatrix sr =
            load_feature_csv(ctx.out / ("efa_" + lname + "_scores.csv"));
        learn::Dataset data;
        data.x = sr.x;
        data.y = sr.labels;

        for (std::size_t a = 0; a < algos.size(); ++a) {
            const std::string aname = learn::to_string(algos[a]);
            const std::uint64_t family = derive_stream(
                ctx.config.seed, 100 + static_cast<std::uint64_t>(level_idx) * 16 +
                                     static_cast<std::uint64_t>(a));

            const learn::Split split = learn::stratified_split(
                data, ctx.config.test_fraction, derive_stream(family, 0));
            const std::unique_ptr<learn::Classifier> model =
                learn::make_classifier(algos[a], derive_stream(family, 1));
            model->fit(split.train);
            push_eval_row(t2, lname, aname, "holdout",
                          learn::evaluate(split.test.y,
                                          model->predict_proba(split.test.x)));

            std::vector<learn::EvalReport> fold_reports;
            const std::vector<learn::Split> folds = learn::stratified_kfold(
                data, ctx.config.cv_folds, derive_stream(family, 2));
            for (std::size_t f = 0; f < folds.size(); ++f) {
                const std::unique_ptr<learn::Classifier> fold_model =
                    learn::make_classifier(
                        algos[a],
                        derive_stream(family, 3 + static_cast<std::uint64_t>(f)));
                fold_model->fit(folds[f].train);
                fold_reports.push_back(learn::evaluate(
                    folds[f].test.y, fold_model->predict_proba(folds[f].test.x)));
            }
            push_eval_row(t2, lname, aname, "cv",
                          learn::mean_report(fold_reports));

            const Eigen::VectorXd importances = model->feature_importances();
            for (std::size_t j = 0; j < sr.names.size(); ++j)
                f3.rows.push_back(
                    {lname, aname, sr.names[j],
                     fmt(importances(static_cast<Eigen::Index>(j)))});
        }
        ++level_idx;
    }
    csv::save_file(ctx.out / "table2_eval.csv", t2);
    csv::save_file(ctx.out / "fig3_importances.csv", f3);
}

void stage_cluster(const Context& ctx) {
    const analytics::KMeansOptions kopts{};

    const analytics::FeatureMatrix si =
        load_feature_csv(ctx.out / "efa_individual_scores.csv");
    int k_ind = ctx.config.k_clusters;
    if (k_ind == 0)
        k_ind = analytics::elbow_select(si.x, 8,
                                        derive_stream(ctx.config.seed, 200), kopts)
                    .k;
    const analytics::KMeansResult kmi =
        analytics::kmeans(si.x, k_ind, derive_stream(ctx.config.seed, 201), kopts);
    const std::vector<analytics::ClusterRole> individual_roles =
        analytics::label_individual_clusters(kmi.centroids, kmi.sizes,
                                             find_col(si.names, "acquiring"),
                                             find_col(si.names, "sharing"));

    csv::Table ci;
    ci.header = {"match_id", "team", "participant", "cluster", "role"};
    for (std::size_t i = 0; i < si.match_ids.size(); ++i) {
        const int c = kmi.assignment[i];
        ci.rows.push_back({si.match_ids[i], std::to_string(si.teams[i]),
                           std::to_string(si.participants[i]), std::to_string(c),
                           analytics::to_string(
                               individual_roles[static_cast<std::size_t>(c)])});
    }
    csv::save_file(ctx.out / "clusters_individual.csv", ci);

    const analytics::FeatureMatrix sc =
        load_feature_csv(ctx.out / "efa_collective_scores.csv");
    int k_col = ctx.config.k_clusters;
    if (k_col == 0)
        k_col = analytics::elbow_select(sc.x, 8,
                                        derive_stream(ctx.config.seed, 202), kopts)
                    .k;
    const analytics::KMeansResult kmc =
        analytics::kmeans(sc.x, k_col, derive_stream(ctx.config.seed, 203), kopts);
    const std::vector<analytics::ClusterRole> collective_roles =
        analytics::label_collective_clusters(
            kmc.centroids, kmc.sizes, find_col(sc.names, "cooperative"),
            find_col(sc.names, "noncooperative"));

    csv::Table cc;
    cc.header = {"match_id", "team", "won", "cluster", "role"};
    std::map<std::pair<std::string, int>, analytics::TeamObservation> teams;
    for (std::size_t i = 0; i < sc.match_ids.size(); ++i) {
        const int c = kmc.assignment[i];
        const analytics::ClusterRole role =
            collective_roles[static_cast<std::size_t>(c)];
        cc.rows.push_back({sc.match_ids[i], std::to_string(sc.teams[i]),
                           std::to_string(sc.labels[i]), std::to_string(c),
                           analytics::to_string(role)});
        analytics::TeamObservation obs;
        obs.match_id = sc.match_ids[i];
        obs.team = sc.teams[i];
        obs.won = sc.labels[i] == 1;
        obs.collective_role = role;
        teams[{obs.match_id, obs.team}] = obs;
    }
    csv::save_file(ctx.out / "clusters_collective.csv", cc);

    for (std::size_t i = 0; i < si.match_ids.size(); ++i) {
        const auto it = teams.find({si.match_ids[i], si.teams[i]});
        if (it == teams.end()) continue;  // team dropped from collective rows
        switch (individual_roles[static_cast<std::size_t>(kmi.assignment[i])]) {
            case analytics::ClusterRole::Acquiring: ++it->second.acquiring; break;
            case analytics::ClusterRole::Sharing: ++it->second.sharing; break;
            default: ++it->second.average; break;
        }
    }

    csv::Table to;
    to.header = {"match_id", "team",      "won",    "collective_role",
                 "acquiring", "sharing",  "average"};
    for (const auto& [key, obs] : teams)
        to.rows.push_back({obs.match_id, std::to_string(obs.team),
                           obs.won ? "1" : "0",
                           analytics::to_string(obs.collective_role),
                           std::to_string(obs.acquiring),
                           std::to_string(obs.sharing),
                           std::to_string(obs.average)});
    csv::save_file(ctx.out / "team_observations.csv", to);
}

void stage_stats(const Context& ctx) {
    const csv::Table to = csv::load_file(ctx.out / "team_observations.csv");
    std::vector<analytics::TeamObservation> obs;
    {
        const std::size_t c_id = to.column("match_id");
        const std::size_t c_team = to.column("team");
        const std::size_t c_won = to.column("won");
        const std::size_t c_role = to.column("collective_role");
        const std::size_t c_acq = to.column("acquiring");
        const std::size_t c_sha = to.column("sharing");
        const std::size_t c_avg = to.column("average");
        for (const std::vector<std::string>& row : to.rows) {
            analytics::TeamObservation o;
            o.match_id = row[c_id];
            o.team = static_cast<int>(csv::parse_int(row[c_team]));
            o.won = row[c_won] == "1";
            o.collective_role = role_from_string(row[c_role]);
            o.acquiring = static_cast<int>(csv::parse_int(row[c_acq]));
            o.sharing = static_cast<int>(csv::parse_int(row[c_sha]));
            o.average = static_cast<int>(csv::parse_int(row[c_avg]));
            obs.push_back(std::move(o));
        }
    }

    csv::Table t3;
    t3.header = {"scope", "group", "n", "wins", "win_rate"};
    for (const analytics::WinRateRow& r : analytics::marginal_win_rates(obs))
        t3.rows.push_back({r.scope, r.group, std::to_string(r.n),
                           std::to_string(r.wins), fmt(r.win_rate)});
    csv::save_file(ctx.out / "table3_winrates.csv", t3);

    const analytics::WinRateTable grid = analytics::crosstab(obs);
    csv::Table t4;
    t4.header = {"team_role"};
    for (const std::string& col : grid.cols) {
        t4.header.push_back(col + "_matches");
        t4.header.push_back(col + "_wins");
        t4.header.push_back(col + "_win_rate");
    }
    t4.header.insert(t4.header.end(),
                     {"total_matches", "total_wins", "total_win_rate"});
    for (std::size_t r = 0; r < grid.rows.size(); ++r) {
        std::vector<std::string> row{grid.rows[r]};
        for (std::size_t c = 0; c < grid.cols.size(); ++c) {
            const analytics::CrosstabCell& cell = grid.cells[r][c];
            row.push_back(std::to_string(cell.matches));
            row.push_back(std::to_string(cell.wins));
            row.push_back(fmt(cell.win_rate));
        }
        const analytics::CrosstabCell& total = grid.row_totals[r];
        row.push_back(std::to_string(total.matches));
        row.push_back(std::to_string(total.wins));
        row.push_back(fmt(total.win_rate));
        t4.rows.push_back(std::move(row));
    }
    csv::save_file(ctx.out / "table4_crosstab.csv", t4);

    csv::Table t5;
    t5.header = {"scope", "group", "n", "wins", "win_rate"};
    for (const analytics::WinRateRow& r : analytics::consolidated_win_rates(obs))
        t5.rows.push_back({r.scope, r.group, std::to_string(r.n),
                           std::to_string(r.wins), fmt(r.win_rate)});
    csv::save_file(ctx.out / "table5_consolidated.csv", t5);

    const analytics::HeadToHead h2h = analytics::head_to_head(obs);
    csv::Table f6;
    f6.header = {"group_row", "group_col", "matches", "win_rate"};
    for (std::size_t i = 0; i < h2h.groups.size(); ++i)
        for (std::size_t j = 0; j < h2h.groups.size(); ++j)
            f6.rows.push_back(
                {h2h.groups[i], h2h.groups[j],
                 fmt(h2h.matches(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(j))),
                 fmt(h2h.win_rate(static_cast<Eigen::Index>(i),
                                  static_cast<Eigen::Index>(j)))});
    csv::save_file(ctx.out / "fig6_h2h.csv", f6);

    // Rank-tier metric distributions plus the Kruskal-Wallis tests.
    csv::Table f7;
    f7.header = {"metric", "tier", "value"};
    csv::Table kt;
    kt.header = {"metric", "h", "df", "p_value", "log10_p", "n_groups", "n_obs"};

    for (const std::string metric : {"egr", "c_in", "c_out"}) {
        const TierGroups groups = metric_by_tier(ctx.out, metric);
        long long n_obs = 0;
        for (std::size_t g = 0; g < groups.tiers.size(); ++g) {
            n_obs += static_cast<long long>(groups.values[g].size());
            for (const double value : groups.values[g])
                f7.rows.push_back(
                    {metric, std::to_string(groups.tiers[g]), fmt(value)});
        }
        if (groups.tiers.size() >= 2) {
            const analytics::KruskalWallisResult kw =
                analytics::kruskal_wallis(groups.values);
            kt.rows.push_back({metric, fmt(kw.h), std::to_string(kw.df),
                               fmt(kw.p_value), fmt(kw.log10_p),
                               std::to_string(groups.tiers.size()),
                               std::to_string(n_obs)});
        }
    }
    csv::save_file(ctx.out / "fig7_rank_metrics.csv", f7);
    csv::save_file(ctx.out / "kw_tests.csv", kt);
}

std::string tier_label(const std::string& ordinal_text) {
    const long long ordinal = csv::parse_int(ordinal_text);
    if (ordinal >= 0 && ordinal <= 9)
        return to_string(static_cast<Tier>(ordinal));
    return ordinal_text;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw DomainError("cannot write " + path.string());
    out << content;
}

void render_svgs(const Context& ctx) {
    if (fs::exists(ctx.out / "fig3_importances.csv")) {
        const csv::Table f3 = csv::load_file(ctx.out / "fig3_importances.csv");
        const std::size_t c_level = f3.column("level");
        const std::size_t c_algo = f3.column("algo");
        const std::size_t c_factor = f3.column("factor");
        const std::size_t c_imp = f3.column("importance");
        for (const std::string level : {"individual", "collective"}) {
            std::vector<report::BarDatum> bars;
            for (const std::vector<std::string>& row : f3.rows)
                if (row[c_level] == level)
                    bars.push_back({row[c_algo] + "/" + row[c_factor],
                                    csv::parse_double(row[c_imp])});
            if (!bars.empty())
                write_text_file(
                    ctx.out / ("fig3_importances_" + level + ".svg"),
                    report::bar_chart_svg("Factor importances (" + level + ")",
                                          bars));
        }
    }

    if (fs::exists(ctx.out / "fig6_h2h.csv")) {
        const csv::Table f6 = csv::load_file(ctx.out / "fig6_h2h.csv");
        const std::size_t c_row = f6.column("group_row");
        const std::size_t c_col = f6.column("group_col");
        const std::size_t c_n = f6.column("matches");
        const std::size_t c_rate = f6.column("win_rate");
        std::vector<std::pair<double, report::BarDatum>> ranked;
        for (const std::vector<std::string>& row : f6.rows) {
            const double n = csv::parse_double(row[c_n]);
            if (n <= 0.0 || row[c_row] >= row[c_col]) continue;
            ranked.push_back(
                {n, {row[c_row] + " vs " + row[c_col],
                     csv::parse_double(row[c_rate])}});
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) {
                             return a.first > b.first;
                         });
        if (ranked.size() > 12) ranked.resize(12);
        std::vector<report::BarDatum> bars;
        for (const auto& [n, bar] : ranked) bars.push_back(bar);
        if (!bars.empty())
            write_text_file(ctx.out / "fig6_h2h.svg",
                            report::bar_chart_svg(
                                "Head-to-head win rate (row group)", bars));
    }

    if (fs::exists(ctx.out / "fig7_rank_metrics.csv")) {
        const csv::Table f7 = csv::load_file(ctx.out / "fig7_rank_metrics.csv");
        const std::size_t c_metric = f7.column("metric");
        const std::size_t c_tier = f7.column("tier");
        const std::size_t c_value = f7.column("value");
        std::set<std::string> metrics;
        for (const std::vector<std::string>& row : f7.rows)
            metrics.insert(row[c_metric]);
        for (const std::string& metric : metrics) {
            std::map<long long, report::ViolinDatum> by_tier;
            for (const std::vector<std::string>& row : f7.rows) {
                if (row[c_metric] != metric) continue;
                const long long tier = csv::parse_int(row[c_tier]);
                report::ViolinDatum& datum = by_tier[tier];
                datum.label = tier_label(row[c_tier]);
                datum.values.push_back(csv::parse_double(row[c_value]));
            }
            std::vector<report::ViolinDatum> data;
            for (auto& [tier, datum] : by_tier) data.push_back(std::move(datum));
            if (!data.empty())
                write_text_file(
                    ctx.out / ("fig7_" + metric + ".svg"),
                    report::violin_svg(metric + " by rank tier", data));
        }
    }
}

long long data_rows(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    long long lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    return std::max<long long>(0, lines - 1);  // minus the header
}

void stage_report(const Context& ctx, const std::vector<std::string>& enabled) {
    if (ctx.config.report_svg) render_svgs(ctx);

    json manifest;
    manifest["config_hash"] = config_hash(ctx.config);
    manifest["seed"] = ctx.config.seed;
    manifest["stages"] = enabled;
    manifest["corpus_source"] =
        ctx.config.input_dir.empty() ? std::string("synth") : ctx.config.input_dir;

    json counts;
    for (const StageSpec& spec : stage_specs())
        for (const char* artifact : spec.produces) {
            if (std::string(artifact) == "corpus" ||
                std::string(artifact) == "run_manifest.json")
                continue;
            const fs::path path = ctx.out / artifact;
            if (fs::exists(path)) counts[artifact] = data_rows(path);
        }
    manifest["row_counts"] = std::move(counts);
    write_text_file(ctx.out / "run_manifest.json", manifest.dump(2) + "\n");
}

void run_stage(const Context& ctx, const std::string& name,
               const std::vector<std::string>& enabled) {
    try {
        if (name == "synth") stage_synth(ctx);
        else if (name == "filter") stage_filter(ctx);
        else if (name == "graphs") stage_graphs(ctx);
        else if (name == "features") stage_features(ctx);
        else if (name == "efa") stage_efa(ctx);
        else if (name == "train") stage_train(ctx);
        else if (name == "cluster") stage_cluster(ctx);
        else if (name == "stats") stage_stats(ctx);
        else if (name == "report") stage_report(ctx, enabled);
        else throw ConfigError("unknown stage '" + name + "'");
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::vector<std::string> normalized_stages(const std::vector<std::string>& stages) {
    for (const std::string& s : stages)
        if (std::find(kAllStages.begin(), kAllStages.end(), s) ==
            kAllStages.end())
            throw ConfigError("unknown stage '" + s + "'");
    std::vector<std::string> ordered;
    for (const std::string& s : kAllStages)
        if (std::find(stages.begin(), stages.end(), s) != stages.end())
            ordered.push_back(s);
    if (ordered.empty()) throw ConfigError("no stages enabled");
    return ordered;
}

void validate_config(const PipelineConfig& config,
                     const std::vector<std::string>& to_run) {
    if (config.output_dir.empty())
        throw ConfigError("output_dir must not be empty");
    if (!config.input_dir.empty()) {
        if (std::find(to_run.begin(), to_run.end(), "synth") != to_run.end())
            throw ConfigError(
                "input_dir and the synth stage are mutually exclusive; drop "
                "one of them");
        if (!fs::exists(fs::path(config.input_dir) / "matches"))
            throw ConfigError("input_dir has no matches/ directory: " +
                              config.input_dir);
    }
    if (config.synth_matches < 1)
        throw ConfigError("synth_matches must be >= 1");
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
        throw ConfigError("test_fraction must lie in (0, 1)");
    if (config.cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
    if (config.k_clusters < 0)
        throw ConfigError("k_clusters must be >= 1, or 0 for the elbow pick");
    if (config.n_factors < 0)
        throw ConfigError("n_factors must be >= 1, or 0 for the scree pick");
    if (!(config.pressure_radius > 0.0))
        throw ConfigError("pressure_radius must be positive");
    if (config.min_duration_s < 0)
        throw ConfigError("min_duration_s must be >= 0");
    if (!config.include_ranked_solo && !config.include_ranked_flex)
        throw ConfigError("at least one ranked queue must be included");
}

PipelineResult run(const PipelineConfig& config,
                   const std::vector<std::string>& to_run) {
    validate_config(config, to_run);
    Context ctx{config, fs::path(config.output_dir),
                config.input_dir.empty()
                    ? fs::path(config.output_dir) / "corpus"
                    : fs::path(config.input_dir)};
    fs::create_directories(ctx.out);
    check_dependencies(ctx, to_run);
    const std::vector<std::string> enabled = normalized_stages(config.stages);
    for (const std::string& name : to_run) run_stage(ctx, name, enabled);
    return {ctx.out, to_run};
}

}  // namespace

analytics::FeatureMatrix load_feature_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::load_file(path);
    const std::size_t c_id = t.column("match_id");
    const std::size_t c_team = t.column("team");
    const std::size_t c_part = t.column("participant");
    const std::size_t c_label = t.column("label");

    analytics::FeatureMatrix out;
    std::vector<std::size_t> value_cols;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (j == c_id || j == c_team || j == c_part || j == c_label) continue;
        value_cols.push_back(j);
        out.names.push_back(t.header[j]);
    }
    out.x.resize(static_cast<Eigen::Index>(t.rows.size()),
                 static_cast<Eigen::Index>(value_cols.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::vector<std::string>& row = t.rows[i];
        out.match_ids.push_back(row[c_id]);
        out.teams.push_back(static_cast<int>(csv::parse_int(row[c_team])));
        out.participants.push_back(static_cast<int>(csv::parse_int(row[c_part])));
        out.labels.push_back(static_cast<int>(csv::parse_int(row[c_label])));
        for (std::size_t j = 0; j < value_cols.size(); ++j)
            out.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                csv::parse_double(row[value_cols[j]]);
    }
    return out;
}

std::vector<std::string> graphs_csv_header() {
    std::vector<std::string> header = {"match_id", "team", "A"};
    for (int i = 0; i < 5; ++i) header.push_back("in_deg_" + std::to_string(i));
    for (int i = 0; i < 5; ++i) header.push_back("out_deg_" + std::to_string(i));
    header.insert(header.end(), {"c_in", "c_out", "egr", "disconnected"});
    return header;
}

void append_graph_rows(csv::Table& table, const std::string& match_id,
                       const Timeline& timeline, double pressure_radius) {
    graph::ExtractOptions opts;
    opts.pressure_radius = pressure_radius;
    for (int team = 0; team < 2; ++team) {
        const std::vector<graph::AssistEdgeEvent> events =
            graph::extract_assists(timeline, team_participants(team), opts);
        const graph::GraphMetrics m =
            graph::compute_metrics(graph::build_graph(events));
        std::vector<std::string> row{match_id, std::to_string(team),
                                     fmt(m.total_weight)};
        for (int i = 0; i < 5; ++i) row.push_back(fmt(m.in_degree(i)));
        for (int i = 0; i < 5; ++i) row.push_back(fmt(m.out_degree(i)));
        row.push_back(fmt(m.in_centralization));
        row.push_back(fmt(m.out_centralization));
        row.push_back(fmt(m.egr.value));
        row.push_back(m.egr.disconnected ? "1" : "0");
        table.rows.push_back(std::move(row));
    }
}

EfaTables run_efa(analytics::Level level,
                  const analytics::FeatureMatrix& features, int n_factors,
                  bool varimax) {
    Eigen::MatrixXd z = features.x;
    analytics::standardize_in_place(z);
    const Eigen::MatrixXd corr = analytics::correlation_matrix(z);

    analytics::EfaOptions opts;
    opts.n_factors = n_factors;
    opts.varimax = varimax;
    const analytics::EfaResult model = analytics::efa(corr, opts);
    if (model.n_factors != 2)
        throw DomainError(
            "factor labeling needs exactly 2 factors; the scree pick was " +
            std::to_string(model.n_factors) + " — set n_factors = 2 to override");

    int first = 0;
    int second = 1;
    EfaTables tables;
    if (level == analytics::Level::Individual) {
        const analytics::IndividualLabeling lab =
            analytics::label_individual_factors(
                model.loadings, find_col(features.names, "gold_pm"));
        first = lab.acquiring;
        second = lab.sharing;
        tables.factor_names = {"acquiring", "sharing"};
    } else {
        const std::vector<int> cent = {
            find_col(features.names, "team_in_centrality"),
            find_col(features.names, "team_out_centrality"),
            find_col(features.names, "egr")};
        const analytics::CollectiveLabeling lab =
            analytics::label_collective_factors(
                model.loadings, cent, find_col(features.names, "avg_gold_pm"));
        first = lab.cooperative;
        second = lab.noncooperative;
        tables.factor_names = {"cooperative", "noncooperative"};
    }

    tables.loadings.resize(model.loadings.rows(), 2);
    tables.loadings.col(0) = model.loadings.col(first);
    tables.loadings.col(1) = model.loadings.col(second);
    tables.communalities = model.communalities;
    tables.eigenvalues = model.eigenvalues;
    tables.scores = analytics::factor_scores(z, corr, tables.loadings);
    return tables;
}

void write_efa_loadings(const std::filesystem::path& path,
                        const analytics::FeatureMatrix& features,
                        const EfaTables& tables) {
    csv::Table t;
    t.header = {"feature", tables.factor_names[0], tables.factor_names[1],
                "communality", "eigenvalue"};
    for (std::size_t p = 0; p < features.names.size(); ++p) {
        const Eigen::Index pi = static_cast<Eigen::Index>(p);
        t.rows.push_back({features.names[p], fmt(tables.loadings(pi, 0)),
                          fmt(tables.loadings(pi, 1)),
                          fmt(tables.communalities(pi)),
                          fmt(tables.eigenvalues(pi))});
    }
    csv::save_file(path, t);
}

void write_efa_scores(const std::filesystem::path& path,
                      const analytics::FeatureMatrix& features,
                      const EfaTables& tables) {
    csv::Table t;
    t.header = {"match_id", "team", "participant", "label",
                tables.factor_names[0], tables.factor_names[1]};
    for (Eigen::Index i = 0; i < tables.scores.rows(); ++i) {
        const std::size_t r = static_cast<std::size_t>(i);
        t.rows.push_back({features.match_ids[r], std::to_string(features.teams[r]),
                          std::to_string(features.participants[r]),
                          std::to_string(features.labels[r]),
                          fmt(tables.scores(i, 0)), fmt(tables.scores(i, 1))});
    }
    csv::save_file(path, t);
}

TierGroups metric_by_tier(const std::filesystem::path& dir,
                          const std::string& metric) {
    if (metric != "egr" && metric != "c_in" && metric != "c_out")
        throw ConfigError("unknown metric '" + metric +
                          "' (expected egr, c_in, or c_out)");

    const csv::Table filtered = csv::load_file(dir / "filtered.csv");
    std::map<std::pair<std::string, int>, std::string> tier_of;
    {
        const std::size_t c_id = filtered.column("match_id");
        const std::size_t c_team = filtered.column("team");
        const std::size_t c_tier = filtered.column("tier");
        for (const std::vector<std::string>& row : filtered.rows)
            tier_of[{row[c_id], static_cast<int>(csv::parse_int(row[c_team]))}] =
                row[c_tier];
    }

    const csv::Table graphs = csv::load_file(dir / "graphs.csv");
    const std::size_t g_id = graphs.column("match_id");
    const std::size_t g_team = graphs.column("team");
    const std::size_t g_value =
        graphs.column(metric == "egr" ? "egr"
                                      : metric == "c_in" ? "c_in" : "c_out");
    const std::size_t g_disc = graphs.column("disconnected");

    std::map<int, std::vector<double>> by_tier;
    for (const std::vector<std::string>& row : graphs.rows) {
        const auto tier_it = tier_of.find(
            {row[g_id], static_cast<int>(csv::parse_int(row[g_team]))});
        if (tier_it == tier_of.end() || tier_it->second.empty()) continue;
        if (metric == "egr" && row[g_disc] == "1") continue;  // undefined
        const double value = csv::parse_double(row[g_value]);
        if (std::isnan(value)) continue;  // zero-weight centralization
        by_tier[static_cast<int>(csv::parse_int(tier_it->second))].push_back(
            value);
    }

    TierGroups out;
    for (auto& [tier, values] : by_tier) {
        out.tiers.push_back(tier);
        out.values.push_back(std::move(values));
    }
    return out;
}

std::string config_hash(const PipelineConfig& config) {
    std::string text;
    const auto add = [&text](const std::string& piece) {
        text += piece;
        text += '\n';
    };
    std::string stages;
    for (const std::string& s : config.stages) {
        stages += s;
        stages += ',';
    }
    add(stages);
    add(config.input_dir);
    add(std::to_string(config.seed));
    add(std::to_string(config.synth_matches));
    add(csv::format_double(config.beta_coop));
    add(csv::format_double(config.beta_skill));
    add(csv::format_double(config.rank_coop_correlation));
    add(config.include_ranked_solo ? "1" : "0");
    add(config.include_ranked_flex ? "1" : "0");
    add(std::to_string(config.min_duration_s));
    add(csv::format_double(config.pressure_radius));
    add(std::to_string(config.n_factors));
    add(config.varimax ? "1" : "0");
    add(csv::format_double(config.test_fraction));
    add(std::to_string(config.cv_folds));
    add(std::to_string(config.k_clusters));
    add(config.report_svg ? "1" : "0");

    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

PipelineConfig config_from_keyval(const KeyVal& kv) {
    static const std::set<std::string> known = {
        "stages",        "input_dir",    "output_dir",
        "seed",          "synth_matches", "beta_coop",
        "beta_skill",    "rank_coop_correlation", "queues",
        "min_duration_s", "pressure_radius", "n_factors",
        "varimax",       "test_fraction", "cv_folds",
        "k_clusters",    "report_svg"};
    for (const auto& [key, value] : kv.entries())
        if (!known.contains(key))
            throw ConfigError("unknown config key '" + key + "'");

    PipelineConfig config;
    if (kv.has("stages")) config.stages = kv.get_list("stages");
    config.input_dir = kv.get_or("input_dir", "");
    config.output_dir = kv.get_or("output_dir", "");
    config.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
    config.synth_matches =
        static_cast<int>(kv.get_int_or("synth_matches", config.synth_matches));
    config.beta_coop = kv.get_double_or("beta_coop", config.beta_coop);
    config.beta_skill = kv.get_double_or("beta_skill", config.beta_skill);
    config.rank_coop_correlation =
        kv.get_double_or("rank_coop_correlation", config.rank_coop_correlation);
    if (kv.has("queues")) {
        config.include_ranked_solo = false;
        config.include_ranked_flex = false;
        for (const std::string& q : kv.get_list("queues")) {
            if (q == "ranked_solo") config.include_ranked_solo = true;
            else if (q == "ranked_flex") config.include_ranked_flex = true;
            else throw ConfigError("unknown queue '" + q + "'");
        }
    }
    config.min_duration_s =
        kv.get_int_or("min_duration_s", config.min_duration_s);
    config.pressure_radius =
        kv.get_double_or("pressure_radius", config.pressure_radius);
    if (kv.has("n_factors")) {
        const std::string& v = kv.get("n_factors");
        config.n_factors = v == "auto" ? 0 : static_cast<int>(kv.get_int("n_factors"));
    }
    config.varimax = kv.get_bool_or("varimax", config.varimax);
    config.test_fraction =
        kv.get_double_or("test_fraction", config.test_fraction);
    config.cv_folds = static_cast<int>(kv.get_int_or("cv_folds", config.cv_folds));
    if (kv.has("k_clusters")) {
        const std::string& v = kv.get("k_clusters");
        config.k_clusters =
            v == "auto" ? 0 : static_cast<int>(kv.get_int("k_clusters"));
    }
    config.report_svg = kv.get_bool_or("report_svg", config.report_svg);

    // An explicit corpus replaces generation: unless the stage list was
    // spelled out, drop synth rather than reject the combination.
    if (!config.input_dir.empty() && !kv.has("stages"))
        std::erase(config.stages, "synth");
    return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return config_from_keyval(KeyVal::parse_file(path));
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    return run(config, normalized_stages(config.stages));
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::string& only_stage) {
    return run(config, normalized_stages({only_stage}));
}

}  // namespace teamspectra::pipeline
