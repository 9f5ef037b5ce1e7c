// teamspectra — command-line front end for the team-play analytics library.
//
// Subcommands mirror the pipeline stages so each step can also be run by
// hand against plain CSV/JSON artifacts. Exit codes: 0 success, 2 bad
// configuration or arguments, 3 a pipeline stage failed, 1 anything else.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "teamspectra/cluster.hpp"
#include "teamspectra/crawler.hpp"
#include "teamspectra/csv.hpp"
#include "teamspectra/errors.hpp"
#include "teamspectra/evaluate.hpp"
#include "teamspectra/features.hpp"
#include "teamspectra/ingest.hpp"
#include "teamspectra/keyval.hpp"
#include "teamspectra/learn.hpp"
#include "teamspectra/pipeline.hpp"
#include "teamspectra/rng.hpp"
#include "teamspectra/stats.hpp"
#include "teamspectra/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
namespace ts = teamspectra;

namespace {

void require_known_keys(const ts::KeyVal& kv,
                        const std::vector<std::string>& known) {
    for (const auto& [key, value] : kv.entries())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ts::ConfigError("unknown config key '" + key + "'");
}

int find_col(const std::vector<std::string>& names, const std::string& name) {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return static_cast<int>(j);
    throw ts::ConfigError("input table has no '" + name + "' column");
}

// --- fetch ------------------------------------------------------------

ts::client::CrawlConfig crawl_config_from_file(const std::string& path) {
    const ts::KeyVal kv = ts::KeyVal::parse_file(path);
    require_known_keys(kv, {"base_url", "output_dir", "seeds", "n_recent_seed",
                            "n_recent_discovered", "rate", "max_retries"});

    ts::client::CrawlConfig config;
    config.base_url = kv.get("base_url");
    config.output_dir = kv.get("output_dir");
    config.seeds = kv.get_list("seeds");
    config.n_recent_seed =
        static_cast<int>(kv.get_int_or("n_recent_seed", config.n_recent_seed));
    config.n_recent_discovered = static_cast<int>(
        kv.get_int_or("n_recent_discovered", config.n_recent_discovered));
    config.max_retries =
        static_cast<int>(kv.get_int_or("max_retries", config.max_retries));
    if (kv.has("rate")) {
        config.rate.clear();
        // Each entry is "count:window_seconds", e.g. rate = 20:1, 100:120
        for (const std::string& entry : kv.get_list("rate")) {
            const std::size_t colon = entry.find(':');
            if (colon == std::string::npos || colon == 0 ||
                colon + 1 == entry.size())
                throw ts::ConfigError("rate entry '" + entry +
                                      "' is not count:window_seconds");
            try {
                config.rate.push_back(
                    {std::stoi(entry.substr(0, colon)),
                     std::stod(entry.substr(colon + 1))});
            } catch (const std::exception&) {
                throw ts::ConfigError("rate entry '" + entry +
                                      "' is not count:window_seconds");
            }
        }
    }

    const char* token = std::getenv("API_TOKEN");
    if (token == nullptr || *token == '\0')
        throw ts::ConfigError(
            "the API_TOKEN environment variable must hold the API key");
    config.api_token = token;
    return config;
}

int cmd_fetch(const std::string& config_path, bool resume) {
    const ts::client::CrawlConfig config = crawl_config_from_file(config_path);
    const ts::client::CrawlLedger ledger = ts::client::crawl(config, resume);
    std::cout << "fetched " << ledger.fetched_match_ids.size() << " matches ("
              << ledger.request_log.size() << " requests) into "
              << config.output_dir << "\n";
    return 0;
}

// --- synth ------------------------------------------------------------

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
    const ts::KeyVal kv = ts::KeyVal::parse_file(config_path);
    require_known_keys(
        kv, {"seed", "matches", "beta_coop", "beta_skill",
             "rank_coop_correlation", "rank_jitter", "mean_assists",
             "explicit_assist_prob", "pressure_radius"});

    ts::synth::SynthConfig config;
    config.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
    config.matches = static_cast<int>(kv.get_int_or("matches", config.matches));
    config.beta_coop = kv.get_double_or("beta_coop", config.beta_coop);
    config.beta_skill = kv.get_double_or("beta_skill", config.beta_skill);
    config.rank_coop_correlation = kv.get_double_or(
        "rank_coop_correlation", config.rank_coop_correlation);
    config.rank_jitter = kv.get_double_or("rank_jitter", config.rank_jitter);
    config.mean_assists = kv.get_double_or("mean_assists", config.mean_assists);
    config.explicit_assist_prob =
        kv.get_double_or("explicit_assist_prob", config.explicit_assist_prob);
    config.pressure_radius =
        kv.get_double_or("pressure_radius", config.pressure_radius);
    if (config.matches < 1) throw ts::ConfigError("matches must be >= 1");

    ts::synth::write_corpus(ts::synth::generate_corpus(config), out_dir);
    std::cout << "wrote " << config.matches << " matches to " << out_dir
              << "\n";
    return 0;
}

// --- graphs -----------------------------------------------------------

int cmd_graphs(const std::string& in_dir, const std::string& out_csv,
               double pressure_radius) {
    if (!fs::is_directory(in_dir))
        throw ts::ConfigError("--in is not a directory: " + in_dir);
    if (!(pressure_radius > 0.0))
        throw ts::ConfigError("--pressure-radius must be positive");

    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(in_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    ts::csv::Table t;
    t.header = ts::pipeline::graphs_csv_header();
    for (const fs::path& file : files) {
        const ts::Timeline tl = ts::ingest::load_timeline_file(file);
        ts::pipeline::append_graph_rows(t, tl.match_id, tl, pressure_radius);
    }
    ts::csv::save_file(out_csv, t);
    std::cout << "wrote " << t.rows.size() << " team rows to " << out_csv
              << "\n";
    return 0;
}

// --- efa --------------------------------------------------------------

int cmd_efa(const std::string& level_text, const std::string& in_csv,
            const std::string& out_pair, const std::string& n_factors_text,
            bool varimax) {
    const std::size_t comma = out_pair.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == out_pair.size())
        throw ts::ConfigError("--out expects loadings.csv,scores.csv");
    const std::string loadings_path = out_pair.substr(0, comma);
    const std::string scores_path = out_pair.substr(comma + 1);

    int n_factors = 0;
    if (n_factors_text != "auto") {
        try {
            n_factors = std::stoi(n_factors_text);
        } catch (const std::exception&) {
            throw ts::ConfigError("--n-factors expects a count or 'auto'");
        }
        if (n_factors < 1)
            throw ts::ConfigError("--n-factors expects a count or 'auto'");
    }

    const ts::analytics::Level level = ts::analytics::parse_level(level_text);
    const ts::analytics::FeatureMatrix features =
        ts::pipeline::load_feature_csv(in_csv);
    const ts::pipeline::EfaTables tables =
        ts::pipeline::run_efa(level, features, n_factors, varimax);
    ts::pipeline::write_efa_loadings(loadings_path, features, tables);
    ts::pipeline::write_efa_scores(scores_path, features, tables);
    std::cout << "factors: " << tables.factor_names[0] << ", "
              << tables.factor_names[1] << " over " << features.names.size()
              << " variables; scores for " << features.match_ids.size()
              << " rows\n";
    return 0;
}

// --- kwtest -----------------------------------------------------------

int cmd_kwtest(const std::string& metric, const std::string& group_by,
               const std::string& in_dir, const std::string& out_csv) {
    if (group_by != "tier")
        throw ts::ConfigError("--group-by supports only 'tier'");
    const ts::pipeline::TierGroups groups =
        ts::pipeline::metric_by_tier(in_dir, metric);
    if (groups.tiers.size() < 2)
        throw ts::DomainError(
            "found fewer than two rank-tier groups with usable values");

    long long n_obs = 0;
    for (const std::vector<double>& values : groups.values)
        n_obs += static_cast<long long>(values.size());
    const ts::analytics::KruskalWallisResult kw =
        ts::analytics::kruskal_wallis(groups.values);

    if (!out_csv.empty()) {
        ts::csv::Table t;
        t.header = {"metric", "h",        "df",   "p_value",
                    "log10_p", "n_groups", "n_obs"};
        t.rows.push_back({metric, ts::csv::format_double(kw.h),
                          std::to_string(kw.df),
                          ts::csv::format_double(kw.p_value),
                          ts::csv::format_double(kw.log10_p),
                          std::to_string(groups.tiers.size()),
                          std::to_string(n_obs)});
        ts::csv::save_file(out_csv, t);
    }
    std::cout << metric << " by tier: H = " << kw.h << ", df = " << kw.df
              << ", p = " << kw.p_value << " (" << groups.tiers.size()
              << " groups, " << n_obs << " observations)\n";
    return 0;
}

// --- train ------------------------------------------------------------

json report_to_json(const ts::learn::EvalReport& r) {
    return json{{"accuracy", r.accuracy}, {"precision", r.precision},
                {"recall", r.recall},     {"f1", r.f1},
                {"auc", r.auc},           {"tp", r.tp},
                {"fp", r.fp},             {"fn", r.fn},
                {"tn", r.tn}};
}

void push_eval_row(ts::csv::Table& t, const std::string& level,
                   const std::string& algo, const std::string& protocol,
                   const ts::learn::EvalReport& r) {
    t.rows.push_back({level, algo, protocol,
                      ts::csv::format_double(r.accuracy),
                      ts::csv::format_double(r.precision),
                      ts::csv::format_double(r.recall),
                      ts::csv::format_double(r.f1),
                      ts::csv::format_double(r.auc), std::to_string(r.tp),
                      std::to_string(r.fp), std::to_string(r.fn),
                      std::to_string(r.tn)});
}

int cmd_train(const std::string& level_text, const std::string& algo_text,
              std::uint64_t seed, const std::string& in_csv,
              const std::string& out_csv, std::string model_path,
              double test_fraction, int cv_folds) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ts::ConfigError("--test-fraction must lie in (0, 1)");
    if (cv_folds < 2) throw ts::ConfigError("--cv-folds must be >= 2");

    const ts::analytics::Level level = ts::analytics::parse_level(level_text);
    const ts::learn::Algo algo = ts::learn::parse_algo(algo_text);
    const ts::analytics::FeatureMatrix scores =
        ts::pipeline::load_feature_csv(in_csv);
    ts::learn::Dataset data;
    data.x = scores.x;
    data.y = scores.labels;

    const ts::learn::Split split = ts::learn::stratified_split(
        data, test_fraction, ts::derive_stream(seed, 0));
    const std::unique_ptr<ts::learn::Classifier> model =
        ts::learn::make_classifier(algo, ts::derive_stream(seed, 1));
    model->fit(split.train);
    const ts::learn::EvalReport holdout = ts::learn::evaluate(
        split.test.y, model->predict_proba(split.test.x));

    std::vector<ts::learn::EvalReport> fold_reports;
    for (std::size_t f = 0;
         const ts::learn::Split& fold : ts::learn::stratified_kfold(
             data, cv_folds, ts::derive_stream(seed, 2))) {
        const std::unique_ptr<ts::learn::Classifier> fold_model =
            ts::learn::make_classifier(algo, ts::derive_stream(seed, 3 + f++));
        fold_model->fit(fold.train);
        fold_reports.push_back(ts::learn::evaluate(
            fold.test.y, fold_model->predict_proba(fold.test.x)));
    }
    const ts::learn::EvalReport cv = ts::learn::mean_report(fold_reports);

    ts::csv::Table t;
    t.header = {"level", "algo", "protocol", "accuracy", "precision",
                "recall", "f1",  "auc",      "tp",       "fp",
                "fn",    "tn"};
    const std::string lname = ts::analytics::to_string(level);
    push_eval_row(t, lname, algo_text, "holdout", holdout);
    push_eval_row(t, lname, algo_text, "cv", cv);
    ts::csv::save_file(out_csv, t);

    const Eigen::VectorXd importances = model->feature_importances();
    json summary;
    summary["level"] = lname;
    summary["algo"] = ts::learn::to_string(algo);
    summary["seed"] = seed;
    summary["rows"] = scores.match_ids.size();
    summary["features"] = scores.names;
    json imp = json::array();
    for (Eigen::Index j = 0; j < importances.size(); ++j)
        imp.push_back(importances(j));
    summary["importances"] = std::move(imp);
    summary["single_class_train"] = model->single_class_train();
    summary["holdout"] = report_to_json(holdout);
    summary["cv"] = report_to_json(cv);

    if (model_path.empty()) {
        fs::path p(out_csv);
        p.replace_extension(".model.json");
        model_path = p.string();
    }
    std::ofstream out(model_path, std::ios::binary);
    if (!out.is_open())
        throw ts::DomainError("cannot write " + model_path);
    out << summary.dump(2) << "\n";

    std::cout << lname << "/" << algo_text << ": holdout AUC = " << holdout.auc
              << ", cv AUC = " << cv.auc << "; model summary in " << model_path
              << "\n";
    return 0;
}

// --- cluster ----------------------------------------------------------

int cmd_cluster(const std::string& level_text, const std::string& k_text,
                std::uint64_t seed, const std::string& in_csv,
                const std::string& out_csv) {
    int k = 0;
    if (k_text != "auto") {
        try {
            k = std::stoi(k_text);
        } catch (const std::exception&) {
            throw ts::ConfigError("--k expects a count or 'auto'");
        }
        if (k < 1) throw ts::ConfigError("--k expects a count or 'auto'");
    }

    const ts::analytics::Level level = ts::analytics::parse_level(level_text);
    const ts::analytics::FeatureMatrix scores =
        ts::pipeline::load_feature_csv(in_csv);
    const ts::analytics::KMeansOptions opts{};
    if (k == 0)
        k = ts::analytics::elbow_select(scores.x, 8, ts::derive_stream(seed, 0),
                                        opts)
                .k;
    const ts::analytics::KMeansResult km =
        ts::analytics::kmeans(scores.x, k, ts::derive_stream(seed, 1), opts);

    std::vector<ts::analytics::ClusterRole> roles;
    if (level == ts::analytics::Level::Individual)
        roles = ts::analytics::label_individual_clusters(
            km.centroids, km.sizes, find_col(scores.names, "acquiring"),
            find_col(scores.names, "sharing"));
    else
        roles = ts::analytics::label_collective_clusters(
            km.centroids, km.sizes, find_col(scores.names, "cooperative"),
            find_col(scores.names, "noncooperative"));

    ts::csv::Table t;
    const bool individual = level == ts::analytics::Level::Individual;
    t.header = individual
                   ? std::vector<std::string>{"match_id", "team", "participant",
                                              "cluster", "role"}
                   : std::vector<std::string>{"match_id", "team", "won",
                                              "cluster", "role"};
    for (std::size_t i = 0; i < scores.match_ids.size(); ++i) {
        const int c = km.assignment[i];
        t.rows.push_back(
            {scores.match_ids[i], std::to_string(scores.teams[i]),
             std::to_string(individual ? scores.participants[i]
                                       : scores.labels[i]),
             std::to_string(c),
             ts::analytics::to_string(roles[static_cast<std::size_t>(c)])});
    }
    ts::csv::save_file(out_csv, t);

    std::cout << "k = " << k << "; cluster roles:";
    for (std::size_t c = 0; c < roles.size(); ++c)
        std::cout << " " << c << "=" << ts::analytics::to_string(roles[c])
                  << "(" << km.sizes[c] << ")";
    std::cout << "\n";
    return 0;
}

// --- run --------------------------------------------------------------

int cmd_run(const std::string& config_path, const std::string& stage,
            bool report_svg) {
    ts::pipeline::PipelineConfig config =
        ts::pipeline::load_pipeline_config(config_path);
    if (report_svg) config.report_svg = true;

    const ts::pipeline::PipelineResult result =
        stage.empty() ? ts::pipeline::run_pipeline(config)
                      : ts::pipeline::run_pipeline(config, stage);

    std::cout << "stages";
    for (const std::string& s : result.stages_run) std::cout << " " << s;
    std::cout << " -> " << result.report_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"team-play analytics for ranked 5v5 match data"};
    app.require_subcommand(1);

    auto* fetch = app.add_subcommand(
        "fetch", "crawl matches from the REST API into a local corpus");
    std::string fetch_config;
    bool fetch_resume = false;
    fetch->add_option("--config", fetch_config, "crawl key-value config file")
        ->required();
    fetch->add_flag("--resume", fetch_resume,
                    "continue an interrupted crawl from its ledger");

    auto* synth = app.add_subcommand(
        "synth", "generate a synthetic corpus with planted structure");
    std::string synth_config, synth_out;
    synth->add_option("--config", synth_config, "generator key-value config")
        ->required();
    synth->add_option("--out", synth_out, "corpus output directory")
        ->required();

    auto* graphs = app.add_subcommand(
        "graphs", "derive team assist-graph metrics from timelines");
    std::string graphs_in, graphs_out;
    double graphs_radius = 2000.0;
    graphs->add_option("--in", graphs_in, "directory of timeline JSON files")
        ->required();
    graphs->add_option("--out", graphs_out, "metrics CSV path")->required();
    graphs->add_option("--pressure-radius", graphs_radius,
                       "map-pressure assist radius in map units");

    auto* efa = app.add_subcommand(
        "efa", "factor a feature table and score every row");
    std::string efa_level, efa_in, efa_out, efa_factors = "2";
    bool efa_varimax = false;
    efa->add_option("--level", efa_level, "individual or collective")
        ->required();
    efa->add_option("--in", efa_in, "feature CSV")->required();
    efa->add_option("--out", efa_out, "loadings.csv,scores.csv pair")
        ->required();
    efa->add_option("--n-factors", efa_factors,
                    "factor count, or 'auto' for the scree elbow");
    efa->add_flag("--varimax", efa_varimax, "apply varimax rotation");

    auto* kwtest = app.add_subcommand(
        "kwtest", "Kruskal-Wallis test of a graph metric across rank tiers");
    std::string kw_metric, kw_group = "tier", kw_in, kw_out;
    kwtest->add_option("--metric", kw_metric, "egr, c_in, or c_out")
        ->required();
    kwtest->add_option("--group-by", kw_group, "grouping variable (tier)");
    kwtest
        ->add_option("--in", kw_in,
                     "directory holding graphs.csv and filtered.csv")
        ->required();
    kwtest->add_option("--out", kw_out, "optional result CSV");

    auto* train = app.add_subcommand(
        "train", "fit a win classifier on factor scores and evaluate it");
    std::string train_level, train_algo, train_in, train_out, train_model;
    std::uint64_t train_seed = 1;
    double train_test_fraction = 0.2;
    int train_cv_folds = 5;
    train->add_option("--level", train_level, "individual or collective")
        ->required();
    train->add_option("--algo", train_algo, "blr, tree, forest, or gbt")
        ->required();
    train->add_option("--seed", train_seed, "split/model seed");
    train->add_option("--in", train_in, "score CSV with a label column")
        ->required();
    train->add_option("--out", train_out, "evaluation report CSV")->required();
    train->add_option("--model-out", train_model,
                      "model summary JSON (default: next to --out)");
    train->add_option("--test-fraction", train_test_fraction,
                      "holdout fraction");
    train->add_option("--cv-folds", train_cv_folds, "cross-validation folds");

    auto* cluster = app.add_subcommand(
        "cluster", "k-means playstyle clusters over factor scores");
    std::string cluster_level, cluster_k = "auto", cluster_in, cluster_out;
    std::uint64_t cluster_seed = 1;
    cluster->add_option("--level", cluster_level, "individual or collective")
        ->required();
    cluster->add_option("--k", cluster_k, "cluster count, or 'auto'");
    cluster->add_option("--seed", cluster_seed, "k-means seed");
    cluster->add_option("--in", cluster_in, "score CSV")->required();
    cluster->add_option("--out", cluster_out, "assignment CSV")->required();

    auto* run = app.add_subcommand(
        "run", "execute the configured analysis pipeline end to end");
    std::string run_config, run_stage;
    bool run_svg = false;
    run->add_option("--config", run_config, "pipeline key-value config file")
        ->required();
    run->add_option("--stage", run_stage,
                    "run a single stage against existing artifacts");
    run->add_flag("--report-svg", run_svg, "also render SVG figures");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fetch->parsed()) return cmd_fetch(fetch_config, fetch_resume);
        if (synth->parsed()) return cmd_synth(synth_config, synth_out);
        if (graphs->parsed())
            return cmd_graphs(graphs_in, graphs_out, graphs_radius);
        if (efa->parsed())
            return cmd_efa(efa_level, efa_in, efa_out, efa_factors,
                           efa_varimax);
        if (kwtest->parsed())
            return cmd_kwtest(kw_metric, kw_group, kw_in, kw_out);
        if (train->parsed())
            return cmd_train(train_level, train_algo, train_seed, train_in,
                             train_out, train_model, train_test_fraction,
                             train_cv_folds);
        if (cluster->parsed())
            return cmd_cluster(cluster_level, cluster_k, cluster_seed,
                               cluster_in, cluster_out);
        if (run->parsed()) return cmd_run(run_config, run_stage, run_svg);
    } catch (const ts::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ts::StageError& e) {
        std::cerr << e.what() << "\n";  // already names the failing stage
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
