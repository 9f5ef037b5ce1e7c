#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teamspectra/csv.hpp"
#include "teamspectra/features.hpp"
#include "teamspectra/keyval.hpp"

namespace teamspectra::pipeline {

// Stages in execution order. Intermediate artifacts are flat CSV files in
// the output directory, so every stage can be re-run on its own against
// what earlier runs left behind.
inline const std::vector<std::string> kAllStages = {
    "synth",  "filter", "graphs",  "features", "efa",
    "train",  "cluster", "stats",  "report"};

struct PipelineConfig {
    std::vector<std::string> stages = kAllStages;

    // Corpus source: a directory holding matches/ and timelines/ (as written
    // by the fetch and synth commands). Empty means the synth stage
    // generates one under <output_dir>/corpus.
    std::string input_dir;
    std::string output_dir;

    std::uint64_t seed = 1;

    // synth
    int synth_matches = 1000;
    double beta_coop = 10.0;
    double beta_skill = 1.0;
    double rank_coop_correlation = 0.5;

    // filter + graphs
    bool include_ranked_solo = true;
    bool include_ranked_flex = true;
    long long min_duration_s = 1380;
    double pressure_radius = 2000.0;

    // efa: 0 factors = pick automatically from the scree elbow
    int n_factors = 2;
    bool varimax = false;

    // train
    double test_fraction = 0.2;
    int cv_folds = 5;

    // cluster: 0 = pick k by the inertia elbow
    int k_clusters = 3;

    bool report_svg = false;

    bool stage_enabled(const std::string& name) const;
};

// Reads the documented key-value format; unknown keys raise ConfigError so
// misspellings never pass silently.
PipelineConfig config_from_keyval(const KeyVal& kv);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// FNV-1a over the canonical serialization of every output-affecting knob
// (paths excluded except input_dir, which selects the corpus).
std::string config_hash(const PipelineConfig& config);

struct PipelineResult {
    std::filesystem::path report_dir;
    std::vector<std::string> stages_run;
};

// Runs the enabled stages in order. Artifacts each stage needs must either
// come from an earlier enabled stage or already sit in the output
// directory; otherwise a StageError names the missing file and the stage
// that produces it before any work starts. A failure mid-run keeps every
// artifact completed so far.
PipelineResult run_pipeline(const PipelineConfig& config);

// Runs exactly one stage against existing artifacts.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::string& only_stage);

// ---------------------------------------------------------------------------
// Artifact helpers shared between the stages and the standalone commands.

// Reads a feature or score table (match_id, team, participant, label, then
// numeric columns) back into memory.
analytics::FeatureMatrix load_feature_csv(const std::filesystem::path& path);

// graphs.csv schema: match_id, team, A, in_deg_0..4, out_deg_0..4, c_in,
// c_out, egr, disconnected. append_graph_rows adds one row per team.
std::vector<std::string> graphs_csv_header();
void append_graph_rows(csv::Table& table, const std::string& match_id,
                       const Timeline& timeline, double pressure_radius);

// A fitted two-factor model with the factors put into semantic order:
// column 0 = acquiring (individual) or cooperative (collective), column 1 =
// sharing or noncooperative.
struct EfaTables {
    std::array<std::string, 2> factor_names;
    Eigen::MatrixXd loadings;       // variables x 2
    Eigen::VectorXd communalities;  // per variable
    Eigen::VectorXd eigenvalues;    // of the correlation matrix
    Eigen::MatrixXd scores;         // observations x 2
};

// Standardizes, factors, labels, and scores one level of the feature table.
// n_factors = 0 lets the scree elbow decide; anything but a two-factor
// outcome raises DomainError, since the labeling rules need exactly two.
EfaTables run_efa(analytics::Level level,
                  const analytics::FeatureMatrix& features, int n_factors,
                  bool varimax);

void write_efa_loadings(const std::filesystem::path& path,
                        const analytics::FeatureMatrix& features,
                        const EfaTables& tables);
void write_efa_scores(const std::filesystem::path& path,
                      const analytics::FeatureMatrix& features,
                      const EfaTables& tables);

// Values of one graph metric ("egr", "c_in", "c_out") grouped by team rank
// tier, joined from <dir>/graphs.csv and <dir>/filtered.csv. Unranked
// teams, disconnected-graph resistances, and zero-weight centralizations
// are left out.
struct TierGroups {
    std::vector<int> tiers;                    // ordinals, ascending
    std::vector<std::vector<double>> values;   // parallel to tiers
};
TierGroups metric_by_tier(const std::filesystem::path& dir,
                          const std::string& metric);

}  // namespace teamspectra::pipeline
