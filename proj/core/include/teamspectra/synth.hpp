#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "teamspectra/match.hpp"

namespace teamspectra::synth {

// Knobs for the synthetic corpus. Matches are generated independently, one
// derived random stream per index, so any subset is reproducible from the
// seed alone.
struct SynthConfig {
    std::uint64_t seed = 1;
    int matches = 1000;

    // Win model: P(first team wins) =
    //   sigmoid(beta_coop * (c_0 - c_1) + beta_skill * (mean skill_0 - mean skill_1))
    double beta_coop = 10.0;
    double beta_skill = 1.0;

    // Correlation between a team's cooperation latent and its rank latent;
    // players jitter around the team rank latent by rank_jitter.
    double rank_coop_correlation = 0.0;
    double rank_jitter = 0.2;

    // Assist events per team at reference duration (scaled by length).
    double mean_assists = 25.0;

    // Champion kills list their assister explicitly with this probability;
    // the rest must be recovered through map pressure.
    double explicit_assist_prob = 0.75;

    // Distance within which the hidden assister is planted.
    double pressure_radius = 2000.0;
};

// What the generator planted for one team.
struct TeamTruth {
    // c in (0, 1), drawn from a three-archetype mixture (hub-centric,
    // middle-of-the-road, broadly sharing) so team styles form real modes.
    double cooperation = 0.0;
    std::array<double, 5> skill{};
    std::array<double, 5> support{};
    double mean_skill = 0.0;
    int hub_giver = 0;     // team-local node, the support hub
    int hub_receiver = 0;  // team-local node, the carry
};

struct MatchTruth {
    std::string match_id;
    std::array<TeamTruth, 2> teams;
    double p_first_team_won = 0.5;
    int winner = 0;
};

struct SynthMatch {
    MatchRecord record;
    Timeline timeline;
    MatchTruth truth;
};

SynthMatch generate_match(const SynthConfig& config, std::uint64_t index);
std::vector<SynthMatch> generate_corpus(const SynthConfig& config);

// Lays out a corpus directory:
//   matches/<id>.json      one canonical match per file
//   timelines/<id>.json    the paired timeline
//   ground_truth.csv       planted cooperation/skill per team
void write_corpus(const std::vector<SynthMatch>& corpus,
                  const std::filesystem::path& dir);

void write_ground_truth(const std::vector<SynthMatch>& corpus,
                        const std::filesystem::path& file);

}  // namespace teamspectra::synth
