#pragma once

#include <cstdint>
#include <vector>

#include "teamspectra/learn.hpp"
#include "teamspectra/tree.hpp"

namespace teamspectra::learn {

struct ForestOptions {
    int n_trees = 100;
    int max_depth = 6;
    int min_leaf = 20;
    int mtry = 0;  // 0 = floor(sqrt(features)) at fit time
};

// Bagged CART trees on bootstrap samples with per-node feature subsampling;
// prediction averages tree probabilities.
class RandomForest final : public Classifier {
public:
    explicit RandomForest(std::uint64_t seed, const ForestOptions& opts = {})
        : opts_(opts), seed_(seed) {}

    void fit(const Dataset& train) override;
    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const override;

    // Mean of per-tree Gini importances, renormalized.
    Eigen::VectorXd feature_importances() const override;

private:
    ForestOptions opts_;
    std::uint64_t seed_;
    std::vector<DecisionTree> trees_;
};

struct GbtOptions {
    int n_rounds = 100;
    int max_depth = 3;
    int min_leaf = 20;
    double learning_rate = 0.1;
    double lambda = 1.0;  // L2 on leaf weights
};

// Gradient-boosted trees for logistic loss with second-order splits: each
// round fits a regression tree on gradient/hessian statistics, gain
//   1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)]
// and leaf weight -G/(H+lambda). The ensemble starts from the prior
// log-odds and is fully deterministic.
class GradientBoosting final : public Classifier {
public:
    explicit GradientBoosting(const GbtOptions& opts = {}) : opts_(opts) {}

    void fit(const Dataset& train) override;
    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const override;

    // Total split gain per feature across all rounds, normalized.
    Eigen::VectorXd feature_importances() const override;

    int rounds_fitted() const { return static_cast<int>(forest_.size()); }

private:
    struct GNode {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double weight = 0.0;
    };
    using GTree = std::vector<GNode>;

    int build(const Dataset& data, const Eigen::VectorXd& grad,
              const Eigen::VectorXd& hess, std::vector<int>& rows, int begin,
              int end, int depth, GTree& tree);
    static double tree_value(const GTree& tree, const Eigen::MatrixXd& x,
                             Eigen::Index row);

    GbtOptions opts_;
    double base_score_ = 0.0;  // prior log-odds
    std::vector<GTree> forest_;
    Eigen::VectorXd gain_;
};

}  // namespace teamspectra::learn
