#pragma once

#include "teamspectra/learn.hpp"
#include "teamspectra/rng.hpp"

namespace teamspectra::learn {

struct TreeOptions {
    int max_depth = 6;
    int min_leaf = 20;  // minimum samples in each child
    int mtry = 0;       // features examined per split; 0 = all
};

// Binary CART: greedy Gini splits on axis-aligned thresholds (midpoints
// between adjacent distinct values, rows with x <= threshold go left).
// Ties keep the earliest feature and threshold, so a fit is deterministic.
class DecisionTree final : public Classifier {
public:
    explicit DecisionTree(const TreeOptions& opts = {}) : opts_(opts) {}

    void fit(const Dataset& train) override;

    // Fit on a subset of rows (duplicates allowed: bootstrap samples).
    // rng drives the per-node feature subsample and is required iff
    // mtry > 0.
    void fit_rows(const Dataset& data, const std::vector<int>& rows, Rng* rng);

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const override;

    // Gini importance: impurity decrease weighted by node share.
    Eigen::VectorXd feature_importances() const override;

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const TreeOptions& options() const { return opts_; }

private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double prob = 0.0;  // P(y = 1) at this node
    };

    int build(const Dataset& data, std::vector<int>& rows, int begin, int end,
              int depth, int total, Rng* rng);

    TreeOptions opts_;
    std::vector<Node> nodes_;
    Eigen::VectorXd importances_;
};

}  // namespace teamspectra::learn
