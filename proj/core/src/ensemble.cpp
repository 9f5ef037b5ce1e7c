#include "teamspectra/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teamspectra/errors.hpp"
#include "teamspectra/logistic.hpp"
#include "teamspectra/rng.hpp"

namespace teamspectra::learn {

void RandomForest::fit(const Dataset& train) {
    if (train.rows() == 0) throw DomainError("cannot fit on an empty dataset");
    if (adopt_if_single_class(train)) {
        trees_.clear();
        return;
    }
    const int n = static_cast<int>(train.rows());

    TreeOptions topts;
    topts.max_depth = opts_.max_depth;
    topts.min_leaf = opts_.min_leaf;
    topts.mtry = opts_.mtry > 0
                     ? opts_.mtry
                     : static_cast<int>(std::sqrt(static_cast<double>(train.cols())));
    if (topts.mtry < 1) topts.mtry = 1;

    trees_.assign(opts_.n_trees, DecisionTree(topts));
    std::vector<int> sample(n);
    for (int t = 0; t < opts_.n_trees; ++t) {
        Rng rng(derive_stream(seed_, static_cast<std::uint64_t>(t)));
        for (int i = 0; i < n; ++i)
            sample[i] = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
        trees_[t].fit_rows(train, sample, &rng);
    }
}

Eigen::VectorXd RandomForest::predict_proba(const Eigen::MatrixXd& x) const {
    if (single_class_train())
        return Eigen::VectorXd::Constant(x.rows(), constant_probability());
    if (trees_.empty()) throw DomainError("model is not fitted");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.rows());
    for (const DecisionTree& t : trees_) sum += t.predict_proba(x);
    return sum / static_cast<double>(trees_.size());
}

Eigen::VectorXd RandomForest::feature_importances() const {
    if (single_class_train()) return uniform_importances();
    if (trees_.empty()) throw DomainError("model is not fitted");
    Eigen::VectorXd sum;
    for (const DecisionTree& t : trees_) {
        const Eigen::VectorXd imp = t.feature_importances();
        if (sum.size() == 0)
            sum = imp;
        else
            sum += imp;
    }
    const double total = sum.sum();
    if (total > 0.0) return sum / total;
    return Eigen::VectorXd::Constant(sum.size(),
                                     1.0 / static_cast<double>(sum.size()));
}

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double leaf_weight(double g, double h, double lambda) { return -g / (h + lambda); }

double half_score(double g, double h, double lambda) { return g * g / (h + lambda); }

}  // namespace

int GradientBoosting::build(const Dataset& data, const Eigen::VectorXd& grad,
                            const Eigen::VectorXd& hess, std::vector<int>& rows,
                            int begin, int end, int depth, GTree& tree) {
    const int n = end - begin;
    double g_total = 0.0;
    double h_total = 0.0;
    for (int i = begin; i < end; ++i) {
        g_total += grad(rows[i]);
        h_total += hess(rows[i]);
    }

    const int index = static_cast<int>(tree.size());
    tree.push_back({});
    tree[index].weight = leaf_weight(g_total, h_total, opts_.lambda);

    if (depth >= opts_.max_depth || n < 2 * opts_.min_leaf) return index;

    struct Candidate {
        double value, g, h;
    };
    std::vector<Candidate> sorted(n);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 0.0;
    constexpr double kMinGain = 1e-12;
    const double parent_score = half_score(g_total, h_total, opts_.lambda);

    for (int f = 0; f < data.cols(); ++f) {
        for (int i = 0; i < n; ++i) {
            const int r = rows[begin + i];
            sorted[i] = {data.x(r, f), grad(r), hess(r)};
        }
        std::sort(sorted.begin(), sorted.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

        double g_left = 0.0, h_left = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            g_left += sorted[i].g;
            h_left += sorted[i].h;
            const int left_n = i + 1;
            if (left_n < opts_.min_leaf) continue;
            if (n - left_n < opts_.min_leaf) break;
            if (sorted[i + 1].value <= sorted[i].value) continue;

            const double gain = 0.5 * (half_score(g_left, h_left, opts_.lambda) +
                                       half_score(g_total - g_left, h_total - h_left,
                                                  opts_.lambda) -
                                       parent_score);
            if (gain > best_gain + kMinGain) {
                best_gain = gain;
                best_feature = f;
                best_threshold = std::midpoint(sorted[i].value, sorted[i + 1].value);
            }
        }
    }

    if (best_feature < 0) return index;

    const auto boundary = std::partition(
        rows.begin() + begin, rows.begin() + end,
        [&](int r) { return data.x(r, best_feature) <= best_threshold; });
    const int mid = static_cast<int>(boundary - rows.begin());
    if (mid == begin || mid == end) return index;

    gain_(best_feature) += best_gain;
    tree[index].feature = best_feature;
    tree[index].threshold = best_threshold;
    const int left = build(data, grad, hess, rows, begin, mid, depth + 1, tree);
    tree[index].left = left;
    const int right = build(data, grad, hess, rows, mid, end, depth + 1, tree);
    tree[index].right = right;
    return index;
}

double GradientBoosting::tree_value(const GTree& tree, const Eigen::MatrixXd& x,
                                    Eigen::Index row) {
    int at = 0;
    while (tree[at].feature >= 0)
        at = x(row, tree[at].feature) <= tree[at].threshold ? tree[at].left
                                                            : tree[at].right;
    return tree[at].weight;
}

void GradientBoosting::fit(const Dataset& train) {
    if (train.rows() == 0) throw DomainError("cannot fit on an empty dataset");
    if (adopt_if_single_class(train)) {
        forest_.clear();
        return;
    }
    const Eigen::Index n = train.rows();

    double pos = 0.0;
    for (int label : train.y) pos += label;
    const double prior = std::clamp(pos / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    base_score_ = std::log(prior / (1.0 - prior));

    forest_.clear();
    gain_ = Eigen::VectorXd::Zero(train.cols());
    Eigen::VectorXd margin = Eigen::VectorXd::Constant(n, base_score_);
    Eigen::VectorXd grad(n), hess(n);
    std::vector<int> rows(static_cast<std::size_t>(n));

    for (int round = 0; round < opts_.n_rounds; ++round) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = sigmoid(margin(i));
            grad(i) = p - train.y[static_cast<std::size_t>(i)];
            hess(i) = std::max(p * (1.0 - p), 1e-16);
        }
        std::iota(rows.begin(), rows.end(), 0);
        GTree tree;
        build(train, grad, hess, rows, 0, static_cast<int>(n), 0, tree);
        for (Eigen::Index i = 0; i < n; ++i)
            margin(i) += opts_.learning_rate * tree_value(tree, train.x, i);
        forest_.push_back(std::move(tree));
    }
}

Eigen::VectorXd GradientBoosting::predict_proba(const Eigen::MatrixXd& x) const {
    if (single_class_train())
        return Eigen::VectorXd::Constant(x.rows(), constant_probability());
    if (forest_.empty()) throw DomainError("model is not fitted");
    Eigen::VectorXd prob(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double margin = base_score_;
        for (const GTree& tree : forest_) margin += opts_.learning_rate * tree_value(tree, x, r);
        prob(r) = sigmoid(margin);
    }
    return prob;
}

Eigen::VectorXd GradientBoosting::feature_importances() const {
    if (single_class_train()) return uniform_importances();
    if (forest_.empty()) throw DomainError("model is not fitted");
    const double total = gain_.sum();
    if (total > 0.0) return gain_ / total;
    return Eigen::VectorXd::Constant(gain_.size(),
                                     1.0 / static_cast<double>(gain_.size()));
}

Algo parse_algo(const std::string& text) {
    if (text == "blr") return Algo::Blr;
    if (text == "tree") return Algo::Tree;
    if (text == "forest") return Algo::Forest;
    if (text == "gbt") return Algo::Gbt;
    throw DomainError("unknown algorithm '" + text + "' (blr, tree, forest, gbt)");
}

std::string to_string(Algo algo) {
    switch (algo) {
        case Algo::Blr: return "blr";
        case Algo::Tree: return "tree";
        case Algo::Forest: return "forest";
        case Algo::Gbt: return "gbt";
    }
    return "blr";
}

std::unique_ptr<Classifier> make_classifier(Algo algo, std::uint64_t seed) {
    switch (algo) {
        case Algo::Blr: return std::make_unique<LogisticRegression>();
        case Algo::Tree: return std::make_unique<DecisionTree>();
        case Algo::Forest: return std::make_unique<RandomForest>(seed);
        case Algo::Gbt: return std::make_unique<GradientBoosting>();
    }
    throw DomainError("unknown algorithm");
}

}  // namespace teamspectra::learn
