#include "teamspectra/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teamspectra/errors.hpp"

namespace teamspectra::learn {

namespace {

double gini(double pos, double n) {
    const double p = pos / n;
    return 2.0 * p * (1.0 - p);
}

// First `count` feature indices of a partial Fisher-Yates shuffle, sorted so
// the split search scans candidates in index order.
std::vector<int> sample_features(int total, int count, Rng& rng) {
    std::vector<int> all(total);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(rng.bounded(total - i));
        std::swap(all[i], all[j]);
    }
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

void DecisionTree::fit(const Dataset& train) {
    std::vector<int> rows(train.rows());
    std::iota(rows.begin(), rows.end(), 0);
    // A pure training set grows a bare root whose probability is already the
    // right constant; only the flag needs recording.
    adopt_if_single_class(train);
    fit_rows(train, rows, nullptr);
}

void DecisionTree::fit_rows(const Dataset& data, const std::vector<int>& rows,
                            Rng* rng) {
    if (rows.empty()) throw DomainError("cannot fit a tree on zero rows");
    if (data.rows() != static_cast<Eigen::Index>(data.y.size()))
        throw DomainError("label count does not match row count");
    if (opts_.mtry > 0 && rng == nullptr)
        throw DomainError("feature subsampling requires a random generator");
    if (opts_.mtry > data.cols())
        throw DomainError("mtry exceeds feature count");

    nodes_.clear();
    importances_ = Eigen::VectorXd::Zero(data.cols());
    std::vector<int> work = rows;
    build(data, work, 0, static_cast<int>(work.size()), 0,
          static_cast<int>(work.size()), rng);
}

int DecisionTree::build(const Dataset& data, std::vector<int>& rows, int begin,
                        int end, int depth, int total, Rng* rng) {
    const int n = end - begin;
    double pos = 0.0;
    for (int i = begin; i < end; ++i) pos += data.y[static_cast<std::size_t>(rows[i])];

    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[index].prob = pos / n;

    const double node_gini = gini(pos, n);
    if (depth >= opts_.max_depth || n < 2 * opts_.min_leaf || pos == 0.0 ||
        pos == static_cast<double>(n))
        return index;

    const std::vector<int> features =
        opts_.mtry > 0
            ? sample_features(static_cast<int>(data.cols()), opts_.mtry, *rng)
            : [&] {
                  std::vector<int> all(data.cols());
                  std::iota(all.begin(), all.end(), 0);
                  return all;
              }();

    struct Candidate {
        double value;
        int label;
    };
    std::vector<Candidate> sorted(n);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = node_gini;  // weighted child impurity must beat this
    constexpr double kMinGain = 1e-12;

    for (int f : features) {
        for (int i = 0; i < n; ++i) {
            const int r = rows[begin + i];
            sorted[i] = {data.x(r, f), data.y[static_cast<std::size_t>(r)]};
        }
        std::sort(sorted.begin(), sorted.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

        double left_pos = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            left_pos += sorted[i].label;
            const int left_n = i + 1;
            const int right_n = n - left_n;
            if (left_n < opts_.min_leaf) continue;
            if (right_n < opts_.min_leaf) break;
            if (sorted[i + 1].value <= sorted[i].value) continue;  // no boundary

            const double score = (left_n * gini(left_pos, left_n) +
                                  right_n * gini(pos - left_pos, right_n)) /
                                 n;
            if (score < best_score - kMinGain) {
                best_score = score;
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
    if (mid == begin || mid == end) return index;  // numeric edge: keep as leaf

    importances_(best_feature) +=
        static_cast<double>(n) / total * (node_gini - best_score);

    nodes_[index].feature = best_feature;
    nodes_[index].threshold = best_threshold;
    const int left = build(data, rows, begin, mid, depth + 1, total, rng);
    nodes_[index].left = left;
    const int right = build(data, rows, mid, end, depth + 1, total, rng);
    nodes_[index].right = right;
    return index;
}

Eigen::VectorXd DecisionTree::predict_proba(const Eigen::MatrixXd& x) const {
    if (nodes_.empty()) throw DomainError("model is not fitted");
    Eigen::VectorXd prob(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        int at = 0;
        while (nodes_[at].feature >= 0)
            at = x(r, nodes_[at].feature) <= nodes_[at].threshold ? nodes_[at].left
                                                                  : nodes_[at].right;
        prob(r) = nodes_[at].prob;
    }
    return prob;
}

Eigen::VectorXd DecisionTree::feature_importances() const {
    if (nodes_.empty()) throw DomainError("model is not fitted");
    const double total = importances_.sum();
    if (total > 0.0) return importances_ / total;
    return Eigen::VectorXd::Constant(
        importances_.size(), 1.0 / static_cast<double>(importances_.size()));
}

}  // namespace teamspectra::learn
