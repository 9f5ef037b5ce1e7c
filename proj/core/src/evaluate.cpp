#include "teamspectra/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "teamspectra/errors.hpp"
#include "teamspectra/rng.hpp"
#include "teamspectra/stats.hpp"

namespace teamspectra::learn {

namespace {

void check_lengths(const std::vector<int>& y, const Eigen::VectorXd& prob) {
    if (y.empty()) throw DomainError("cannot evaluate on zero rows");
    if (static_cast<Eigen::Index>(y.size()) != prob.size())
        throw DomainError("label count does not match prediction count");
}

Dataset take_rows(const Dataset& data, const std::vector<int>& rows) {
    Dataset out;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), data.x.cols());
    out.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.x.row(static_cast<Eigen::Index>(i)) = data.x.row(rows[i]);
        out.y.push_back(data.y[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

// Row indices per class, each shuffled by a seed-derived stream.
std::array<std::vector<int>, 2> shuffled_classes(const Dataset& data,
                                                 std::uint64_t seed) {
    std::array<std::vector<int>, 2> classes;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        const int label = data.y[static_cast<std::size_t>(i)];
        if (label != 0 && label != 1) throw DomainError("labels must be 0 or 1");
        classes[static_cast<std::size_t>(label)].push_back(static_cast<int>(i));
    }
    for (std::size_t c = 0; c < 2; ++c) {
        Rng rng(derive_stream(seed, c));
        auto& rows = classes[c];
        for (std::size_t i = rows.size(); i > 1; --i)
            std::swap(rows[i - 1], rows[rng.bounded(i)]);
    }
    return classes;
}

}  // namespace

double accuracy(const std::vector<int>& y, const Eigen::VectorXd& prob) {
    check_lengths(y, prob);
    int correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int predicted = prob(static_cast<Eigen::Index>(i)) >= 0.5 ? 1 : 0;
        correct += predicted == y[i];
    }
    return static_cast<double>(correct) / static_cast<double>(y.size());
}

double auc_score(const std::vector<int>& y, const Eigen::VectorXd& prob) {
    check_lengths(y, prob);
    const std::vector<double> scores(prob.begin(), prob.end());
    const std::vector<double> ranks = analytics::midranks(scores);

    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 1) {
            positive_rank_sum += ranks[i];
            ++positives;
        }
    }
    const std::size_t negatives = y.size() - positives;
    if (positives == 0 || negatives == 0)
        throw DomainError("auc needs both classes present");
    const double n_pos = static_cast<double>(positives);
    return (positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0) /
           (n_pos * static_cast<double>(negatives));
}

EvalReport evaluate(const std::vector<int>& y, const Eigen::VectorXd& prob) {
    check_lengths(y, prob);
    EvalReport report;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int predicted = prob(static_cast<Eigen::Index>(i)) >= 0.5 ? 1 : 0;
        if (predicted == 1 && y[i] == 1) ++report.tp;
        if (predicted == 1 && y[i] == 0) ++report.fp;
        if (predicted == 0 && y[i] == 1) ++report.fn;
        if (predicted == 0 && y[i] == 0) ++report.tn;
    }
    const auto tp = static_cast<double>(report.tp);
    const auto fp = static_cast<double>(report.fp);
    const auto fn = static_cast<double>(report.fn);
    report.accuracy =
        (tp + static_cast<double>(report.tn)) / static_cast<double>(y.size());
    report.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    report.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    if (report.tp + report.fp == 0 && report.tp + report.fn == 0) {
        report.undefined_f1 = true;
        report.f1 = 1.0;
    } else {
        report.f1 = report.precision + report.recall > 0
                        ? 2.0 * report.precision * report.recall /
                              (report.precision + report.recall)
                        : 0.0;
    }
    report.auc = auc_score(y, prob);
    return report;
}

Split stratified_split(const Dataset& data, double test_fraction,
                       std::uint64_t seed) {
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw DomainError("test fraction must lie strictly between 0 and 1");
    const auto classes = shuffled_classes(data, seed);

    std::vector<int> train_rows, test_rows;
    for (const auto& rows : classes) {
        const std::size_t n_test =
            static_cast<std::size_t>(static_cast<double>(rows.size()) * test_fraction);
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_test ? test_rows : train_rows).push_back(rows[i]);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

std::vector<Split> stratified_kfold(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw DomainError("cross-validation needs k >= 2");
    if (static_cast<Eigen::Index>(k) > data.rows())
        throw DomainError("more folds than rows");
    const auto classes = shuffled_classes(data, seed);

    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    for (const auto& rows : classes)
        for (std::size_t i = 0; i < rows.size(); ++i)
            folds[i % static_cast<std::size_t>(k)].push_back(rows[i]);

    std::vector<Split> splits;
    splits.reserve(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        std::vector<int> train_rows, test_rows = folds[static_cast<std::size_t>(f)];
        for (int other = 0; other < k; ++other)
            if (other != f)
                train_rows.insert(train_rows.end(),
                                  folds[static_cast<std::size_t>(other)].begin(),
                                  folds[static_cast<std::size_t>(other)].end());
        std::sort(train_rows.begin(), train_rows.end());
        std::sort(test_rows.begin(), test_rows.end());
        splits.push_back({take_rows(data, train_rows), take_rows(data, test_rows)});
    }
    return splits;
}

EvalReport mean_report(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw DomainError("cannot average zero reports");
    EvalReport mean;
    for (const EvalReport& r : reports) {
        mean.accuracy += r.accuracy;
        mean.precision += r.precision;
        mean.recall += r.recall;
        mean.f1 += r.f1;
        mean.auc += r.auc;
        mean.tp += r.tp;  // confusion counts accumulate rather than average
        mean.fp += r.fp;
        mean.fn += r.fn;
        mean.tn += r.tn;
        mean.undefined_f1 = mean.undefined_f1 || r.undefined_f1;
    }
    const double n = static_cast<double>(reports.size());
    mean.accuracy /= n;
    mean.precision /= n;
    mean.recall /= n;
    mean.f1 /= n;
    mean.auc /= n;
    return mean;
}

}  // namespace teamspectra::learn
