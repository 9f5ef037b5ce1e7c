#pragma once

#include <cstdint>
#include <vector>

#include "teamspectra/learn.hpp"

namespace teamspectra::learn {

struct EvalReport {
    double accuracy = 0.0;
    double precision = 0.0;  // 0 when nothing is predicted positive
    double recall = 0.0;     // 0 when there are no positives
    double f1 = 0.0;         // 0 when precision + recall is 0
    double auc = 0.0;
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    // No positive predictions and no positive labels: F1 is 0/0 and scored
    // as 1 by convention (a vacuously perfect positive class).
    bool undefined_f1 = false;
};

// Probability >= 0.5 predicts class 1.
double accuracy(const std::vector<int>& y, const Eigen::VectorXd& prob);

// Rank-based AUC (midranks break score ties). Throws DomainError when only
// one class is present.
double auc_score(const std::vector<int>& y, const Eigen::VectorXd& prob);

EvalReport evaluate(const std::vector<int>& y, const Eigen::VectorXd& prob);

struct Split {
    Dataset train;
    Dataset test;
};

// Shuffles within each class so both sides keep the class balance;
// test gets floor(class_count * test_fraction) rows per class.
Split stratified_split(const Dataset& data, double test_fraction,
                       std::uint64_t seed);

// k stratified folds (round-robin deal after a per-class shuffle); each
// entry holds one fold as test and the rest as train.
std::vector<Split> stratified_kfold(const Dataset& data, int k, std::uint64_t seed);

EvalReport mean_report(const std::vector<EvalReport>& reports);

}  // namespace teamspectra::learn
