#pragma once

#include <vector>

#include "teamspectra/learn.hpp"

namespace teamspectra::learn {

// Penalized Bernoulli log-likelihood at coef (intercept first, which the
// ridge term does not touch):
//     mean_i [y_i log p_i + (1 - y_i) log(1 - p_i)] - ridge/2 * |w|^2
// The data term is a mean, not a sum, so gradients and tolerances mean the
// same thing at every sample size.
double penalized_loglik(const Dataset& data, const Eigen::VectorXd& coef,
                        double ridge);

// Gradient of the same objective, d/d[intercept, w].
Eigen::VectorXd penalized_gradient(const Dataset& data, const Eigen::VectorXd& coef,
                                   double ridge);

struct LogisticOptions {
    double ridge = 1e-6;
    double tol = 1e-8;  // on the gradient max-norm
    int max_iter = 100;
};

// Binary logistic regression fitted by iteratively reweighted least squares
// (Newton steps with step halving, so the penalized log-likelihood never
// decreases). Throws NonConvergence when the gradient tolerance is not met
// within max_iter iterations. A single-class training set produces a
// constant-probability model (see Classifier::single_class_train).
class LogisticRegression final : public Classifier {
public:
    explicit LogisticRegression(const LogisticOptions& opts = {}) : opts_(opts) {}

    void fit(const Dataset& train) override;
    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const override;

    // |coefficient| scaled by the training standard deviation of its
    // feature, normalized to sum 1.
    Eigen::VectorXd feature_importances() const override;

    // Intercept first, then one weight per feature.
    const Eigen::VectorXd& coefficients() const { return coef_; }

    // Penalized log-likelihood after each completed iteration.
    const std::vector<double>& loglik_trace() const { return trace_; }

    const LogisticOptions& options() const { return opts_; }

private:
    LogisticOptions opts_;
    Eigen::VectorXd coef_;
    Eigen::VectorXd train_sd_;
    std::vector<double> trace_;
};

}  // namespace teamspectra::learn
