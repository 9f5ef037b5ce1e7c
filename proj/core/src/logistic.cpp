#include "teamspectra/logistic.hpp"

#include <cmath>

#include "teamspectra/errors.hpp"

namespace teamspectra::learn {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// log sigma(t), stable on both tails.
double log_sigmoid(double t) {
    return t >= 0.0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

void check_fit_inputs(const Dataset& data) {
    if (data.rows() == 0) throw DomainError("cannot fit on an empty dataset");
    if (data.rows() != static_cast<Eigen::Index>(data.y.size()))
        throw DomainError("label count does not match row count");
    for (int label : data.y)
        if (label != 0 && label != 1)
            throw DomainError("labels must be 0 or 1");
}

}  // namespace

double penalized_loglik(const Dataset& data, const Eigen::VectorXd& coef,
                        double ridge) {
    const Eigen::VectorXd eta =
        (data.x * coef.tail(coef.size() - 1)).array() + coef(0);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // y log p + (1-y) log(1-p) = log sigma(s * eta), s = +/-1
        const double sign = data.y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
        ll += log_sigmoid(sign * eta(i));
    }
    return ll / static_cast<double>(eta.size()) -
           0.5 * ridge * coef.tail(coef.size() - 1).squaredNorm();
}

Eigen::VectorXd penalized_gradient(const Dataset& data, const Eigen::VectorXd& coef,
                                   double ridge) {
    const Eigen::VectorXd eta =
        (data.x * coef.tail(coef.size() - 1)).array() + coef(0);
    Eigen::VectorXd residual(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        residual(i) = data.y[static_cast<std::size_t>(i)] - sigmoid(eta(i));

    const double inv_n = 1.0 / static_cast<double>(eta.size());
    Eigen::VectorXd grad(coef.size());
    grad(0) = residual.sum() * inv_n;
    grad.tail(coef.size() - 1) = inv_n * (data.x.transpose() * residual) -
                                 ridge * coef.tail(coef.size() - 1);
    return grad;
}

void LogisticRegression::fit(const Dataset& train) {
    check_fit_inputs(train);
    if (adopt_if_single_class(train)) {
        coef_.resize(0);
        trace_.clear();
        return;
    }
    const Eigen::Index n = train.rows();
    const Eigen::Index p = train.cols();

    train_sd_.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mean = train.x.col(j).mean();
        train_sd_(j) = std::sqrt((train.x.col(j).array() - mean).square().sum() /
                                 static_cast<double>(n));
    }

    coef_ = Eigen::VectorXd::Zero(p + 1);
    trace_.clear();
    double ll = penalized_loglik(train, coef_, opts_.ridge);

    for (int iter = 0; iter < opts_.max_iter; ++iter) {
        const Eigen::VectorXd eta = (train.x * coef_.tail(p)).array() + coef_(0);
        Eigen::VectorXd prob(n), weight(n), residual(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            prob(i) = sigmoid(eta(i));
            weight(i) = std::max(prob(i) * (1.0 - prob(i)), 1e-10);
            residual(i) = train.y[static_cast<std::size_t>(i)] - prob(i);
        }

        const double inv_n = 1.0 / static_cast<double>(n);
        Eigen::VectorXd grad(p + 1);
        grad(0) = residual.sum() * inv_n;
        grad.tail(p) =
            inv_n * (train.x.transpose() * residual) - opts_.ridge * coef_.tail(p);
        if (grad.cwiseAbs().maxCoeff() <= opts_.tol) return;

        // Hessian of the negated objective:
        //     1/n [sum w, (w x)^T; ..., X^T W X] + [0, 0; 0, ridge I]
        Eigen::MatrixXd hess(p + 1, p + 1);
        hess(0, 0) = weight.sum() * inv_n;
        const Eigen::VectorXd wx = inv_n * (train.x.transpose() * weight);
        hess.block(1, 0, p, 1) = wx;
        hess.block(0, 1, 1, p) = wx.transpose();
        hess.block(1, 1, p, p) =
            inv_n * (train.x.transpose() * weight.asDiagonal() * train.x) +
            opts_.ridge * Eigen::MatrixXd::Identity(p, p);

        const Eigen::VectorXd direction = hess.ldlt().solve(grad);

        // Step halving keeps the objective monotone even far from the optimum.
        double step = 1.0;
        Eigen::VectorXd candidate;
        double candidate_ll = ll;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving) {
            candidate = coef_ + step * direction;
            candidate_ll = penalized_loglik(train, candidate, opts_.ridge);
            if (candidate_ll >= ll) {
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved)
            throw NonConvergence("logistic regression step halving stalled");
        coef_ = candidate;
        const bool stagnant = candidate_ll == ll;
        ll = candidate_ll;
        trace_.push_back(ll);
        // No representable objective change left: stop stepping and let the
        // final gradient check decide whether this counts as converged.
        if (stagnant) break;
    }

    const Eigen::VectorXd grad = penalized_gradient(train, coef_, opts_.ridge);
    if (grad.cwiseAbs().maxCoeff() > opts_.tol)
        throw NonConvergence("logistic regression did not reach gradient tolerance in " +
                             std::to_string(opts_.max_iter) + " iterations");
}

Eigen::VectorXd LogisticRegression::predict_proba(const Eigen::MatrixXd& x) const {
    if (single_class_train())
        return Eigen::VectorXd::Constant(x.rows(), constant_probability());
    if (coef_.size() == 0) throw DomainError("model is not fitted");
    const Eigen::VectorXd eta = (x * coef_.tail(coef_.size() - 1)).array() + coef_(0);
    Eigen::VectorXd prob(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) prob(i) = sigmoid(eta(i));
    return prob;
}

Eigen::VectorXd LogisticRegression::feature_importances() const {
    if (single_class_train()) return uniform_importances();
    if (coef_.size() == 0) throw DomainError("model is not fitted");
    Eigen::VectorXd raw =
        coef_.tail(coef_.size() - 1).cwiseAbs().cwiseProduct(train_sd_);
    const double total = raw.sum();
    return total > 0.0 ? Eigen::VectorXd(raw / total)
                       : uniform_importances();
}

}  // namespace teamspectra::learn
