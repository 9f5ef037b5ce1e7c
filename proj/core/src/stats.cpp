#include "teamspectra/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "teamspectra/errors.hpp"

namespace teamspectra::analytics {

namespace {

constexpr double kGammaTol = 1e-12;
constexpr int kGammaMaxIter = 10000;

// log of the regularized lower incomplete gamma P(a, x), series expansion.
// Converges quickly for x < a + 1.
double log_gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kGammaMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaTol)
            return a * std::log(x) - x - std::lgamma(a) + std::log(sum);
    }
    throw std::runtime_error("incomplete gamma series did not converge");
}

// log of the regularized upper incomplete gamma Q(a, x) via the continued
// fraction 1/(x+1-a - 1(1-a)/(x+3-a - ...)) (modified Lentz). Converges
// quickly for x >= a + 1.
double log_gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kGammaMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kGammaTol)
            return a * std::log(x) - x - std::lgamma(a) + std::log(h);
    }
    throw std::runtime_error("incomplete gamma continued fraction did not converge");
}

// log Q(a, x) valid on the whole positive axis.
double log_gamma_q(double a, double x) {
    if (x <= 0.0) return 0.0;  // Q = 1
    if (x < a + 1.0) {
        const double log_p = log_gamma_p_series(a, x);
        const double p = std::exp(log_p);
        if (p >= 1.0) return -std::numeric_limits<double>::infinity();
        return std::log1p(-p);
    }
    return log_gamma_q_cf(a, x);
}

}  // namespace

double chisq_sf(double x, double df) {
    if (df <= 0.0) throw DomainError("chi-square degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    return std::exp(log_gamma_q(df / 2.0, x / 2.0));
}

double log10_chisq_sf(double x, double df) {
    if (df <= 0.0) throw DomainError("chi-square degrees of freedom must be positive");
    if (x <= 0.0) return 0.0;
    return log_gamma_q(df / 2.0, x / 2.0) / std::numbers::ln10;
}

std::vector<double> midranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2)
        throw DomainError("kruskal-wallis needs at least two groups");

    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.empty()) throw DomainError("kruskal-wallis group is empty");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    const std::vector<double> ranks = midranks(pooled);

    double rank_term = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) sum += ranks[offset + k];
        rank_term += sum * sum / static_cast<double>(g.size());
        offset += g.size();
    }
    double h = 12.0 / (n * (n + 1.0)) * rank_term - 3.0 * (n + 1.0);

    // Tie correction: 1 - sum(t^3 - t) / (n^3 - n) over tie groups.
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_sum = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    KruskalWallisResult result;
    result.df = static_cast<int>(groups.size()) - 1;

    const double correction = 1.0 - tie_sum / (n * n * n - n);
    if (correction <= 0.0) {
        // Every observation equal: groups are indistinguishable by rank.
        result.all_tied = true;
        result.p_value = 1.0;
        return result;
    }
    h /= correction;
    if (h < 0.0) h = 0.0;  // guard tiny negative round-off

    result.h = h;
    result.p_value = chisq_sf(h, result.df);
    result.log10_p = log10_chisq_sf(h, result.df);
    return result;
}

Eigen::VectorXd vif(const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (p < 2) throw DomainError("vif needs at least two columns");
    if (n <= p) throw DomainError("vif needs more rows than columns");

    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::VectorXd out(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::MatrixXd others(n, p - 1);
        Eigen::Index c = 0;
        for (Eigen::Index k = 0; k < p; ++k)
            if (k != j) others.col(c++) = centered.col(k);

        const Eigen::VectorXd y = centered.col(j);
        const double sst = y.squaredNorm();
        if (sst <= 0.0) throw DegenerateMatrix("vif column has zero variance");

        const Eigen::VectorXd beta = others.colPivHouseholderQr().solve(y);
        const double ssr = (y - others * beta).squaredNorm();
        const double r2 = 1.0 - ssr / sst;
        const double denom = 1.0 - r2;
        out(j) = (denom <= 1.0 / kVifCap) ? kVifCap : std::min(1.0 / denom, kVifCap);
    }
    return out;
}

KmoResult kmo(const Eigen::MatrixXd& correlation) {
    const Eigen::Index p = correlation.rows();
    if (p != correlation.cols() || p < 2)
        throw DomainError("kmo needs a square correlation matrix of size >= 2");

    double max_offdiag = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j)
            max_offdiag = std::max(max_offdiag, std::abs(correlation(i, j)));
    if (max_offdiag < 1e-12)
        throw DegenerateCorrelation(
            "all off-diagonal correlations vanish; kmo is 0/0");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(correlation);
    if (!lu.isInvertible())
        throw SingularCorrelation("correlation matrix is singular; kmo undefined");
    const Eigen::MatrixXd inv = lu.inverse();

    // Partial correlations: q_ij = -inv_ij / sqrt(inv_ii * inv_jj).
    Eigen::VectorXd r2_row = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd q2_row = Eigen::VectorXd::Zero(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i == j) continue;
            const double r = correlation(i, j);
            const double q = -inv(i, j) / std::sqrt(inv(i, i) * inv(j, j));
            r2_row(i) += r * r;
            q2_row(i) += q * q;
        }
    }

    KmoResult result;
    result.per_variable.resize(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double denom = r2_row(i) + q2_row(i);
        result.per_variable(i) = denom > 0.0 ? r2_row(i) / denom : 0.0;
    }
    const double r2_total = r2_row.sum();
    const double q2_total = q2_row.sum();
    const double denom = r2_total + q2_total;
    result.overall = denom > 0.0 ? r2_total / denom : 0.0;
    return result;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x) {
    const Eigen::Index p = x.cols();
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::VectorXd norms(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        norms(j) = centered.col(j).norm();
        if (norms(j) <= 0.0)
            throw DegenerateMatrix("correlation undefined: column has zero variance");
    }
    Eigen::MatrixXd r = centered.transpose() * centered;
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) r(i, j) /= norms(i) * norms(j);
    // Clamp round-off so downstream sqrt(1 - r^2) stays real.
    for (Eigen::Index i = 0; i < p; ++i) r(i, i) = 1.0;
    return r;
}

void standardize_in_place(Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(n));
        if (sd <= 0.0)
            throw DegenerateMatrix("standardization undefined: column has zero variance");
        x.col(j) /= sd;
    }
}

}  // namespace teamspectra::analytics
