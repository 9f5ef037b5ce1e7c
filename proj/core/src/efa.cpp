#include "teamspectra/efa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "teamspectra/errors.hpp"

namespace teamspectra::analytics {

namespace {

// Eigenvalues of a symmetric matrix, sorted descending.
Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = solver.eigenvalues();
    std::reverse(ev.begin(), ev.end());
    return ev;
}

// Squared multiple correlations: 1 - 1 / diag(R^{-1}).
Eigen::VectorXd smc(const Eigen::MatrixXd& r) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
    if (!lu.isInvertible())
        throw SingularCorrelation("correlation matrix is singular; communalities undefined");
    const Eigen::MatrixXd inv = lu.inverse();
    Eigen::VectorXd h2(r.rows());
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        h2(i) = std::clamp(1.0 - 1.0 / inv(i, i), 0.0, 1.0);
    return h2;
}

// Loadings of the reduced matrix from its top-m eigenpairs; eigenvalues at
// or below zero contribute nothing (the column stays zero).
Eigen::MatrixXd principal_loadings(const Eigen::MatrixXd& reduced, int m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
    const Eigen::Index p = reduced.rows();
    Eigen::MatrixXd loadings = Eigen::MatrixXd::Zero(p, m);
    for (int k = 0; k < m; ++k) {
        const Eigen::Index idx = p - 1 - k;  // Eigen sorts ascending
        const double ev = solver.eigenvalues()(idx);
        if (ev > 0.0)
            loadings.col(k) = solver.eigenvectors().col(idx) * std::sqrt(ev);
    }
    return loadings;
}

void apply_sign_convention(Eigen::MatrixXd& loadings) {
    for (Eigen::Index k = 0; k < loadings.cols(); ++k) {
        Eigen::Index anchor;
        loadings.col(k).cwiseAbs().maxCoeff(&anchor);
        if (loadings(anchor, k) < 0.0) loadings.col(k) = -loadings.col(k);
    }
}

void sort_by_explained_ss(Eigen::MatrixXd& loadings) {
    const Eigen::Index m = loadings.cols();
    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return loadings.col(a).squaredNorm() > loadings.col(b).squaredNorm();
    });
    Eigen::MatrixXd sorted(loadings.rows(), m);
    for (Eigen::Index k = 0; k < m; ++k) sorted.col(k) = loadings.col(order[k]);
    loadings = sorted;
}

}  // namespace

int scree_elbow(const Eigen::VectorXd& ev) {
    const Eigen::Index p = ev.size();
    if (p < 3) return 1;

    const Eigen::Index kaiser =
        std::count_if(ev.begin(), ev.end(), [](double e) { return e > 1.0; });

    double best = -std::numeric_limits<double>::infinity();
    Eigen::Index best_n = 1;
    for (Eigen::Index k = 1; k + 1 < p; ++k) {  // interior positions, 0-based
        const double d2 = ev(k - 1) - 2.0 * ev(k) + ev(k + 1);
        const Eigen::Index n = k;  // k* - 1 in 1-based terms
        const double eps = 1e-12 * std::max(std::abs(best), 1.0);
        if (d2 > best + eps) {
            best = d2;
            best_n = n;
        } else if (d2 > best - eps) {  // tie
            const Eigen::Index cur_gap = std::abs(n - kaiser);
            const Eigen::Index best_gap = std::abs(best_n - kaiser);
            if (cur_gap < best_gap || (cur_gap == best_gap && n < best_n)) best_n = n;
        }
    }
    return static_cast<int>(best_n);
}

EfaResult efa(const Eigen::MatrixXd& r, const EfaOptions& opts) {
    const Eigen::Index p = r.rows();
    if (p != r.cols() || p < 3)
        throw DomainError("factor analysis needs a square correlation matrix of size >= 3");

    double max_offdiag = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = i + 1; j < p; ++j)
            max_offdiag = std::max(max_offdiag, std::abs(r(i, j)));
    if (max_offdiag < 1e-12)
        throw DegenerateCorrelation("all off-diagonal correlations are zero");

    EfaResult result;
    result.eigenvalues = eigenvalues_desc(r);

    int m = opts.n_factors;
    if (m == 0) m = scree_elbow(result.eigenvalues);
    if (m < 1 || m >= p)
        throw DomainError("factor count must lie in [1, variables - 1]");
    result.n_factors = m;

    Eigen::VectorXd h2 = smc(r);
    Eigen::MatrixXd reduced = r;
    Eigen::MatrixXd loadings;
    // The iteration cap is a stopping rule, not a failure: slow linear
    // convergence near a Heywood boundary is routine, and the capped
    // iterate is reported with converged = false.
    result.converged = false;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        reduced.diagonal() = h2;
        loadings = principal_loadings(reduced, m);
        Eigen::VectorXd next = loadings.rowwise().squaredNorm();
        if (next.maxCoeff() > 1.0) {
            result.heywood = true;  // clip and keep going
            next = next.cwiseMin(1.0);
        }
        if (!next.allFinite())
            throw NonConvergence(
                "principal-axis factoring produced non-finite communalities");
        const double delta = (next - h2).cwiseAbs().maxCoeff();
        h2 = next;
        result.iterations = iter;
        if (delta < opts.tol) {
            result.converged = true;
            break;
        }
    }

    if (opts.varimax && m > 1) loadings = varimax_rotate(loadings);
    sort_by_explained_ss(loadings);
    apply_sign_convention(loadings);

    result.loadings = loadings;
    result.communalities = loadings.rowwise().squaredNorm();
    return result;
}

Eigen::MatrixXd varimax_rotate(const Eigen::MatrixXd& loadings, double tol,
                               int max_iter) {
    const Eigen::Index p = loadings.rows();
    const Eigen::Index m = loadings.cols();
    if (m < 2) return loadings;

    // Kaiser normalization: rotate rows scaled to unit communality.
    Eigen::VectorXd scale(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double h = loadings.row(i).norm();
        scale(i) = h > 0.0 ? h : 1.0;
    }
    Eigen::MatrixXd a = scale.cwiseInverse().asDiagonal() * loadings;

    for (int iter = 0; iter < max_iter; ++iter) {
        double max_angle = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const Eigen::VectorXd u =
                    a.col(i).cwiseProduct(a.col(i)) - a.col(j).cwiseProduct(a.col(j));
                const Eigen::VectorXd v = 2.0 * a.col(i).cwiseProduct(a.col(j));
                const double s_u = u.sum();
                const double s_v = v.sum();
                const double num = 2.0 * (u.dot(v) - s_u * s_v / static_cast<double>(p));
                const double den =
                    u.squaredNorm() - v.squaredNorm() - (s_u * s_u - s_v * s_v) / static_cast<double>(p);
                const double phi = 0.25 * std::atan2(num, den);
                if (std::abs(phi) < tol) continue;
                max_angle = std::max(max_angle, std::abs(phi));
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                const Eigen::VectorXd ai = a.col(i);
                a.col(i) = c * ai + s * a.col(j);
                a.col(j) = -s * ai + c * a.col(j);
            }
        }
        if (max_angle < tol) break;
    }
    return scale.asDiagonal() * a;
}

Eigen::MatrixXd factor_scores(const Eigen::MatrixXd& z, const Eigen::MatrixXd& r,
                              const Eigen::MatrixXd& loadings) {
    if (z.cols() != r.rows() || r.rows() != loadings.rows())
        throw DomainError("factor score dimensions disagree");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
    if (!lu.isInvertible())
        throw SingularCorrelation("correlation matrix is singular; scores undefined");
    return z * lu.solve(loadings);
}

CollectiveLabeling label_collective_factors(const Eigen::MatrixXd& loadings,
                                            const std::vector<int>& centralization_vars,
                                            int gold_var) {
    if (loadings.cols() != 2)
        throw AmbiguousPattern("collective labeling expects exactly two factors, got " +
                               std::to_string(loadings.cols()));
    double mass[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k)
        for (int v : centralization_vars) mass[k] += std::abs(loadings(v, k));

    CollectiveLabeling out;
    out.noncooperative = mass[0] >= mass[1] ? 0 : 1;
    out.cooperative = 1 - out.noncooperative;
    if (std::abs(loadings(gold_var, out.cooperative)) <=
        std::abs(loadings(gold_var, out.noncooperative)))
        throw AmbiguousPattern(
            "factor pattern does not separate gold from centralization");
    return out;
}

IndividualLabeling label_individual_factors(const Eigen::MatrixXd& loadings,
                                            int gold_var) {
    if (loadings.cols() != 2)
        throw AmbiguousPattern("individual labeling expects exactly two factors, got " +
                               std::to_string(loadings.cols()));
    const double g0 = loadings(gold_var, 0);
    const double g1 = loadings(gold_var, 1);
    if (g0 == g1)
        throw AmbiguousPattern("factors load identically on gold per minute");
    IndividualLabeling out;
    out.acquiring = g0 > g1 ? 0 : 1;
    out.sharing = 1 - out.acquiring;
    return out;
}

}  // namespace teamspectra::analytics
