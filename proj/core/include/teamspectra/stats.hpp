#pragma once

#include <vector>

#include <Eigen/Dense>

namespace teamspectra::analytics {

// Upper-tail probability P(X >= x) for a chi-square variable with df
// degrees of freedom, via the regularized incomplete gamma function
// (series for x < df/2 + 1, continued fraction otherwise; 1e-12 tolerance).
double chisq_sf(double x, double df);

// log10 of the same tail probability, computed in log space so that tails
// far beyond double underflow (p < 1e-308) stay meaningful.
double log10_chisq_sf(double x, double df);

// Midranks: average rank (1-based) for tied values.
std::vector<double> midranks(const std::vector<double>& values);

struct KruskalWallisResult {
    double h = 0.0;        // tie-corrected statistic
    int df = 0;            // groups - 1
    double p_value = 0.0;  // chisq_sf(h, df); 0 when underflowed
    double log10_p = 0.0;  // always finite for h > 0
    bool all_tied = false; // every observation equal: H = 0, p = 1 by convention
};

// Kruskal-Wallis rank test across >= 2 non-empty groups. Throws DomainError
// when a group is empty or fewer than two groups are given. When every
// observation is equal the tie correction annihilates the statistic; the
// result is reported as H = 0, p = 1 with the all_tied flag set.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

inline constexpr double kVifCap = 1e6;

// Variance inflation factor per column of x (rows = observations). Columns
// are regressed on all the others with an intercept; a perfect fit (for
// example a duplicated column) saturates at kVifCap instead of diverging.
Eigen::VectorXd vif(const Eigen::MatrixXd& x);

struct KmoResult {
    double overall = 0.0;
    Eigen::VectorXd per_variable;  // MSA_i
};

// Kaiser-Meyer-Olkin sampling adequacy from a correlation matrix. Throws
// SingularCorrelation when the matrix cannot be inverted and
// DegenerateCorrelation when every off-diagonal entry vanishes (the
// statistic is then 0/0).
KmoResult kmo(const Eigen::MatrixXd& correlation);

// Pearson correlation matrix of the columns of x. Throws DegenerateMatrix
// when a column has zero variance.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x);

// Column-wise z-score using the population standard deviation. Throws
// DegenerateMatrix when a column has zero variance.
void standardize_in_place(Eigen::MatrixXd& x);

}  // namespace teamspectra::analytics
