#pragma once

#include <vector>

#include <Eigen/Dense>

namespace teamspectra::analytics {

struct EfaOptions {
    int n_factors = 0;    // 0 = pick automatically from the scree elbow
    double tol = 1e-6;    // max communality change per iteration
    int max_iter = 200;
    bool varimax = false;
};

struct EfaResult {
    Eigen::MatrixXd loadings;       // p x m, columns ordered by explained SS
    Eigen::VectorXd communalities;  // p, final h^2
    Eigen::VectorXd eigenvalues;    // p, of the input correlation matrix
    int n_factors = 0;
    int iterations = 0;
    bool heywood = false;    // some communality exceeded 1 and was clipped
    bool converged = true;   // false when the iteration cap stopped it first
};

// Scree elbow on eigenvalues sorted descending: the retained count is
// k* - 1 where k* maximizes the second difference e_{k-1} - 2 e_k + e_{k+1}
// over interior positions. Ties prefer the candidate closest to the Kaiser
// count (eigenvalues > 1), then the smaller count. Always in [1, p - 1].
int scree_elbow(const Eigen::VectorXd& eigenvalues_desc);

// Principal-axis factoring of a correlation matrix. Communalities start at
// the squared multiple correlations and are refined by iterated
// eigendecomposition of the reduced matrix until the largest change falls
// below tol. A communality stepping past 1 (Heywood case) is clipped to 1
// and reported through the heywood flag. Columns carry a deterministic
// sign: the variable with the largest |loading| in each factor loads
// positively. Throws DegenerateCorrelation when every off-diagonal
// correlation is zero, SingularCorrelation when the matrix cannot be
// inverted, NonConvergence past max_iter, and DomainError for an
// out-of-range factor request.
EfaResult efa(const Eigen::MatrixXd& correlation, const EfaOptions& opts = {});

// Varimax rotation with Kaiser row normalization. Returns the rotated
// loadings; column order and signs are the caller's concern.
Eigen::MatrixXd varimax_rotate(const Eigen::MatrixXd& loadings,
                               double tol = 1e-10, int max_iter = 1000);

// Thurstone regression scores F = Z R^{-1} Lambda for rows of standardized
// data z (n x p).
Eigen::MatrixXd factor_scores(const Eigen::MatrixXd& z,
                              const Eigen::MatrixXd& correlation,
                              const Eigen::MatrixXd& loadings);

// Which of the two collective factors is which. The noncooperative pattern
// concentrates its |loading| mass on the centralization block (in/out
// centralization and resistance); as a consistency check the cooperative
// factor must carry the larger |loading| on average gold, otherwise the
// pattern is ambiguous. Requires exactly two factors.
struct CollectiveLabeling {
    int cooperative = 0;
    int noncooperative = 1;
};
CollectiveLabeling label_collective_factors(const Eigen::MatrixXd& loadings,
                                            const std::vector<int>& centralization_vars,
                                            int gold_var);

// Which of the two individual factors is which: acquiring is the factor
// with the larger positive loading on gold per minute. Requires exactly
// two factors; a tie is ambiguous.
struct IndividualLabeling {
    int acquiring = 0;
    int sharing = 1;
};
IndividualLabeling label_individual_factors(const Eigen::MatrixXd& loadings,
                                            int gold_var);

}  // namespace teamspectra::analytics
