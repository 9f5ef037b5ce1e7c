#include "teamspectra/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "teamspectra/errors.hpp"
#include "teamspectra/rng.hpp"

namespace teamspectra::analytics {

namespace {

// Squared distances from every row to its nearest centroid.
void nearest(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids,
             std::vector<int>& assignment, Eigen::VectorXd& dist2) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = centroids.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
        for (Eigen::Index c = 1; c < k; ++c) {
            const double d = (x.row(i) - centroids.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        assignment[static_cast<std::size_t>(i)] = best;
        dist2(i) = best_d;
    }
}

// Number of distinct rows (lexicographic comparison of exact values).
Eigen::Index distinct_rows(const Eigen::MatrixXd& x) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (x(a, j) < x(b, j)) return true;
            if (x(a, j) > x(b, j)) return false;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), less);
    Eigen::Index count = x.rows() > 0 ? 1 : 0;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (less(order[i - 1], order[i])) ++count;
    return count;
}

Eigen::MatrixXd plus_plus_seed(const Eigen::MatrixXd& x, int k, Rng& rng) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd centroids(k, x.cols());
    centroids.row(0) = x.row(static_cast<Eigen::Index>(rng.bounded(n)));

    Eigen::VectorXd dist2(n);
    for (Eigen::Index i = 0; i < n; ++i)
        dist2(i) = (x.row(i) - centroids.row(0)).squaredNorm();

    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            const double r = rng.unit() * total;
            double cumulative = 0.0;
            chosen = n - 1;  // guard against round-off at the top end
            for (Eigen::Index i = 0; i < n; ++i) {
                cumulative += dist2(i);
                if (cumulative > r) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng.bounded(n);  // all points coincide with a centroid
        }
        centroids.row(c) = x.row(chosen);
        for (Eigen::Index i = 0; i < n; ++i)
            dist2(i) = std::min(dist2(i), (x.row(i) - centroids.row(c)).squaredNorm());
    }
    return centroids;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed,
                    const KMeansOptions& opts) {
    const Eigen::Index n = x.rows();
    if (k < 1) throw DomainError("k must be at least 1");
    const Eigen::Index distinct = distinct_rows(x);
    if (static_cast<Eigen::Index>(k) > distinct)
        throw KTooLarge("k = " + std::to_string(k) + " exceeds " +
                        std::to_string(distinct) + " distinct rows");

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_stream(seed, static_cast<std::uint64_t>(restart)));
        Eigen::MatrixXd centroids = plus_plus_seed(x, k, rng);

        std::vector<int> assignment(static_cast<std::size_t>(n), -1);
        std::vector<int> previous;
        Eigen::VectorXd dist2(n);
        int iterations = 0;

        for (int iter = 0; iter < opts.max_iter; ++iter) {
            iterations = iter + 1;
            previous = assignment;
            nearest(x, centroids, assignment, dist2);
            if (assignment == previous) break;

            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
            std::vector<int> counts(static_cast<std::size_t>(k), 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(assignment[static_cast<std::size_t>(i)]) += x.row(i);
                ++counts[static_cast<std::size_t>(
                    assignment[static_cast<std::size_t>(i)])];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) {
                    centroids.row(c) =
                        sums.row(c) / counts[static_cast<std::size_t>(c)];
                } else {
                    // Re-seed an emptied cluster with the farthest point.
                    Eigen::Index farthest;
                    dist2.maxCoeff(&farthest);
                    centroids.row(c) = x.row(farthest);
                    dist2(farthest) = 0.0;
                }
            }
        }

        nearest(x, centroids, assignment, dist2);
        const double inertia = dist2.sum();
        if (inertia < best.inertia) {
            best.centroids = centroids;
            best.assignment = assignment;
            best.inertia = inertia;
            best.iterations = iterations;
        }
    }

    best.sizes.assign(static_cast<std::size_t>(k), 0);
    for (int a : best.assignment) ++best.sizes[static_cast<std::size_t>(a)];
    return best;
}

ElbowResult elbow_select(const Eigen::MatrixXd& x, int k_max, std::uint64_t seed,
                         const KMeansOptions& opts) {
    if (k_max < 3) throw DomainError("elbow selection needs k_max >= 3");
    const int k_cap = static_cast<int>(
        std::min<Eigen::Index>(static_cast<Eigen::Index>(k_max), distinct_rows(x)));

    ElbowResult result;
    for (int k = 1; k <= k_cap; ++k)
        result.inertia.push_back(kmeans(x, k, seed, opts).inertia);

    const double base = result.inertia[0];
    if (base <= 1e-12) {
        result.k = 1;  // a single point (possibly repeated) needs one cluster
        return result;
    }

    if (k_cap < 3) {
        // Too few feasible k for a curvature pick: take an exact fit when
        // one exists, otherwise the largest feasible k, and flag the curve.
        result.k = k_cap;
        for (int k = 1; k <= k_cap; ++k) {
            if (result.inertia[static_cast<std::size_t>(k - 1)] <= 1e-12 * base) {
                result.k = k;
                break;
            }
        }
        result.flat = true;
        return result;
    }

    double best_d2 = -std::numeric_limits<double>::infinity();
    for (int k = 2; k < k_cap; ++k) {  // interior points of the curve
        const double d2 = result.inertia[static_cast<std::size_t>(k - 2)] -
                          2.0 * result.inertia[static_cast<std::size_t>(k - 1)] +
                          result.inertia[static_cast<std::size_t>(k)];
        if (d2 > best_d2) {
            best_d2 = d2;
            result.k = k;
        }
    }
    result.flat = best_d2 / base < 0.05;
    return result;
}

std::string to_string(ClusterRole role) {
    switch (role) {
        case ClusterRole::Acquiring: return "Acquiring";
        case ClusterRole::Sharing: return "Sharing";
        case ClusterRole::Average: return "Average";
        case ClusterRole::Cooperative: return "Cooperative";
        case ClusterRole::NonCooperative: return "NonCooperative";
    }
    return "Average";
}

namespace {

// argmax of column `col` with ties broken by larger size then lower index.
int top_cluster(const Eigen::MatrixXd& centroids, const std::vector<int>& sizes,
                int col, double sign) {
    int best = 0;
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
        const double value = sign * centroids(c, col);
        const double best_value = sign * centroids(best, col);
        if (value > best_value ||
            (value == best_value &&
             (sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(best)])))
            best = static_cast<int>(c);
    }
    return best;
}

}  // namespace

std::vector<ClusterRole> label_individual_clusters(const Eigen::MatrixXd& centroids,
                                                   const std::vector<int>& sizes,
                                                   int acquiring_col,
                                                   int sharing_col) {
    if (centroids.rows() < 2)
        throw DomainError("labeling needs at least two clusters");
    const int acquiring = top_cluster(centroids, sizes, acquiring_col, 1.0);
    const int sharing = top_cluster(centroids, sizes, sharing_col, 1.0);
    if (acquiring == sharing)
        throw AmbiguousLabeling("one cluster tops both the acquiring and sharing axes");

    std::vector<ClusterRole> roles(static_cast<std::size_t>(centroids.rows()),
                                   ClusterRole::Average);
    roles[static_cast<std::size_t>(acquiring)] = ClusterRole::Acquiring;
    roles[static_cast<std::size_t>(sharing)] = ClusterRole::Sharing;
    return roles;
}

std::vector<ClusterRole> label_collective_clusters(const Eigen::MatrixXd& centroids,
                                                   const std::vector<int>& sizes,
                                                   int cooperative_col,
                                                   int noncooperative_col) {
    if (centroids.rows() < 2)
        throw DomainError("labeling needs at least two clusters");

    const int coop = top_cluster(centroids, sizes, cooperative_col, 1.0);
    const int noncoop = top_cluster(centroids, sizes, noncooperative_col, 1.0);
    if (coop == noncoop)
        throw AmbiguousLabeling(
            "one cluster tops both the cooperative and non-cooperative axes");

    std::vector<ClusterRole> roles(static_cast<std::size_t>(centroids.rows()),
                                   ClusterRole::Average);
    roles[static_cast<std::size_t>(coop)] = ClusterRole::Cooperative;
    roles[static_cast<std::size_t>(noncoop)] = ClusterRole::NonCooperative;
    return roles;
}

}  // namespace teamspectra::analytics
