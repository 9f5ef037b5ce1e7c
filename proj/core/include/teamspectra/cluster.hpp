#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace teamspectra::analytics {

struct KMeansOptions {
    int restarts = 10;   // k-means++ seedings; lowest inertia wins
    int max_iter = 300;  // Lloyd iterations per restart
};

struct KMeansResult {
    Eigen::MatrixXd centroids;  // k x p
    std::vector<int> assignment;
    std::vector<int> sizes;
    double inertia = 0.0;
    int iterations = 0;  // of the winning restart
};

// Lloyd's algorithm with k-means++ seeding. Deterministic for a given seed:
// ties in assignment go to the lowest centroid index, an emptied cluster is
// re-seeded with the point farthest from its centroid, and restarts keep
// the first of equal-inertia solutions. Throws KTooLarge when k exceeds the
// number of distinct rows.
KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed,
                    const KMeansOptions& opts = {});

struct ElbowResult {
    int k = 1;
    std::vector<double> inertia;  // index i holds inertia for k = i + 1
    bool flat = false;            // curvature too small to trust the pick
};

// Elbow pick over k = 1..min(k_max, distinct rows): the k maximizing the
// second difference of the inertia curve (ties prefer smaller k). When the
// strongest curvature is below 5% of the k=1 inertia the curve is flagged
// flat; a k=1 inertia of (near) zero short-circuits to k = 1.
ElbowResult elbow_select(const Eigen::MatrixXd& x, int k_max, std::uint64_t seed,
                         const KMeansOptions& opts = {});

enum class ClusterRole { Acquiring, Sharing, Average, Cooperative, NonCooperative };

std::string to_string(ClusterRole role);

// Individual playstyle roles over factor-score centroids: the cluster
// highest on the acquiring axis is Acquiring, the one highest on the
// sharing axis is Sharing, everything else is Average. Axis ties break
// toward the larger then lower-indexed cluster; one cluster topping both
// axes is AmbiguousLabeling.
std::vector<ClusterRole> label_individual_clusters(const Eigen::MatrixXd& centroids,
                                                   const std::vector<int>& sizes,
                                                   int acquiring_col,
                                                   int sharing_col);

// Collective roles over factor-score centroids: the cluster highest on the
// cooperative axis is Cooperative, the one highest on the non-cooperative
// axis is NonCooperative, everything else is Average. Axis ties break
// toward the larger then lower-indexed cluster; one cluster topping both
// axes is AmbiguousLabeling.
std::vector<ClusterRole> label_collective_clusters(const Eigen::MatrixXd& centroids,
                                                   const std::vector<int>& sizes,
                                                   int cooperative_col,
                                                   int noncooperative_col);

}  // namespace teamspectra::analytics
