#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsclust/metrics.hpp"
#include "tsclust/representation.hpp"
#include "tsclust/validity.hpp"

namespace tsclust::clustering {

enum class Algorithm { kmeans, kmedoids, hierarchical, kshape };
enum class Linkage { ward, complete, average, single };

std::string to_string(Algorithm a);
std::string to_string(Linkage l);
Algorithm algorithm_from_string(const std::string& name);
Linkage linkage_from_string(const std::string& name);

struct ClusterConfig {
    Algorithm algorithm = Algorithm::kmeans;
    std::size_t k = 2;
    metrics::DistanceKind distance;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    std::size_t n_init = 10;
    Linkage linkage = Linkage::ward;  // hierarchical only
};

struct ClusterAssignment {
    std::vector<std::string> labels;       // row order of the input matrix
    std::vector<std::size_t> cluster_of;   // per row, canonicalized ids in [0,k)
    std::size_t k = 0;
    Matrix centers;                        // k x m
    double inertia = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> inertia_history;   // winning restart, one entry per iteration
    std::vector<std::string> notes;

    std::map<std::string, std::size_t> labels_to_cluster() const;
};

struct KSweepEntry {
    std::size_t k = 0;
    double inertia = 0.0;
    double silhouette = 0.0;
    double davies_bouldin = 0.0;
    double calinski_harabasz = 0.0;
};

struct KSweepResult {
    std::vector<KSweepEntry> per_k;  // sorted by k ascending
    std::size_t suggested_k = 0;
    std::string method = "elbow";
};

ClusterAssignment kmeans(const repr::RepresentedMatrix& matrix, const ClusterConfig& config);
ClusterAssignment kmedoids(const repr::RepresentedMatrix& matrix, const ClusterConfig& config);
ClusterAssignment hierarchical(const repr::RepresentedMatrix& matrix,
                               const ClusterConfig& config);
ClusterAssignment kshape(const repr::RepresentedMatrix& matrix, const ClusterConfig& config);

ClusterAssignment cluster(const repr::RepresentedMatrix& matrix, const ClusterConfig& config);

// Runs the configured algorithm for every k in [k_min, k_max], recording
// inertia and the three validity indexes. suggested_k is the elbow: the k
// whose (k, inertia) point lies farthest from the chord joining the first
// and last sweep points.
KSweepResult sweep_k(const repr::RepresentedMatrix& matrix, const ClusterConfig& config,
                     std::size_t k_min, std::size_t k_max);

}  // namespace tsclust::clustering
