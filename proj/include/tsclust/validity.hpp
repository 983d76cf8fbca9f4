#pragma once

#include <cstddef>
#include <vector>

#include "tsclust/metrics.hpp"
#include "tsclust/representation.hpp"

namespace tsclust::validity {

// Mean silhouette coefficient under the given distance kind. Singleton
// clusters contribute 0.
double silhouette(const repr::RepresentedMatrix& matrix,
                  const std::vector<std::size_t>& assignment, std::size_t k,
                  const metrics::DistanceKind& kind);

// Davies-Bouldin index; centroid-based, always euclidean.
double davies_bouldin(const repr::RepresentedMatrix& matrix,
                      const std::vector<std::size_t>& assignment, std::size_t k);

// Calinski-Harabasz index; centroid-based, always euclidean. Returns +inf
// when the within-cluster scatter is zero.
double calinski_harabasz(const repr::RepresentedMatrix& matrix,
                         const std::vector<std::size_t>& assignment, std::size_t k);

struct ValidityScores {
    double silhouette = 0.0;
    double davies_bouldin = 0.0;
    double calinski_harabasz = 0.0;
    bool zero_within_scatter = false;
    // set when the clustering distance differs from the euclidean space the
    // centroid-based indexes are computed in
    bool non_euclidean_clustering = false;
};

ValidityScores score_all(const repr::RepresentedMatrix& matrix,
                         const std::vector<std::size_t>& assignment, std::size_t k,
                         const metrics::DistanceKind& clustering_kind);

}  // namespace tsclust::validity
