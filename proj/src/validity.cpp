#include "tsclust/validity.hpp"

#include <cmath>
#include <limits>

#include "tsclust/errors.hpp"
#include "tsclust/kernels.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust::validity {

namespace {

std::vector<std::size_t> cluster_sizes(const std::vector<std::size_t>& assignment,
                                       std::size_t k) {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t c : assignment) {
        if (c >= k) throw DataError("cluster id out of range");
        ++sizes[c];
    }
    return sizes;
}

Matrix cluster_means(const repr::RepresentedMatrix& matrix,
                     const std::vector<std::size_t>& assignment, std::size_t k,
                     const std::vector<std::size_t>& sizes) {
    const std::size_t m = matrix.data.cols();
    Matrix centroids(k, m, 0.0);
    for (std::size_t i = 0; i < matrix.data.rows(); ++i) {
        auto row = matrix.data.row(i);
        auto c = centroids.row(assignment[i]);
        for (std::size_t j = 0; j < m; ++j) c[j] += row[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) throw DataError("empty cluster in validity scoring");
        for (double& v : centroids.row(c)) v /= static_cast<double>(sizes[c]);
    }
    return centroids;
}

}  // namespace

double silhouette(const repr::RepresentedMatrix& matrix,
                  const std::vector<std::size_t>& assignment, std::size_t k,
                  const metrics::DistanceKind& kind) {
    const std::size_t n = matrix.data.rows();
    if (k < 2 || k > n - 1)
        throw DataError("silhouette requires 2 <= k <= n-1, got k=" + std::to_string(k) +
                        ", n=" + std::to_string(n));
    const auto sizes = cluster_sizes(assignment, k);
    const auto dm = metrics::pairwise(matrix, kind);

    std::vector<double> s(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        if (sizes[assignment[i]] == 1) return;  // singleton convention: 0
        std::vector<double> mean_to(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_to[assignment[j]] += dm.values(i, j);
        }
        double a = 0.0, b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c == assignment[i]) {
                a = mean_to[c] / static_cast<double>(sizes[c] - 1);
            } else if (sizes[c] > 0) {
                b = std::min(b, mean_to[c] / static_cast<double>(sizes[c]));
            }
        }
        const double denom = std::max(a, b);
        s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    });
    double total = 0.0;
    for (double v : s) total += v;
    return total / static_cast<double>(n);
}

double davies_bouldin(const repr::RepresentedMatrix& matrix,
                      const std::vector<std::size_t>& assignment, std::size_t k) {
    if (k < 2) throw DataError("davies_bouldin requires k >= 2");
    const std::size_t n = matrix.data.rows();
    const auto sizes = cluster_sizes(assignment, k);
    const Matrix centroids = cluster_means(matrix, assignment, k, sizes);

    // S_c: mean euclidean distance of members to their centroid
    std::vector<double> scatter(k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        scatter[assignment[i]] +=
            std::sqrt(kernels::squared_l2(matrix.data.row(i), centroids.row(assignment[i])));
    for (std::size_t c = 0; c < k; ++c) scatter[c] /= static_cast<double>(sizes[c]);

    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double sep =
                std::sqrt(kernels::squared_l2(centroids.row(i), centroids.row(j)));
            if (sep == 0.0)
                throw NumericError("davies_bouldin: coincident centroids for clusters " +
                                   std::to_string(i) + " and " + std::to_string(j));
            worst = std::max(worst, (scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

double calinski_harabasz(const repr::RepresentedMatrix& matrix,
                         const std::vector<std::size_t>& assignment, std::size_t k) {
    const std::size_t n = matrix.data.rows();
    const std::size_t m = matrix.data.cols();
    if (k < 2 || k > n - 1)
        throw DataError("calinski_harabasz requires 2 <= k <= n-1");
    const auto sizes = cluster_sizes(assignment, k);
    const Matrix centroids = cluster_means(matrix, assignment, k, sizes);

    std::vector<double> grand(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = matrix.data.row(i);
        for (std::size_t j = 0; j < m; ++j) grand[j] += row[j];
    }
    for (double& v : grand) v /= static_cast<double>(n);

    double within = 0.0, between = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        within += kernels::squared_l2(matrix.data.row(i), centroids.row(assignment[i]));
    for (std::size_t c = 0; c < k; ++c)
        between += static_cast<double>(sizes[c]) *
                   kernels::squared_l2(centroids.row(c), {grand.data(), m});

    if (within == 0.0) return std::numeric_limits<double>::infinity();
    return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

ValidityScores score_all(const repr::RepresentedMatrix& matrix,
                         const std::vector<std::size_t>& assignment, std::size_t k,
                         const metrics::DistanceKind& clustering_kind) {
    ValidityScores scores;
    scores.silhouette = silhouette(matrix, assignment, k, clustering_kind);
    scores.davies_bouldin = davies_bouldin(matrix, assignment, k);
    scores.calinski_harabasz = calinski_harabasz(matrix, assignment, k);
    scores.zero_within_scatter = std::isinf(scores.calinski_harabasz);
    scores.non_euclidean_clustering =
        clustering_kind.variant != metrics::DistanceVariant::euclidean;
    return scores;
}

}  // namespace tsclust::validity
