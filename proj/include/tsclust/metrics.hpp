#pragma once

#include <optional>
#include <span>
#include <string>

#include "tsclust/matrix.hpp"
#include "tsclust/representation.hpp"

namespace tsclust::metrics {

enum class DistanceVariant { euclidean, dtw, sbd };

std::string to_string(DistanceVariant v);
DistanceVariant distance_from_string(const std::string& name);

struct DistanceKind {
    DistanceVariant variant = DistanceVariant::euclidean;
    std::optional<std::size_t> dtw_window;  // Sakoe-Chiba band half-width
};

struct DistanceMatrix {
    Matrix values;  // n x n, symmetric, zero diagonal
    DistanceKind kind;
};

double euclidean(std::span<const double> x, std::span<const double> y);

// Dynamic time warping with squared-difference local cost; the square root
// of the accumulated cost is returned so dtw(window=0) degenerates to the
// euclidean distance on equal-length inputs.
double dtw(std::span<const double> x, std::span<const double> y,
           std::optional<std::size_t> window = std::nullopt);

struct SbdResult {
    double distance = 0.0;  // in [0, 2]
    long best_shift = 0;
};

// Shape-based distance: 1 - max over shifts of the zero-padded
// cross-correlation normalized by the product of the input norms.
// Ties break toward the smallest |shift|, negative before positive.
SbdResult sbd(std::span<const double> x, std::span<const double> y);

DistanceMatrix pairwise(const repr::RepresentedMatrix& matrix, const DistanceKind& kind);

double distance(std::span<const double> x, std::span<const double> y,
                const DistanceKind& kind);

}  // namespace tsclust::metrics
