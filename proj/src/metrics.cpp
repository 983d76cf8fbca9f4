#include "tsclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tsclust/errors.hpp"
#include "tsclust/kernels.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust::metrics {

std::string to_string(DistanceVariant v) {
    switch (v) {
        case DistanceVariant::euclidean: return "euclidean";
        case DistanceVariant::dtw: return "dtw";
        case DistanceVariant::sbd: return "sbd";
    }
    return "euclidean";
}

DistanceVariant distance_from_string(const std::string& name) {
    if (name == "euclidean" || name == "euclid") return DistanceVariant::euclidean;
    if (name == "dtw") return DistanceVariant::dtw;
    if (name == "sbd" || name == "k-shape" || name == "kshape")
        return DistanceVariant::sbd;
    throw ValidationError({"unknown distance '" + name + "'"});
}

double euclidean(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DataError("euclidean: length mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
    return std::sqrt(kernels::squared_l2(x, y));
}

double dtw(std::span<const double> x, std::span<const double> y,
           std::optional<std::size_t> window) {
    const std::size_t nx = x.size(), ny = y.size();
    if (nx == 0 || ny == 0) throw DataError("dtw: empty series");
    const std::size_t len_diff = nx > ny ? nx - ny : ny - nx;
    if (window && *window < len_diff)
        throw DataError("dtw: window " + std::to_string(*window) +
                        " cannot align lengths differing by " + std::to_string(len_diff));

    const double inf = std::numeric_limits<double>::infinity();
    // two-row DP over the (nx+1) x (ny+1) accumulated-cost table
    std::vector<double> prev(ny + 1, inf), cur(ny + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= nx; ++i) {
        std::fill(cur.begin(), cur.end(), inf);
        std::size_t j_lo = 1, j_hi = ny;
        if (window) {
            const long lo = static_cast<long>(i) - static_cast<long>(*window);
            const long hi = static_cast<long>(i) + static_cast<long>(*window);
            j_lo = static_cast<std::size_t>(std::max(1L, lo));
            j_hi = static_cast<std::size_t>(std::min(static_cast<long>(ny), hi));
        }
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
            const double diff = x[i - 1] - y[j - 1];
            const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
            cur[j] = diff * diff + best;
        }
        std::swap(prev, cur);
    }
    return std::sqrt(prev[ny]);
}

SbdResult sbd(std::span<const double> x, std::span<const double> y) {
    const std::size_t d = x.size();
    if (d != y.size())
        throw DataError("sbd: length mismatch (" + std::to_string(d) + " vs " +
                        std::to_string(y.size()) + ")");
    if (d == 0) throw DataError("sbd: empty series");
    const double norm_x = std::sqrt(kernels::sum_squares(x));
    const double norm_y = std::sqrt(kernels::sum_squares(y));
    if (norm_x == 0.0 || norm_y == 0.0)
        throw NumericError("sbd: zero-norm input, normalized cross-correlation undefined");

    // CC_s = sum_i x[i] * y[i-s], zero-padded; shifts visited in tie-break
    // priority order (0, -1, 1, -2, 2, ...), strict improvement to advance.
    double best_cc = -std::numeric_limits<double>::infinity();
    long best_shift = 0;
    const long max_shift = static_cast<long>(d) - 1;
    auto cc_at = [&](long s) {
        // overlap of x[i] and y[i-s]
        const std::size_t x_begin = static_cast<std::size_t>(std::max(0L, s));
        const std::size_t x_end =
            static_cast<std::size_t>(std::min(static_cast<long>(d), static_cast<long>(d) + s));
        const std::size_t len = x_end - x_begin;
        const std::size_t y_begin = static_cast<std::size_t>(static_cast<long>(x_begin) - s);
        return kernels::dot(x.subspan(x_begin, len), y.subspan(y_begin, len));
    };
    for (long k = 0; k <= max_shift; ++k) {
        for (const long s : {-k, k}) {
            if (k == 0 && s != 0) continue;
            const double cc = cc_at(s);
            if (cc > best_cc) {
                best_cc = cc;
                best_shift = s;
            }
            if (k == 0) break;
        }
    }
    const double ncc = best_cc / (norm_x * norm_y);
    return {std::max(0.0, 1.0 - ncc), best_shift};
}

double distance(std::span<const double> x, std::span<const double> y,
                const DistanceKind& kind) {
    switch (kind.variant) {
        case DistanceVariant::euclidean: return euclidean(x, y);
        case DistanceVariant::dtw: return dtw(x, y, kind.dtw_window);
        case DistanceVariant::sbd: return sbd(x, y).distance;
    }
    return 0.0;
}

DistanceMatrix pairwise(const repr::RepresentedMatrix& matrix, const DistanceKind& kind) {
    const std::size_t n = matrix.data.rows();
    if (n < 2) throw DataError("pairwise: need at least 2 rows");
    DistanceMatrix dm;
    dm.kind = kind;
    dm.values = Matrix(n, n, 0.0);
    // upper triangle computed, mirrored; parallel over rows
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
            dm.values(i, j) = distance(matrix.data.row(i), matrix.data.row(j), kind);
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dm.values(j, i) = dm.values(i, j);
    return dm;
}

}  // namespace tsclust::metrics
