#pragma once

#include <string>
#include <vector>

#include "tsclust/dataset.hpp"
#include "tsclust/matrix.hpp"

namespace tsclust::repr {

enum class NormalizationKind { z_score, mean, min_max, none };

std::string to_string(NormalizationKind kind);
NormalizationKind normalization_from_string(const std::string& name);

struct FpcaConfig {
    std::size_t components = 3;
    bool center = true;
};

// The n x m matrix handed to clustering, with provenance of how it was made.
struct RepresentedMatrix {
    std::vector<std::string> labels;
    Matrix data;
    std::vector<std::string> transforms;             // applied in order
    std::vector<double> explained_variance_ratio;    // FPCA only, else empty
    std::vector<std::size_t> degenerate_rows;        // flat series hit by normalization
};

RepresentedMatrix from_dataset(const dataset::TimeSeriesDataset& ds);

// Row-wise normalization. Degenerate rows map to all-zeros (all-ones for
// mean normalization) and are flagged rather than treated as errors.
RepresentedMatrix normalize(const RepresentedMatrix& input, NormalizationKind kind);

// Projects rows onto the leading eigenvectors of the sample covariance of
// the (optionally column-centered) matrix. Eigenvector sign is fixed so the
// largest-magnitude loading of each component is positive.
RepresentedMatrix fpca(const RepresentedMatrix& input, const FpcaConfig& config);

}  // namespace tsclust::repr
