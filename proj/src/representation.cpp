#include "tsclust/representation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tsclust/errors.hpp"
#include "tsclust/kernels.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust::repr {

std::string to_string(NormalizationKind kind) {
    switch (kind) {
        case NormalizationKind::z_score: return "z-score";
        case NormalizationKind::mean: return "mean";
        case NormalizationKind::min_max: return "min-max";
        case NormalizationKind::none: return "none";
    }
    return "none";
}

NormalizationKind normalization_from_string(const std::string& name) {
    if (name == "z-score" || name == "z_score" || name == "zscore")
        return NormalizationKind::z_score;
    if (name == "mean") return NormalizationKind::mean;
    if (name == "min-max" || name == "min_max" || name == "minmax")
        return NormalizationKind::min_max;
    if (name == "none") return NormalizationKind::none;
    throw ValidationError({"unknown normalization '" + name + "'"});
}

RepresentedMatrix from_dataset(const dataset::TimeSeriesDataset& ds) {
    RepresentedMatrix m;
    m.labels = ds.labels;
    m.data = ds.values;
    m.transforms.push_back("aligned@" + std::to_string(ds.resolution_minutes) + "min");
    return m;
}

RepresentedMatrix normalize(const RepresentedMatrix& input, NormalizationKind kind) {
    RepresentedMatrix out = input;
    out.transforms.push_back("normalize:" + to_string(kind));
    if (kind == NormalizationKind::none) return out;

    const std::size_t n = out.data.rows();
    const std::size_t d = out.data.cols();
    if (n == 0 || d == 0) throw DataError("empty matrix");

    std::vector<char> degenerate(n, 0);
    parallel_for(n, [&](std::size_t i) {
        auto row = out.data.row(i);
        switch (kind) {
            case NormalizationKind::z_score: {
                const double mu = kernels::sum(row) / static_cast<double>(d);
                double var = 0.0;
                for (double v : row) var += (v - mu) * (v - mu);
                var /= static_cast<double>(d);  // population sigma
                const double sigma = std::sqrt(var);
                if (sigma == 0.0) {
                    std::fill(row.begin(), row.end(), 0.0);
                    degenerate[i] = 1;
                } else {
                    for (double& v : row) v = (v - mu) / sigma;
                }
                break;
            }
            case NormalizationKind::mean: {
                const double mu = kernels::sum(row) / static_cast<double>(d);
                if (mu == 0.0) {
                    std::fill(row.begin(), row.end(), 1.0);
                    degenerate[i] = 1;
                } else {
                    for (double& v : row) v /= mu;
                }
                break;
            }
            case NormalizationKind::min_max: {
                const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
                if (*lo == *hi) {
                    std::fill(row.begin(), row.end(), 0.0);
                    degenerate[i] = 1;
                } else {
                    const double span = *hi - *lo;
                    const double base = *lo;
                    for (double& v : row) v = (v - base) / span;
                }
                break;
            }
            case NormalizationKind::none: break;
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (degenerate[i]) out.degenerate_rows.push_back(i);
    if (!out.degenerate_rows.empty())
        out.transforms.push_back("degenerate-rows:" +
                                 std::to_string(out.degenerate_rows.size()));
    return out;
}

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

// largest-|loading| entry of each eigenvector made positive
void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index best = 0;
    v.cwiseAbs().maxCoeff(&best);
    if (v(best) < 0.0) v = -v;
}

}  // namespace

RepresentedMatrix fpca(const RepresentedMatrix& input, const FpcaConfig& config) {
    const std::size_t n = input.data.rows();
    const std::size_t d = input.data.cols();
    if (n < 2) throw DataError("fpca requires at least 2 series");
    const std::size_t max_p = std::min(n - 1, d);
    if (config.components < 1 || config.components > max_p)
        throw ValidationError({"fpca components must be in [1, " + std::to_string(max_p) +
                               "], got " + std::to_string(config.components)});
    const std::size_t p = config.components;

    Eigen::MatrixXd X = to_eigen(input.data);
    if (config.center) X.rowwise() -= X.colwise().mean();

    const double denom = static_cast<double>(n - 1);
    const double total_variance = X.squaredNorm() / denom;

    Eigen::MatrixXd loadings(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(p));
    std::vector<double> eigenvalues(p);

    if (d <= n) {
        // d x d covariance route
        Eigen::MatrixXd cov = (X.transpose() * X) / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
        for (std::size_t c = 0; c < p; ++c) {
            const Eigen::Index idx = static_cast<Eigen::Index>(d - 1 - c);  // descending
            Eigen::VectorXd v = es.eigenvectors().col(idx);
            fix_sign(v);
            loadings.col(static_cast<Eigen::Index>(c)) = v;
            eigenvalues[c] = std::max(0.0, es.eigenvalues()(idx));
        }
    } else {
        // n x n Gram route: eigenvectors of X X^T lift to loadings X^T u / sqrt(lambda)
        Eigen::MatrixXd gram = X * X.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
        for (std::size_t c = 0; c < p; ++c) {
            const Eigen::Index idx = static_cast<Eigen::Index>(n - 1 - c);
            const double lambda = std::max(0.0, es.eigenvalues()(idx));
            eigenvalues[c] = lambda / denom;
            Eigen::VectorXd v;
            if (lambda > 1e-12 * std::max(1.0, total_variance * denom)) {
                v = (X.transpose() * es.eigenvectors().col(idx)) / std::sqrt(lambda);
            } else {
                v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
                eigenvalues[c] = 0.0;
            }
            if (!v.isZero()) fix_sign(v);
            loadings.col(static_cast<Eigen::Index>(c)) = v;
        }
    }

    Eigen::MatrixXd scores = X * loadings;

    RepresentedMatrix out;
    out.labels = input.labels;
    out.transforms = input.transforms;
    out.degenerate_rows = input.degenerate_rows;
    out.transforms.push_back("fpca:p=" + std::to_string(p) +
                             (config.center ? "" : ",uncentered"));
    out.data = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < p; ++c)
            out.data(i, c) =
                scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    out.explained_variance_ratio.resize(p);
    for (std::size_t c = 0; c < p; ++c)
        out.explained_variance_ratio[c] =
            total_variance > 0.0 ? eigenvalues[c] / total_variance : 0.0;
    return out;
}

}  // namespace tsclust::repr
