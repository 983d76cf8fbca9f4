#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "tsclust/errors.hpp"
#include "tsclust/metrics.hpp"
#include "tsclust/representation.hpp"

using namespace tsclust;
using repr::NormalizationKind;
using repr::RepresentedMatrix;

namespace {

RepresentedMatrix make_matrix(const std::vector<std::vector<double>>& rows) {
    RepresentedMatrix m;
    m.data = Matrix(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.labels.push_back("s" + std::to_string(i));
        std::copy(rows[i].begin(), rows[i].end(), m.data.row(i).begin());
    }
    return m;
}

RepresentedMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    for (auto& r : rows)
        for (double& v : r) v = dist(rng);
    return make_matrix(rows);
}

// independent dense-covariance eigendecomposition, sign fixed the same way
std::pair<Eigen::MatrixXd, std::vector<double>> fpca_oracle(const Matrix& input, std::size_t p,
                                                            bool center) {
    const auto n = static_cast<Eigen::Index>(input.rows());
    const auto d = static_cast<Eigen::Index>(input.cols());
    Eigen::MatrixXd X(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            X(i, j) = input(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    if (center) X.rowwise() -= X.colwise().mean();
    Eigen::MatrixXd cov = X.transpose() * X / double(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    Eigen::MatrixXd scores(n, static_cast<Eigen::Index>(p));
    std::vector<double> ratio(p);
    const double total = cov.trace();
    for (std::size_t c = 0; c < p; ++c) {
        const Eigen::Index idx = d - 1 - static_cast<Eigen::Index>(c);
        Eigen::VectorXd v = es.eigenvectors().col(idx);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        scores.col(static_cast<Eigen::Index>(c)) = X * v;
        ratio[c] = std::max(0.0, es.eigenvalues()(idx)) / total;
    }
    return {scores, ratio};
}

}  // namespace

TEST_CASE("z-score normalization uses the population sigma") {
    const auto out = repr::normalize(make_matrix({{1, 2, 3}}), NormalizationKind::z_score);
    // mu=2, sigma=sqrt(2/3)
    CHECK(out.data(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(out.data(0, 1) == doctest::Approx(0.0));
    CHECK(out.data(0, 2) == doctest::Approx(1.224744871391589).epsilon(1e-12));
    CHECK(out.degenerate_rows.empty());
}

TEST_CASE("min-max maps endpoints to 0 and 1") {
    const auto out = repr::normalize(make_matrix({{0, 5, 10}}), NormalizationKind::min_max);
    CHECK(out.data(0, 0) == 0.0);
    CHECK(out.data(0, 1) == 0.5);
    CHECK(out.data(0, 2) == 1.0);
}

TEST_CASE("mean normalization divides by the series mean") {
    const auto out = repr::normalize(make_matrix({{2, 4, 6}}), NormalizationKind::mean);
    CHECK(out.data(0, 0) == doctest::Approx(0.5));
    CHECK(out.data(0, 1) == doctest::Approx(1.0));
    CHECK(out.data(0, 2) == doctest::Approx(1.5));
}

TEST_CASE("flat series map to zeros and are flagged") {
    const auto out = repr::normalize(make_matrix({{7, 7, 7}, {1, 2, 3}}),
                                     NormalizationKind::z_score);
    CHECK(out.data(0, 0) == 0.0);
    CHECK(out.data(0, 1) == 0.0);
    CHECK(out.data(0, 2) == 0.0);
    CHECK(out.degenerate_rows == std::vector<std::size_t>{0});
}

TEST_CASE("z-score and min-max are idempotent on non-degenerate rows") {
    std::mt19937_64 rng(11);
    const auto m = random_matrix(rng, 6, 12);
    for (auto kind : {NormalizationKind::z_score, NormalizationKind::min_max}) {
        const auto once = repr::normalize(m, kind);
        const auto twice = repr::normalize(once, kind);
        for (std::size_t i = 0; i < m.data.rows(); ++i)
            for (std::size_t j = 0; j < m.data.cols(); ++j)
                CHECK(std::abs(twice.data(i, j) - once.data(i, j)) < 1e-9);
    }
}

TEST_CASE("row order and labels survive every transform") {
    std::mt19937_64 rng(13);
    auto m = random_matrix(rng, 8, 6);
    m.labels = {"h", "g", "f", "e", "d", "c", "b", "a"};
    const auto normed = repr::normalize(m, NormalizationKind::z_score);
    CHECK(normed.labels == m.labels);
    const auto reduced = repr::fpca(normed, {.components = 3, .center = true});
    CHECK(reduced.labels == m.labels);
}

TEST_CASE("fpca on rank-1 data explains everything with one component") {
    const auto m = make_matrix({{1, 2, 3, 4}, {2, 4, 6, 8}, {-1, -2, -3, -4}});
    const auto out = repr::fpca(m, {.components = 1, .center = false});
    REQUIRE(out.explained_variance_ratio.size() == 1);
    CHECK(out.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("p = d on full-rank data explains all variance") {
    std::mt19937_64 rng(17);
    const auto m = random_matrix(rng, 10, 4);
    const auto out = repr::fpca(m, {.components = 4, .center = true});
    double total = 0.0;
    for (double r : out.explained_variance_ratio) total += r;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    // ratios are non-increasing and in [0,1]
    for (std::size_t i = 0; i < out.explained_variance_ratio.size(); ++i) {
        CHECK(out.explained_variance_ratio[i] >= 0.0);
        CHECK(out.explained_variance_ratio[i] <= 1.0 + 1e-12);
        if (i > 0)
            CHECK(out.explained_variance_ratio[i] <=
                  out.explained_variance_ratio[i - 1] + 1e-12);
    }
}

TEST_CASE("fpca scores match the dense covariance eigendecomposition oracle") {
    std::mt19937_64 rng(19);
    // exercise both the d<=n covariance route and the n<d Gram route
    for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{10, 8}, {6, 10}}) {
        const auto m = random_matrix(rng, n, d);
        const std::size_t p = 3;
        const auto out = repr::fpca(m, {.components = p, .center = true});
        const auto [expected, ratio] = fpca_oracle(m.data, p, true);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < p; ++c)
                CHECK(out.data(i, c) ==
                      doctest::Approx(expected(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(c)))
                          .epsilon(1e-8));
        for (std::size_t c = 0; c < p; ++c)
            CHECK(out.explained_variance_ratio[c] == doctest::Approx(ratio[c]).epsilon(1e-8));
    }
}

TEST_CASE("full-rank fpca projection is an isometry on centered rows") {
    std::mt19937_64 rng(23);
    const std::size_t n = 9, d = 5;
    const auto m = random_matrix(rng, n, d);
    const auto out = repr::fpca(m, {.components = d, .center = true});

    // centered originals
    std::vector<std::vector<double>> centered(n, std::vector<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += m.data(i, j);
        mu /= double(n);
        for (std::size_t i = 0; i < n; ++i) centered[i][j] = m.data(i, j) - mu;
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double orig = 0.0, proj = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                orig += (centered[a][j] - centered[b][j]) * (centered[a][j] - centered[b][j]);
            for (std::size_t c = 0; c < d; ++c)
                proj += (out.data(a, c) - out.data(b, c)) * (out.data(a, c) - out.data(b, c));
            CHECK(std::sqrt(proj) == doctest::Approx(std::sqrt(orig)).epsilon(1e-8));
        }
    }
}

TEST_CASE("centered fpca ignores constant column offsets") {
    std::mt19937_64 rng(29);
    const auto m = random_matrix(rng, 8, 6);
    auto shifted = m;
    for (std::size_t i = 0; i < shifted.data.rows(); ++i)
        for (std::size_t j = 0; j < shifted.data.cols(); ++j)
            shifted.data(i, j) += 3.5;  // same offset every column
    const auto a = repr::fpca(m, {.components = 3, .center = true});
    const auto b = repr::fpca(shifted, {.components = 3, .center = true});
    for (std::size_t i = 0; i < a.data.rows(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(a.data(i, c) == doctest::Approx(b.data(i, c)).epsilon(1e-8));
}

TEST_CASE("fpca rejects out-of-range component counts") {
    std::mt19937_64 rng(31);
    const auto m = random_matrix(rng, 5, 8);
    CHECK_THROWS_AS(repr::fpca(m, {.components = 0}), ValidationError);
    CHECK_THROWS_AS(repr::fpca(m, {.components = 5}), ValidationError);  // > n-1
}
