#include "tsclust/clustering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "tsclust/errors.hpp"
#include "tsclust/kernels.hpp"
#include "tsclust/parallel.hpp"

namespace tsclust::clustering {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::kmedoids: return "kmedoids";
        case Algorithm::hierarchical: return "hierarchical";
        case Algorithm::kshape: return "kshape";
    }
    return "kmeans";
}

std::string to_string(Linkage l) {
    switch (l) {
        case Linkage::ward: return "ward";
        case Linkage::complete: return "complete";
        case Linkage::average: return "average";
        case Linkage::single: return "single";
    }
    return "ward";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "kmeans" || name == "k-means") return Algorithm::kmeans;
    if (name == "kmedoids" || name == "k-medoids") return Algorithm::kmedoids;
    if (name == "hierarchical") return Algorithm::hierarchical;
    if (name == "kshape" || name == "k-shape") return Algorithm::kshape;
    throw ValidationError({"unknown algorithm '" + name + "'"});
}

Linkage linkage_from_string(const std::string& name) {
    if (name == "ward") return Linkage::ward;
    if (name == "complete") return Linkage::complete;
    if (name == "average") return Linkage::average;
    if (name == "single") return Linkage::single;
    throw ValidationError({"unknown linkage '" + name + "'"});
}

std::map<std::string, std::size_t> ClusterAssignment::labels_to_cluster() const {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]] = cluster_of[i];
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// private RNG stream per (seed, k, restart): schedule-independent restarts
std::mt19937_64 make_rng(std::uint64_t seed, std::size_t k, std::size_t restart) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (0x6B15ULL + static_cast<std::uint64_t>(k)));
    s = splitmix64(s ^ (0x9E37ULL + static_cast<std::uint64_t>(restart)));
    return std::mt19937_64(s);
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 2) throw ValidationError({"k must be >= 2, got " + std::to_string(k)});
    if (k > n)
        throw DataError("k=" + std::to_string(k) + " exceeds the number of series n=" +
                        std::to_string(n));
}

// cluster 0 holds the lexicographically-smallest label; ids increase by
// first appearance when scanning labels in lexicographic order
void canonicalize(ClusterAssignment& a) {
    std::vector<std::size_t> order(a.labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a.labels[x] < a.labels[y];
    });
    std::vector<std::size_t> remap(a.k, a.k);
    std::size_t next = 0;
    for (std::size_t idx : order) {
        std::size_t& slot = remap[a.cluster_of[idx]];
        if (slot == a.k) slot = next++;
    }
    if (next != a.k) throw NumericError("empty cluster after clustering");
    std::vector<std::size_t> old_of = a.cluster_of;
    for (std::size_t& c : a.cluster_of) c = remap[c];
    Matrix centers(a.k, a.centers.cols());
    for (std::size_t c = 0; c < a.k; ++c) {
        auto dst = centers.row(remap[c]);
        auto src = a.centers.row(c);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    a.centers = std::move(centers);
}

using DistFn = std::function<double(std::size_t, std::size_t)>;

// k-means++ seeding over data rows under an arbitrary squared dissimilarity
std::vector<std::size_t> kmeanspp_seed(std::size_t n, std::size_t k, std::mt19937_64& rng,
                                       const std::function<double(std::size_t, std::size_t)>&
                                           sq_dissim) {
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::uniform_int_distribution<std::size_t> uni(0, n - 1);
    chosen.push_back(uni(rng));
    std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
    while (chosen.size() < k) {
        const std::size_t last = chosen.back();
        for (std::size_t i = 0; i < n; ++i)
            min_d[i] = std::min(min_d[i], sq_dissim(i, last));
        double total = 0.0;
        for (double v : min_d) total += v;
        std::size_t pick = 0;
        if (total <= 0.0) {
            // all remaining points coincide with a chosen one
            pick = uni(rng);
        } else {
            std::uniform_real_distribution<double> real(0.0, total);
            double target = real(rng), acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_d[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        chosen.push_back(pick);
    }
    return chosen;
}

struct LloydResult {
    std::vector<std::size_t> assign;
    Matrix centers;
    double inertia = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

LloydResult lloyd_once(const Matrix& data, std::size_t k, std::mt19937_64 rng,
                       std::size_t max_iter) {
    const std::size_t n = data.rows(), m = data.cols();
    const auto seeds = kmeanspp_seed(n, k, rng, [&](std::size_t i, std::size_t j) {
        return kernels::squared_l2(data.row(i), data.row(j));
    });
    Matrix centers(k, m);
    for (std::size_t c = 0; c < k; ++c) {
        auto src = data.row(seeds[c]);
        std::copy(src.begin(), src.end(), centers.row(c).begin());
    }

    LloydResult res;
    res.assign.assign(n, 0);
    std::vector<std::size_t> sizes(k, 0);
    double prev_inertia = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = kernels::squared_l2(data.row(i), centers.row(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (res.assign[i] != best || it == 0) {
                if (it > 0) changed = true;
                res.assign[i] = best;
            }
        }
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t c : res.assign) ++sizes[c];

        // empty-cluster repair: move the point farthest from its centroid
        for (std::size_t c = 0; c < k; ++c) {
            while (sizes[c] == 0) {
                std::size_t worst = n;
                double worst_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (sizes[res.assign[i]] <= 1) continue;
                    const double d =
                        kernels::squared_l2(data.row(i), centers.row(res.assign[i]));
                    if (d > worst_d) {
                        worst_d = d;
                        worst = i;
                    }
                }
                if (worst == n) throw NumericError("cannot repair empty cluster");
                --sizes[res.assign[worst]];
                res.assign[worst] = c;
                ++sizes[c];
                changed = true;
            }
        }

        for (auto& v : centers.data()) v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto row = data.row(i);
            auto ctr = centers.row(res.assign[i]);
            for (std::size_t j = 0; j < m; ++j) ctr[j] += row[j];
        }
        for (std::size_t c = 0; c < k; ++c)
            for (double& v : centers.row(c)) v /= static_cast<double>(sizes[c]);

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += kernels::squared_l2(data.row(i), centers.row(res.assign[i]));
        res.history.push_back(inertia);
        res.iterations = it + 1;
        res.inertia = inertia;
        const bool small_change =
            prev_inertia < std::numeric_limits<double>::infinity() &&
            std::abs(prev_inertia - inertia) <= 1e-6 * std::max(1.0, prev_inertia);
        prev_inertia = inertia;
        if ((it > 0 && !changed) || small_change) {
            res.converged = true;
            break;
        }
    }
    res.centers = std::move(centers);
    return res;
}

}  // namespace

ClusterAssignment kmeans(const repr::RepresentedMatrix& matrix, const ClusterConfig& config) {
    const std::size_t n = matrix.data.rows();
    check_k(config.k, n);
    if (config.distance.variant != metrics::DistanceVariant::euclidean)
        throw ValidationError({"kmeans requires euclidean distance"});

    const std::size_t restarts = std::max<std::size_t>(1, config.n_init);
    std::vector<LloydResult> results(restarts);
    parallel_for(restarts, [&](std::size_t r) {
        results[r] = lloyd_once(matrix.data, config.k,
                                make_rng(config.seed, config.k, r), config.max_iter);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (results[r].inertia < results[best].inertia) best = r;

    ClusterAssignment a;
    a.labels = matrix.labels;
    a.cluster_of = std::move(results[best].assign);
    a.k = config.k;
    a.centers = std::move(results[best].centers);
    a.inertia = results[best].inertia;
    a.iterations = results[best].iterations;
    a.converged = results[best].converged;
    a.inertia_history = std::move(results[best].history);
    canonicalize(a);
    return a;
}

ClusterAssignment kmedoids(const repr::RepresentedMatrix& matrix,
                           const ClusterConfig& config) {
    const std::size_t n = matrix.data.rows();
    check_k(config.k, n);
    const std::size_t k = config.k;
    const auto dm = metrics::pairwise(matrix, config.distance);
    auto d = [&](std::size_t i, std::size_t j) { return dm.values(i, j); };

    // BUILD: first medoid minimizes total distance, then greedy additions
    std::vector<std::size_t> medoids;
    std::vector<char> is_medoid(n, 0);
    {
        std::size_t best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double cost = 0.0;
            for (std::size_t j = 0; j < n; ++j) cost += d(i, j);
            if (cost < best_cost) {
                best_cost = cost;
                best = i;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
    }
    std::vector<double> nearest(n);
    auto refresh_nearest = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            double nd = std::numeric_limits<double>::infinity();
            for (std::size_t mi : medoids) nd = std::min(nd, d(i, mi));
            nearest[i] = nd;
        }
    };
    refresh_nearest();
    while (medoids.size() < k) {
        std::size_t best = n;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t cand = 0; cand < n; ++cand) {
            if (is_medoid[cand]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                gain += std::max(0.0, nearest[j] - d(cand, j));
            if (gain > best_gain) {
                best_gain = gain;
                best = cand;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
        refresh_nearest();
    }

    auto total_cost = [&](const std::vector<std::size_t>& meds) {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nd = std::numeric_limits<double>::infinity();
            for (std::size_t mi : meds) nd = std::min(nd, d(i, mi));
            cost += nd;
        }
        return cost;
    };

    // SWAP: steepest-descent swaps until no improvement
    struct SwapRun {
        std::vector<std::size_t> medoids;
        double cost = 0.0;
        std::vector<double> history;
        std::size_t iterations = 0;
        bool converged = false;
    };
    auto swap_descent = [&](std::vector<std::size_t> meds) {
        std::vector<char> member(n, 0);
        for (std::size_t mi : meds) member[mi] = 1;
        SwapRun run;
        run.cost = total_cost(meds);
        run.history.push_back(run.cost);
        for (std::size_t it = 0; it < config.max_iter; ++it) {
            double best_cost = run.cost;
            std::size_t best_m = k, best_h = n;
            for (std::size_t mi = 0; mi < k; ++mi) {
                for (std::size_t h = 0; h < n; ++h) {
                    if (member[h]) continue;
                    std::vector<std::size_t> trial = meds;
                    trial[mi] = h;
                    const double c = total_cost(trial);
                    if (c < best_cost - 1e-12) {
                        best_cost = c;
                        best_m = mi;
                        best_h = h;
                    }
                }
            }
            run.iterations = it + 1;
            if (best_m == k) {
                run.converged = true;
                break;
            }
            member[meds[best_m]] = 0;
            meds[best_m] = best_h;
            member[best_h] = 1;
            run.cost = best_cost;
            run.history.push_back(run.cost);
        }
        run.medoids = std::move(meds);
        return run;
    };

    // restart 0 descends from the BUILD seed, the rest from seeded random
    // medoid subsets; swap descent alone can stall in a local optimum
    SwapRun best_run = swap_descent(medoids);
    for (std::size_t r = 1; r < std::max<std::size_t>(1, config.n_init); ++r) {
        auto rng = make_rng(config.seed, k, r);
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto run = swap_descent({pool.begin(), pool.begin() + static_cast<long>(k)});
        if (run.cost < best_run.cost - 1e-12) best_run = run;
    }
    medoids = best_run.medoids;
    const double cost = best_run.cost;
    const std::vector<double>& cost_history = best_run.history;
    const std::size_t iterations = best_run.iterations;
    const bool converged = best_run.converged;

    ClusterAssignment a;
    a.labels = matrix.labels;
    a.k = k;
    a.cluster_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double dd = d(i, medoids[c]);
            if (dd < best_d) {
                best_d = dd;
                best = c;
            }
        }
        a.cluster_of[i] = best;
    }
    // medoids assign to themselves even under ties
    for (std::size_t c = 0; c < k; ++c) a.cluster_of[medoids[c]] = c;
    a.centers = Matrix(k, matrix.data.cols());
    for (std::size_t c = 0; c < k; ++c) {
        auto src = matrix.data.row(medoids[c]);
        std::copy(src.begin(), src.end(), a.centers.row(c).begin());
    }
    a.inertia = cost;
    a.iterations = iterations;
    a.converged = converged;
    a.inertia_history = std::move(cost_history);
    canonicalize(a);
    return a;
}

ClusterAssignment hierarchical(const repr::RepresentedMatrix& matrix,
                               const ClusterConfig& config) {
    const std::size_t n = matrix.data.rows();
    check_k(config.k, n);
    if (config.linkage == Linkage::ward &&
        config.distance.variant != metrics::DistanceVariant::euclidean)
        throw ValidationError({"ward linkage requires euclidean distance"});

    const auto dm = metrics::pairwise(matrix, config.distance);
    // ward updates operate on squared distances
    const bool squared = config.linkage == Linkage::ward;
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dist[i][j] = squared ? dm.values(i, j) * dm.values(i, j) : dm.values(i, j);

    std::vector<char> active(n, 1);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> member_cluster(n);
    std::iota(member_cluster.begin(), member_cluster.end(), 0);

    for (std::size_t merge = 0; merge < n - config.k; ++merge) {
        // smallest-distance pair; ties by smallest (i, j)
        std::size_t bi = n, bj = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (dist[i][j] < best) {
                    best = dist[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        const double ni = static_cast<double>(size[bi]);
        const double nj = static_cast<double>(size[bj]);
        for (std::size_t t = 0; t < n; ++t) {
            if (!active[t] || t == bi || t == bj) continue;
            const double dik = dist[bi][t], djk = dist[bj][t], dij = dist[bi][bj];
            const double nt = static_cast<double>(size[t]);
            double merged = 0.0;
            switch (config.linkage) {
                case Linkage::single: merged = std::min(dik, djk); break;
                case Linkage::complete: merged = std::max(dik, djk); break;
                case Linkage::average: merged = (ni * dik + nj * djk) / (ni + nj); break;
                case Linkage::ward:
                    merged = ((ni + nt) * dik + (nj + nt) * djk - nt * dij) / (ni + nj + nt);
                    break;
            }
            dist[bi][t] = dist[t][bi] = merged;
        }
        size[bi] += size[bj];
        active[bj] = 0;
        for (std::size_t& c : member_cluster)
            if (c == bj) c = bi;
    }

    // compact active cluster reps to ids in [0, k)
    std::vector<std::size_t> rep_to_id(n, n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (active[i]) rep_to_id[i] = next++;

    ClusterAssignment a;
    a.labels = matrix.labels;
    a.k = config.k;
    a.cluster_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) a.cluster_of[i] = rep_to_id[member_cluster[i]];

    const std::size_t m = matrix.data.cols();
    a.centers = Matrix(config.k, m, 0.0);
    std::vector<std::size_t> counts(config.k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = matrix.data.row(i);
        auto ctr = a.centers.row(a.cluster_of[i]);
        for (std::size_t j = 0; j < m; ++j) ctr[j] += row[j];
        ++counts[a.cluster_of[i]];
    }
    for (std::size_t c = 0; c < config.k; ++c)
        for (double& v : a.centers.row(c)) v /= static_cast<double>(counts[c]);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        inertia += kernels::squared_l2(matrix.data.row(i), a.centers.row(a.cluster_of[i]));
    a.inertia = inertia;
    a.iterations = n - config.k;
    a.converged = true;
    canonicalize(a);
    return a;
}

namespace {

void znormalize_row(std::span<double> row) {
    const std::size_t d = row.size();
    const double mu = kernels::sum(row) / static_cast<double>(d);
    double var = 0.0;
    for (double v : row) var += (v - mu) * (v - mu);
    var /= static_cast<double>(d);
    const double sigma = std::sqrt(var);
    if (sigma == 0.0) {
        std::fill(row.begin(), row.end(), 0.0);
    } else {
        for (double& v : row) v = (v - mu) / sigma;
    }
}

bool is_znormalized(const Matrix& data) {
    for (std::size_t i = 0; i < data.rows(); ++i) {
        auto row = data.row(i);
        const double d = static_cast<double>(row.size());
        const double mu = kernels::sum(row) / d;
        const double ss = kernels::sum_squares(row) / d;
        if (std::abs(mu) > 1e-8 || std::abs((ss - mu * mu) - 1.0) > 1e-6) return false;
    }
    return true;
}

// align y to reference by the SBD-maximizing shift, zero-padded
std::vector<double> align_to(std::span<const double> reference, std::span<const double> y) {
    const long d = static_cast<long>(y.size());
    const long s = metrics::sbd(reference, y).best_shift;
    std::vector<double> out(y.size(), 0.0);
    for (long i = 0; i < d; ++i) {
        const long src = i - s;
        if (src >= 0 && src < d) out[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(src)];
    }
    return out;
}

// shape extraction: dominant eigenvector of the centered alignment matrix
std::vector<double> extract_shape(const Matrix& data,
                                  const std::vector<std::size_t>& members,
                                  std::span<const double> current_centroid) {
    const std::size_t d = data.cols();
    Eigen::MatrixXd aligned(static_cast<Eigen::Index>(members.size()),
                            static_cast<Eigen::Index>(d));
    const bool have_centroid =
        kernels::sum_squares(current_centroid) > 0.0;
    for (std::size_t r = 0; r < members.size(); ++r) {
        std::vector<double> row;
        if (have_centroid)
            row = align_to(current_centroid, data.row(members[r]));
        else
            row.assign(data.row(members[r]).begin(), data.row(members[r]).end());
        znormalize_row(row);
        for (std::size_t j = 0; j < d; ++j)
            aligned(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row[j];
    }
    Eigen::MatrixXd S = aligned.transpose() * aligned;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                  static_cast<Eigen::Index>(d));
    Q.array() -= 1.0 / static_cast<double>(d);
    Eigen::MatrixXd M = Q * S * Q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw NumericError("shape extraction eigensolve failed");
    Eigen::VectorXd v = es.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);

    std::vector<double> centroid(d);
    for (std::size_t j = 0; j < d; ++j) centroid[j] = v(static_cast<Eigen::Index>(j));
    znormalize_row(centroid);
    // sign: positive correlation with the cluster majority
    double corr = 0.0;
    for (Eigen::Index r = 0; r < aligned.rows(); ++r)
        for (std::size_t j = 0; j < d; ++j)
            corr += aligned(r, static_cast<Eigen::Index>(j)) * centroid[j];
    if (corr < 0.0)
        for (double& x : centroid) x = -x;
    return centroid;
}

struct KShapeRun {
    std::vector<std::size_t> assign;
    Matrix centers;
    double inertia = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

KShapeRun kshape_once(const Matrix& data, std::size_t k, std::mt19937_64 rng,
                      std::size_t max_iter) {
    const std::size_t n = data.rows(), d = data.cols();
    const auto seeds = kmeanspp_seed(n, k, rng, [&](std::size_t i, std::size_t j) {
        const double s = metrics::sbd(data.row(i), data.row(j)).distance;
        return s * s;
    });
    Matrix centers(k, d);
    for (std::size_t c = 0; c < k; ++c) {
        auto src = data.row(seeds[c]);
        std::copy(src.begin(), src.end(), centers.row(c).begin());
    }

    KShapeRun res;
    res.assign.assign(n, 0);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t it = 0; it < max_iter; ++it) {
        bool changed = false;
        std::vector<double> own_dist(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double dd = metrics::sbd(centers.row(c), data.row(i)).distance;
                if (dd < best_d) {
                    best_d = dd;
                    best = c;
                }
            }
            if (res.assign[i] != best || it == 0) {
                if (it > 0) changed = true;
                res.assign[i] = best;
            }
            own_dist[i] = best_d;
        }
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t c : res.assign) ++sizes[c];
        for (std::size_t c = 0; c < k; ++c) {
            while (sizes[c] == 0) {
                std::size_t worst = n;
                double worst_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (sizes[res.assign[i]] <= 1) continue;
                    if (own_dist[i] > worst_d) {
                        worst_d = own_dist[i];
                        worst = i;
                    }
                }
                if (worst == n) throw NumericError("cannot repair empty cluster");
                --sizes[res.assign[worst]];
                res.assign[worst] = c;
                ++sizes[c];
                own_dist[worst] = 0.0;
                changed = true;
            }
        }

        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < n; ++i) members[res.assign[i]].push_back(i);
        for (std::size_t c = 0; c < k; ++c) {
            const auto shape = extract_shape(data, members[c], centers.row(c));
            std::copy(shape.begin(), shape.end(), centers.row(c).begin());
        }

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += metrics::sbd(centers.row(res.assign[i]), data.row(i)).distance;
        res.history.push_back(inertia);
        res.inertia = inertia;
        res.iterations = it + 1;
        if (it > 0 && !changed) {
            res.converged = true;
            break;
        }
    }
    res.centers = std::move(centers);
    return res;
}

}  // namespace

ClusterAssignment kshape(const repr::RepresentedMatrix& matrix, const ClusterConfig& config) {
    const std::size_t n = matrix.data.rows();
    check_k(config.k, n);
    if (config.distance.variant != metrics::DistanceVariant::sbd)
        throw ValidationError({"kshape requires sbd distance"});

    Matrix data = matrix.data;
    std::vector<std::string> notes;
    if (!is_znormalized(data)) {
        for (std::size_t i = 0; i < n; ++i) znormalize_row(data.row(i));
        notes.push_back("kshape: input z-scored internally");
    }

    const std::size_t restarts = std::max<std::size_t>(1, config.n_init);
    std::vector<KShapeRun> results(restarts);
    parallel_for(restarts, [&](std::size_t r) {
        results[r] =
            kshape_once(data, config.k, make_rng(config.seed, config.k, r), config.max_iter);
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (results[r].inertia < results[best].inertia) best = r;

    ClusterAssignment a;
    a.labels = matrix.labels;
    a.cluster_of = std::move(results[best].assign);
    a.k = config.k;
    a.centers = std::move(results[best].centers);
    a.inertia = results[best].inertia;
    a.iterations = results[best].iterations;
    a.converged = results[best].converged;
    a.inertia_history = std::move(results[best].history);
    a.notes = std::move(notes);
    canonicalize(a);
    return a;
}

ClusterAssignment cluster(const repr::RepresentedMatrix& matrix, const ClusterConfig& config) {
    switch (config.algorithm) {
        case Algorithm::kmeans: return kmeans(matrix, config);
        case Algorithm::kmedoids: return kmedoids(matrix, config);
        case Algorithm::hierarchical: return hierarchical(matrix, config);
        case Algorithm::kshape: return kshape(matrix, config);
    }
    throw ValidationError({"unknown algorithm"});
}

KSweepResult sweep_k(const repr::RepresentedMatrix& matrix, const ClusterConfig& config,
                     std::size_t k_min, std::size_t k_max) {
    const std::size_t n = matrix.data.rows();
    if (k_min < 2 || k_max < k_min || k_max > n)
        throw ValidationError({"k sweep range must satisfy 2 <= k_min <= k_max <= n"});

    KSweepResult sweep;
    sweep.per_k.resize(k_max - k_min + 1);
    parallel_for(k_max - k_min + 1, [&](std::size_t idx) {
        ClusterConfig c = config;
        c.k = k_min + idx;
        const auto a = cluster(matrix, c);
        KSweepEntry e;
        e.k = c.k;
        e.inertia = a.inertia;
        if (c.k <= n - 1) {
            const auto scores = validity::score_all(matrix, a.cluster_of, c.k, c.distance);
            e.silhouette = scores.silhouette;
            e.davies_bouldin = scores.davies_bouldin;
            e.calinski_harabasz = scores.calinski_harabasz;
        }
        sweep.per_k[idx] = e;
    });

    // elbow: max perpendicular distance from the chord between the first and
    // last (k, inertia) points
    const auto& first = sweep.per_k.front();
    const auto& last = sweep.per_k.back();
    if (sweep.per_k.size() == 1) {
        sweep.suggested_k = first.k;
        return sweep;
    }
    const double dx = static_cast<double>(last.k) - static_cast<double>(first.k);
    const double dy = last.inertia - first.inertia;
    const double chord = std::sqrt(dx * dx + dy * dy);
    double best_dist = -1.0;
    for (const auto& e : sweep.per_k) {
        const double px = static_cast<double>(e.k) - static_cast<double>(first.k);
        const double py = e.inertia - first.inertia;
        const double dist = chord > 0.0 ? std::abs(dx * py - dy * px) / chord : 0.0;
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            sweep.suggested_k = e.k;
        }
    }
    return sweep;
}

}  // namespace tsclust::clustering
