#include "tsclust/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace tsclust::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double squared_l2(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_squares(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

}  // namespace scalar

namespace {

using BinaryKernel = double (*)(const double*, const double*, std::size_t);
using UnaryKernel = double (*)(const double*, std::size_t);

struct Dispatch {
    BinaryKernel dot = &scalar::dot;
    BinaryKernel squared_l2 = &scalar::squared_l2;
    UnaryKernel sum = &scalar::sum;
    UnaryKernel sum_squares = &scalar::sum_squares;
    std::string variant = "scalar";
};

bool cpu_has_avx2() {
#if TSCLUST_HAVE_AVX2_BUILD
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Dispatch select_dispatch() {
    Dispatch d;
    const char* forced = std::getenv("TSCLUST_KERNELS");
    const std::string want = forced ? forced : "";
    if (want == "scalar") return d;
#if TSCLUST_HAVE_AVX2_BUILD
    if (want == "avx2" || (want.empty() && cpu_has_avx2())) {
        if (!cpu_has_avx2())
            throw std::runtime_error("TSCLUST_KERNELS=avx2 requested but CPU lacks AVX2");
        d.dot = &avx2::dot;
        d.squared_l2 = &avx2::squared_l2;
        d.sum = &avx2::sum;
        d.sum_squares = &avx2::sum_squares;
        d.variant = "avx2";
    }
#endif
    return d;
}

const Dispatch& dispatch() {
    static const Dispatch d = select_dispatch();
    return d;
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
    return dispatch().dot(x.data(), y.data(), x.size());
}

double squared_l2(std::span<const double> x, std::span<const double> y) {
    return dispatch().squared_l2(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return dispatch().sum(x.data(), x.size()); }

double sum_squares(std::span<const double> x) {
    return dispatch().sum_squares(x.data(), x.size());
}

const std::string& active_variant() { return dispatch().variant; }

}  // namespace tsclust::kernels
