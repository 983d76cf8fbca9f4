#pragma once

#include <cstddef>
#include <span>
#include <string>

// Arithmetic inner-loop kernels used by the distance and normalization
// code paths. Each kernel has a scalar reference implementation and may
// have SIMD variants; the active variant is picked once at startup from
// CPU capabilities and can be forced with TSCLUST_KERNELS=scalar|avx2.

namespace tsclust::kernels {

double dot(std::span<const double> x, std::span<const double> y);
double squared_l2(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);

// name of the dispatched variant ("scalar" or "avx2")
const std::string& active_variant();

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double squared_l2(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define TSCLUST_HAVE_AVX2_BUILD 1
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double squared_l2(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace avx2
#else
#define TSCLUST_HAVE_AVX2_BUILD 0
#endif

}  // namespace tsclust::kernels
