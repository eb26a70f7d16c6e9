#pragma once

#include <cstdint>
#include <vector>

#include "fbmwalk/hurst.hpp"
#include "fbmwalk/walk.hpp"

namespace fbmwalk {

/// Exact fBm covariance: (s^2H + t^2H - |t-s|^2H) / 2.
double fbm_covariance(const HurstIndex& H, double s, double t);

/// Dense symmetric covariance matrix over sorted times.
struct CovarianceMatrix {
    std::vector<double> times;
    std::vector<double> entries;  // row-major, n x n

    size_t size() const { return times.size(); }
    double at(size_t i, size_t j) const { return entries[i * size() + j]; }
};

CovarianceMatrix build_covariance(const HurstIndex& H,
                                  const std::vector<double>& times);

/// Lower-triangular factor L with L L^T = C (+ jitter on the diagonal
/// when the factorization stalls; fBm matrices are ill-conditioned for
/// H near 1). jitter_used records what was added.
struct CholeskyFactor {
    std::vector<double> lower;  // row-major, n x n, upper part zero
    double jitter_used = 0.0;
    size_t n = 0;

    double at(size_t i, size_t j) const { return lower[i * n + j]; }
};

/// Factorizes with a jitter budget of 1e-10; throws if that is not
/// enough.
CholeskyFactor cholesky(const CovarianceMatrix& cov);

/// One exact Gaussian fBm draw at the given times: L z with z iid
/// standard normal from the counter RNG (Gaussian domain tag).
/// Dense factorization, so the number of times is capped (default 2048).
std::vector<double> exact_fbm_sample(const HurstIndex& H,
                                     const std::vector<double>& times,
                                     std::uint64_t seed,
                                     size_t max_times = 2048);

/// Same draw but using a prebuilt factor (cheap across many seeds).
std::vector<double> exact_fbm_sample(const CholeskyFactor& factor,
                                     std::uint64_t seed);

}  // namespace fbmwalk
