#include "fbmwalk/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmwalk/rng.hpp"

namespace fbmwalk {

double fbm_covariance(const HurstIndex& H, double s, double t) {
    if (s < 0.0 || t < 0.0) {
        throw std::domain_error("fbm_covariance: times must be >= 0");
    }
    const double h2 = 2.0 * H.value();
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) -
                  std::pow(std::abs(t - s), h2));
}

CovarianceMatrix build_covariance(const HurstIndex& H,
                                  const std::vector<double>& times) {
    for (size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            throw std::invalid_argument(
                "build_covariance: times must be strictly increasing");
        }
    }
    const size_t n = times.size();
    CovarianceMatrix cov{times, std::vector<double>(n * n)};
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            const double v = fbm_covariance(H, times[i], times[j]);
            cov.entries[i * n + j] = v;
            cov.entries[j * n + i] = v;
        }
    }
    return cov;
}

CholeskyFactor cholesky(const CovarianceMatrix& cov) {
    const size_t n = cov.size();
    constexpr double kJitterBudget = 1e-10;
    // Escalating diagonal jitter; fBm matrices get ill-conditioned as
    // H approaches 1.
    for (double jitter : {0.0, 1e-14, 1e-12, kJitterBudget}) {
        CholeskyFactor f;
        f.n = n;
        f.lower.assign(n * n, 0.0);
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) {
            for (size_t j = 0; j <= i; ++j) {
                double sum = cov.at(i, j) + (i == j ? jitter : 0.0);
                for (size_t k = 0; k < j; ++k) {
                    sum -= f.lower[i * n + k] * f.lower[j * n + k];
                }
                if (i == j) {
                    if (sum <= 0.0) {
                        ok = false;
                        break;
                    }
                    f.lower[i * n + i] = std::sqrt(sum);
                } else {
                    f.lower[i * n + j] = sum / f.lower[j * n + j];
                }
            }
        }
        if (ok) {
            f.jitter_used = jitter;
            return f;
        }
    }
    throw std::runtime_error(
        "cholesky: factorization failed within the jitter budget; "
        "invalid H/time configuration");
}

std::vector<double> exact_fbm_sample(const CholeskyFactor& factor,
                                     std::uint64_t seed) {
    const size_t n = factor.n;
    const CounterRng rng(seed);
    std::vector<double> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = rng.normal(i);
    std::vector<double> x(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j <= i; ++j) acc += factor.at(i, j) * z[j];
        x[i] = acc;
    }
    return x;
}

std::vector<double> exact_fbm_sample(const HurstIndex& H,
                                     const std::vector<double>& times,
                                     std::uint64_t seed, size_t max_times) {
    if (times.empty() || times.front() <= 0.0) {
        throw std::invalid_argument(
            "exact_fbm_sample: times must be positive (X(0) = 0 is implicit)");
    }
    if (times.size() > max_times) {
        throw std::invalid_argument(
            "exact_fbm_sample: too many times for the dense factorization");
    }
    return exact_fbm_sample(cholesky(build_covariance(H, times)), seed);
}

}  // namespace fbmwalk
