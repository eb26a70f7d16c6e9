#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fbmwalk/hurst.hpp"
#include "fbmwalk/walk.hpp"

namespace fbmwalk {

/// One Monte Carlo estimate with its Gaussian-approximation standard
/// error and the analytic target it is checked against.
struct MomentReport {
    std::string estimator;  // "mean" | "variance" | "covariance"
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    double target = 0.0;
    double z_score = 0.0;
    bool degenerate = false;  // flagged when std_error == 0
};

/// Empirical-vs-analytic covariance at a set of probe times.
struct CovarianceComparison {
    std::vector<double> probe_times;
    std::vector<MomentReport> entries;  // upper triangle, row-major order
    double max_abs_gap = 0.0;
    double max_abs_z = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max abs residual of the log-log fit
    std::vector<double> xs;
    std::vector<double> ys;
};

/// Delta-t scaling study: per-N discrepancy metrics and fitted log-log
/// slopes against the lemma rates.
struct ConvergenceReport {
    double H = 0.0;
    std::vector<long> grid_sizes;
    std::vector<double> discrepancies;
    SlopeFit fit;
    double expected_slope = 0.0;
    double slope_tolerance = 0.0;
    bool pass = false;
};

/// Sample variance of scale * X(t) across paths, target t^(2H).
/// SE uses the Gaussian approximation sample_variance * sqrt(2/(n-1)).
MomentReport estimate_variance(std::span<const PathSample> paths, double t,
                               double scale, const HurstIndex& H);

/// Empirical covariance matrix of scaled paths at probe times versus
/// fbm_covariance, with per-entry z-scores.
CovarianceComparison compare_covariance(std::span<const PathSample> paths,
                                        const std::vector<double>& probe_times,
                                        double scale, const HurstIndex& H);

/// Same comparison for raw vectors of values at the probe times (one
/// row per sample); lets the exact Gaussian oracle run through the
/// identical comparator.
CovarianceComparison compare_covariance_values(
    std::span<const std::vector<double>> rows,
    const std::vector<double>& probe_times, const HurstIndex& H);

/// Fits the Delta-t rate the lemmas predict: for H < 1/2 the slope of
/// the seed-averaged max pathwise incremental-vs-kernel discrepancy
/// (expected ~ H); for H > 1/2 the slope of the Lemma 2(ii) error
/// variance (expected ~ 2H). Needs at least 3 grid sizes.
ConvergenceReport scaling_study(const HurstIndex& H,
                                const std::vector<long>& grid_sizes,
                                std::size_t seed_count,
                                std::uint64_t base_seed = 20070811);

}  // namespace fbmwalk
