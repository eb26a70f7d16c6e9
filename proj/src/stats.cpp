#include "fbmwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fbmwalk/oracle.hpp"
#include "fbmwalk/rng.hpp"

namespace fbmwalk {

namespace {

void require_common_grid(std::span<const PathSample> paths) {
    if (paths.size() < 2) {
        throw std::invalid_argument("stats: need at least 2 paths");
    }
    for (const auto& p : paths) {
        if (!(p.grid == paths.front().grid)) {
            throw std::invalid_argument("stats: mismatched grids");
        }
    }
}

struct Accum {
    // Covariance accumulation in one pass over samples, two-pass mean
    // subtraction avoided by shifting with the first row.
    std::vector<double> shift;
    std::vector<double> sum;
    std::vector<double> cross;  // d x d, row-major
    std::size_t n = 0;

    explicit Accum(std::size_t d)
        : shift(d, 0.0), sum(d, 0.0), cross(d * d, 0.0) {}

    void add(const std::vector<double>& row) {
        const std::size_t d = shift.size();
        if (n == 0) shift = row;
        for (std::size_t i = 0; i < d; ++i) {
            const double di = row[i] - shift[i];
            sum[i] += di;
            for (std::size_t j = i; j < d; ++j) {
                cross[i * d + j] += di * (row[j] - shift[j]);
            }
        }
        ++n;
    }

    double cov(std::size_t i, std::size_t j) const {
        const std::size_t d = shift.size();
        const double nd = static_cast<double>(n);
        const std::size_t a = std::min(i, j), b = std::max(i, j);
        return (cross[a * d + b] - sum[a] * sum[b] / nd) / (nd - 1.0);
    }
};

SlopeFit fit_loglog(const std::vector<double>& dts,
                    const std::vector<double>& metrics) {
    SlopeFit fit;
    const std::size_t n = dts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(dts[i]);
        const double y = std::log(metrics[i]);
        fit.xs.push_back(x);
        fit.ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nd = static_cast<double>(n);
    fit.slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / nd;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residual = std::max(
            fit.residual,
            std::abs(fit.ys[i] - (fit.slope * fit.xs[i] + fit.intercept)));
    }
    return fit;
}

}  // namespace

MomentReport estimate_variance(std::span<const PathSample> paths, double t,
                               double scale, const HurstIndex& H) {
    require_common_grid(paths);
    const long step = paths.front().grid.step_of(t);
    const double nd = static_cast<double>(paths.size());
    double mean = 0.0;
    for (const auto& p : paths) mean += scale * p.at_step(step);
    mean /= nd;
    double var = 0.0;
    for (const auto& p : paths) {
        const double d = scale * p.at_step(step) - mean;
        var += d * d;
    }
    var /= (nd - 1.0);

    MomentReport r;
    r.estimator = "variance";
    r.value = var;
    r.n_samples = paths.size();
    r.std_error = var * std::sqrt(2.0 / (nd - 1.0));
    r.target = std::pow(t, 2.0 * H.value());
    r.degenerate = (r.std_error == 0.0);
    r.z_score = r.degenerate ? 0.0 : (var - r.target) / r.std_error;
    return r;
}

CovarianceComparison compare_covariance_values(
    std::span<const std::vector<double>> rows,
    const std::vector<double>& probe_times, const HurstIndex& H) {
    if (rows.size() < 2) {
        throw std::invalid_argument("compare_covariance: need >= 2 samples");
    }
    const std::size_t d = probe_times.size();
    Accum acc(d);
    for (const auto& row : rows) {
        if (row.size() != d) {
            throw std::invalid_argument(
                "compare_covariance: row/probe size mismatch");
        }
        acc.add(row);
    }
    CovarianceComparison out;
    out.probe_times = probe_times;
    const double nd = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            MomentReport e;
            e.estimator = (i == j) ? "variance" : "covariance";
            e.value = acc.cov(i, j);
            e.n_samples = rows.size();
            e.target = fbm_covariance(H, probe_times[i], probe_times[j]);
            // Gaussian SE of an empirical covariance entry.
            e.std_error = std::sqrt(
                (acc.cov(i, i) * acc.cov(j, j) + e.value * e.value) /
                (nd - 1.0));
            e.degenerate = (e.std_error == 0.0);
            e.z_score = e.degenerate ? 0.0 : (e.value - e.target) / e.std_error;
            out.entries.push_back(e);
            out.max_abs_gap =
                std::max(out.max_abs_gap, std::abs(e.value - e.target));
            out.max_abs_z = std::max(out.max_abs_z, std::abs(e.z_score));
        }
    }
    return out;
}

CovarianceComparison compare_covariance(std::span<const PathSample> paths,
                                        const std::vector<double>& probe_times,
                                        double scale, const HurstIndex& H) {
    require_common_grid(paths);
    std::vector<long> steps;
    for (double t : probe_times) steps.push_back(paths.front().grid.step_of(t));
    std::vector<std::vector<double>> rows;
    rows.reserve(paths.size());
    for (const auto& p : paths) {
        std::vector<double> row(probe_times.size());
        for (std::size_t i = 0; i < steps.size(); ++i) {
            row[i] = scale * p.at_step(steps[i]);
        }
        rows.push_back(std::move(row));
    }
    return compare_covariance_values(rows, probe_times, H);
}

ConvergenceReport scaling_study(const HurstIndex& H,
                                const std::vector<long>& grid_sizes,
                                std::size_t seed_count,
                                std::uint64_t base_seed) {
    if (grid_sizes.size() < 3) {
        throw std::invalid_argument("scaling_study: need >= 3 grid sizes");
    }
    for (std::size_t i = 1; i < grid_sizes.size(); ++i) {
        if (grid_sizes[i] <= grid_sizes[i - 1]) {
            throw std::invalid_argument(
                "scaling_study: grid sizes must be strictly increasing");
        }
    }
    if (H.regime() == Regime::Classical) {
        throw std::domain_error(
            "scaling_study: no lemma rate to fit at H = 1/2");
    }

    ConvergenceReport rep;
    rep.H = H.value();
    rep.grid_sizes = grid_sizes;
    std::vector<double> dts;
    const bool sub = H.sub_diffusive();
    for (long N : grid_sizes) {
        const double dt = 1.0 / static_cast<double>(N);
        dts.push_back(dt);
        if (sub) {
            // Seed-averaged max pathwise incremental-vs-kernel gap;
            // Lemma 3 predicts rate dt^H.
            const GridSpec grid(N, 1.0, 8 * N);
            double mean_max = 0.0;
            for (std::size_t s = 0; s < seed_count; ++s) {
                const BernoulliStream stream(CounterRng::schedule(base_seed, s),
                                             grid);
                mean_max += lemma3_pathwise_bound(H, stream).max_discrepancy;
            }
            rep.discrepancies.push_back(mean_max /
                                        static_cast<double>(seed_count));
        } else {
            // Lemma 2(ii) error variance; deterministic, rate dt^(2H).
            const GridSpec grid(N, 1.0, 64 * N);
            rep.discrepancies.push_back(
                lemma2_variance_bounds(H, 1.0, grid).delta_variance);
        }
    }
    rep.fit = fit_loglog(dts, rep.discrepancies);
    rep.expected_slope = sub ? H.value() : 2.0 * H.value();
    rep.slope_tolerance = sub ? 0.05 : 0.1;
    rep.pass = std::abs(rep.fit.slope - rep.expected_slope) <=
               rep.slope_tolerance;
    return rep;
}

}  // namespace fbmwalk
