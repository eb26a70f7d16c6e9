#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fbmwalk/rng.hpp"

namespace fbmwalk {

/// Uniform timeline with step dt = 1/N, a finite simulation horizon and
/// a finite past horizon of M steps. Grid points are integer steps;
/// real times exist only at the boundary as step * dt, so loop bounds
/// never accumulate floating-point drift.
class GridSpec {
  public:
    GridSpec() = default;  // trivial 1-step grid; placeholder value

    GridSpec(long n_per_unit, double horizon, long past_horizon_steps) {
        if (n_per_unit < 1) {
            throw std::invalid_argument("GridSpec: n_per_unit must be >= 1");
        }
        if (past_horizon_steps < 1) {
            throw std::invalid_argument(
                "GridSpec: past_horizon_steps must be >= 1");
        }
        if (!(horizon > 0.0)) {
            throw std::invalid_argument("GridSpec: horizon must be > 0");
        }
        const double steps = horizon * static_cast<double>(n_per_unit);
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
            throw std::invalid_argument(
                "GridSpec: horizon " + std::to_string(horizon) +
                " is not a multiple of dt = 1/" + std::to_string(n_per_unit));
        }
        n_ = n_per_unit;
        future_steps_ = static_cast<long>(rounded);
        past_steps_ = past_horizon_steps;
    }

    long n_per_unit() const { return n_; }
    double dt() const { return 1.0 / static_cast<double>(n_); }
    double horizon() const { return static_cast<double>(future_steps_) * dt(); }
    long future_steps() const { return future_steps_; }
    long past_steps() const { return past_steps_; }

    /// Real time of an integer step.
    double time_of(long step) const { return static_cast<double>(step) * dt(); }

    /// Integer step of an on-grid time; throws if t is off-grid.
    long step_of(double t) const {
        const double steps = t * static_cast<double>(n_);
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps))) {
            throw std::invalid_argument("GridSpec: time " + std::to_string(t) +
                                        " is not on the grid");
        }
        return static_cast<long>(rounded);
    }

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && future_steps_ == o.future_steps_ &&
               past_steps_ == o.past_steps_;
    }

  private:
    long n_ = 1;
    long future_steps_ = 1;
    long past_steps_ = 1;
};

inline GridSpec make_grid(long n_per_unit, double horizon,
                          long past_horizon_steps) {
    return GridSpec(n_per_unit, horizon, past_horizon_steps);
}

/// Reproducible +-1 draws on the grid steps [-M, future_steps).
/// Identical (seed, grid) yields bit-identical draws; access is pure.
class BernoulliStream {
  public:
    BernoulliStream(std::uint64_t seed, GridSpec grid)
        : grid_(grid), rng_(seed) {}

    const GridSpec& grid() const { return grid_; }
    std::uint64_t seed() const { return rng_.seed(); }

    long first_step() const { return -grid_.past_steps(); }
    long last_step() const { return grid_.future_steps(); }  // exclusive

    /// omega at integer step (+1 or -1).
    double omega(long step) const {
        check(step);
        return rng_.sign(counter(step));
    }

    /// Delta B = sqrt(dt) * omega at integer step.
    double delta_b(long step) const { return std::sqrt(grid_.dt()) * omega(step); }

    private:
    void check(long step) const {
        if (step < first_step() || step >= last_step()) {
            throw std::out_of_range("BernoulliStream: step " +
                                    std::to_string(step) +
                                    " outside the stream window");
        }
    }
    std::uint64_t counter(long step) const {
        return static_cast<std::uint64_t>(step - first_step());
    }

    GridSpec grid_;
    CounterRng rng_;
};

/// Sum over grid points with the lower limit included and the upper
/// limit excluded: f(s) + f(s+dt) + ... + f(t-dt); empty when s == t.
template <typename F>
double grid_sum_convention(const GridSpec& grid, F&& f, double s, double t) {
    const long lo = grid.step_of(s);
    const long hi = grid.step_of(t);
    if (lo > hi) {
        throw std::invalid_argument("grid_sum_convention: s > t");
    }
    double acc = 0.0;
    for (long k = lo; k < hi; ++k) acc += f(grid.time_of(k));
    return acc;
}

inline BernoulliStream bernoulli_stream(std::uint64_t seed,
                                        const GridSpec& grid) {
    return BernoulliStream(seed, grid);
}

}  // namespace fbmwalk
