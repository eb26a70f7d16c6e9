#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fbmwalk/grid.hpp"
#include "fbmwalk/hurst.hpp"

namespace fbmwalk {

/// A path on the nonnegative grid times: values[k] = X(k*dt),
/// k = 0 .. future_steps. Step-function (cadlag) semantics between
/// grid points. Unscaled unless `scaled` says c_H has been applied.
struct PathSample {
    GridSpec grid;
    std::vector<double> values;
    bool scaled = false;

    double at_step(long k) const { return values.at(static_cast<size_t>(k)); }
    double at_time(double t) const { return at_step(grid.step_of(t)); }
};

/// Coefficients C(r,t) of Delta B(r) in the reordered expression for
/// X(t), for one fixed t. Key is the integer step of r.
struct CoefficientTable {
    HurstIndex H;
    GridSpec grid;
    long t_step;
    std::map<long, double> coeffs;
};

/// One evaluated Riemann-sum error term with its analytic sandwich.
struct ErrorTermEntry {
    double r;
    double t;
    double value;
    double lower_bound;  // always 0
    double upper_bound;
    bool within_bounds;
};

enum class ErrorTermKind { Epsilon, Delta, EpsilonTilde, DeltaTilde };

struct ErrorTermReport {
    HurstIndex H;
    GridSpec grid;
    ErrorTermKind which;
    std::vector<ErrorTermEntry> entries;

    bool all_within_bounds() const {
        for (const auto& e : entries)
            if (!e.within_bounds) return false;
        return true;
    }
};

/// Weight of the lag-k past increment: (H-1/2) * (k*dt)^(H-3/2) * dt,
/// k >= 1. The current draw enters only through the K_H term.
double weight(const HurstIndex& H, long lag_steps, double dt);

/// Increment Delta X(s) = K_H dt^(H-1/2) Delta B(s)
///                        + sum_{r=-M dt}^{s} weight * Delta B(r),
/// with the sum convention (r = s excluded).
double increment(const HurstIndex& H, const BernoulliStream& stream, double s);

/// X as the cumulative sum of increments, X(0) = 0. O(n (n+M)).
PathSample path_incremental(const HurstIndex& H, const BernoulliStream& stream);

/// X via the reordered coefficient form C(r,t). Agrees with
/// path_incremental exactly in exact arithmetic over the same
/// truncated past; for H < 1/2 the future coefficients use analytically
/// exact zeta tails.
PathSample path_coefficient(const HurstIndex& H, const BernoulliStream& stream);

/// Idealized kernel sum the walk converges to:
/// sum_r ((t-r)^(H-1/2) - (-r)_+^(H-1/2)) Delta B(r), error terms omitted.
PathSample path_kernel(const HurstIndex& H, const BernoulliStream& stream);

/// Coefficient table C(r, t) for one grid time t >= 0.
CoefficientTable coefficient_table(const HurstIndex& H, const GridSpec& grid,
                                   double t);

// Riemann-sum error terms (paper section 2 for H > 1/2, section 3 for
// H < 1/2) together with their sandwich bounds.

double error_epsilon(const HurstIndex& H, double r, double t,
                     const GridSpec& grid);
double error_delta(const HurstIndex& H, double r, double t,
                   const GridSpec& grid);
double error_epsilon_tilde(const HurstIndex& H, double r, double t,
                           const GridSpec& grid);
double error_delta_tilde(const HurstIndex& H, double r, double t,
                         const GridSpec& grid);

/// Per-term sandwich upper bound for the given error kind at (r, t).
double error_term_bound(const HurstIndex& H, ErrorTermKind which, double r,
                        double t, const GridSpec& grid);

/// Evaluate every admissible (r, t) pair on the grid for one error kind.
ErrorTermReport error_term_report(const HurstIndex& H, const GridSpec& grid,
                                  ErrorTermKind which);

struct Lemma2Check {
    double epsilon_variance;     // sum_r eps(r,t)^2 dt over 0 <= r < t
    double epsilon_bound;        // (H-1/2)^2 t dt^(2H-1)
    double delta_variance;       // sum_r delta(r,t)^2 dt over -M dt <= r < 0
    double delta_bound;          // (H-1/2)^2 zeta(3-2H) dt^(2H)
    bool pass_i;
    bool pass_ii;
    bool pass() const { return pass_i && pass_ii; }
};

/// Variance bounds of Lemma 2 for H > 1/2 at grid time t.
Lemma2Check lemma2_variance_bounds(const HurstIndex& H, double t,
                                   const GridSpec& grid);

struct Lemma3Check {
    double max_discrepancy;  // max_t |path_incremental - path_kernel|
    double bound;            // 2 (1/2-H) zeta(3/2-H) dt^H
    bool pass;
};

/// Pathwise bound of Lemma 3 for H < 1/2: deterministic for every seed.
Lemma3Check lemma3_pathwise_bound(const HurstIndex& H,
                                  const BernoulliStream& stream);

/// Smallest past horizon M (in steps of 1/n_per_unit) whose truncated
/// tail contributes at most rel_var_tol * t^(2H) of variance for every
/// t <= horizon.
long past_horizon_for_tolerance(const HurstIndex& H, long n_per_unit,
                                double horizon, double rel_var_tol);

/// Exact truncation-tail variance sum_{r < -M dt} kernel(r,t)^2 dt,
/// evaluated numerically. Used to validate the analytic bound behind
/// past_horizon_for_tolerance.
double truncation_tail_variance(const HurstIndex& H, long n_per_unit,
                                long past_steps, double t);

/// Path generation engine. Naive is the literal increment recursion;
/// Convolution evaluates the same increments with FFT block convolution
/// (agrees within 1e-8 sup-norm); Auto picks by problem size.
enum class Engine { Naive, Convolution, Auto };

/// Reusable generator: precomputes weight tables (and kernel-block FFTs
/// for the convolution engine) once per (H, grid); generate() is then
/// cheap per seed. Immutable after construction apart from internal
/// scratch, which is per-call.
class PathGenerator {
  public:
    PathGenerator(const HurstIndex& H, const GridSpec& grid,
                  Engine engine = Engine::Auto);
    ~PathGenerator();
    PathGenerator(PathGenerator&&) noexcept;
    PathGenerator& operator=(PathGenerator&&) noexcept;

    PathSample generate(std::uint64_t seed) const;
    Engine engine() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fbmwalk
