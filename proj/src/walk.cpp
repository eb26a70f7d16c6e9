#include "fbmwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fbmwalk/special.hpp"
#include "walk_tables.hpp"

namespace fbmwalk {

namespace {

void require_super(const HurstIndex& H, const char* op) {
    if (!H.super_diffusive()) {
        throw std::domain_error(std::string(op) + ": requires H > 1/2");
    }
}

void require_sub(const HurstIndex& H, const char* op) {
    if (!H.sub_diffusive()) {
        throw std::domain_error(std::string(op) + ": requires H < 1/2");
    }
}

}  // namespace

double weight(const HurstIndex& H, long lag_steps, double dt) {
    if (lag_steps < 1) {
        throw std::invalid_argument("weight: lag must be >= 1 steps");
    }
    const double h = H.value();
    return (h - 0.5) * std::pow(static_cast<double>(lag_steps) * dt, h - 1.5) *
           dt;
}

double increment(const HurstIndex& H, const BernoulliStream& stream,
                 double s) {
    const GridSpec& grid = stream.grid();
    const long j = grid.step_of(s);
    if (j < 0 || j >= grid.future_steps()) {
        throw std::out_of_range("increment: s outside [0, horizon)");
    }
    const double dt = grid.dt();
    const double h = H.value();
    double acc = coefficient_K(H) * std::pow(dt, h - 0.5) * stream.delta_b(j);
    for (long k = 1; k <= j + grid.past_steps(); ++k) {
        acc += weight(H, k, dt) * stream.delta_b(j - k);
    }
    return acc;
}

PathSample path_incremental(const HurstIndex& H,
                            const BernoulliStream& stream) {
    const GridSpec& grid = stream.grid();
    const detail::WalkTables tab(H, grid);
    std::vector<double> dB;
    detail::fill_delta_b(grid, stream.seed(), dB);

    PathSample out{grid, std::vector<double>(static_cast<size_t>(tab.m) + 1),
                   false};
    double x = 0.0;
    out.values[0] = 0.0;
    for (long j = 0; j < tab.m; ++j) {
        double inc = tab.K * tab.dt_pow_a * dB[static_cast<size_t>(tab.M + j)];
        for (long k = 1; k <= tab.M + j; ++k) {
            inc += tab.w[static_cast<size_t>(k)] *
                   dB[static_cast<size_t>(tab.M + j - k)];
        }
        x += inc;
        out.values[static_cast<size_t>(j + 1)] = x;
    }
    return out;
}

PathSample path_coefficient(const HurstIndex& H,
                            const BernoulliStream& stream) {
    const GridSpec& grid = stream.grid();
    const detail::WalkTables tab(H, grid);
    std::vector<double> dB;
    detail::fill_delta_b(grid, stream.seed(), dB);

    PathSample out{grid, std::vector<double>(static_cast<size_t>(tab.m) + 1),
                   false};
    out.values[0] = 0.0;
    for (long j = 1; j <= tab.m; ++j) {
        double x = 0.0;
        for (long k = -tab.M; k < j; ++k) {
            x += tab.coefficient(k, j) * dB[static_cast<size_t>(tab.M + k)];
        }
        out.values[static_cast<size_t>(j)] = x;
    }
    return out;
}

PathSample path_kernel(const HurstIndex& H, const BernoulliStream& stream) {
    const GridSpec& grid = stream.grid();
    const detail::WalkTables tab(H, grid);
    std::vector<double> dB;
    detail::fill_delta_b(grid, stream.seed(), dB);

    PathSample out{grid, std::vector<double>(static_cast<size_t>(tab.m) + 1),
                   false};
    out.values[0] = 0.0;
    for (long j = 1; j <= tab.m; ++j) {
        double x = 0.0;
        for (long k = -tab.M; k < j; ++k) {
            x += tab.kernel(k, j) * dB[static_cast<size_t>(tab.M + k)];
        }
        out.values[static_cast<size_t>(j)] = x;
    }
    return out;
}

CoefficientTable coefficient_table(const HurstIndex& H, const GridSpec& grid,
                                   double t) {
    const long j = grid.step_of(t);
    if (j < 0 || j > grid.future_steps()) {
        throw std::out_of_range("coefficient_table: t outside [0, horizon]");
    }
    const detail::WalkTables tab(H, grid);
    CoefficientTable out{H, grid, j, {}};
    for (long k = -tab.M; k < j; ++k) {
        out.coeffs[k] = tab.coefficient(k, j);
    }
    return out;
}

double error_epsilon(const HurstIndex& H, double r, double t,
                     const GridSpec& grid) {
    require_super(H, "error_epsilon");
    const long k = grid.step_of(r);
    const long j = grid.step_of(t);
    if (k < 0 || j <= k) {
        throw std::invalid_argument("error_epsilon: needs 0 <= r < t");
    }
    const double h = H.value();
    const double dt = grid.dt();
    double sum = 0.0;
    for (long n = 1; n < j - k; ++n) {
        sum += (h - 0.5) * std::pow(static_cast<double>(n) * dt, h - 1.5) * dt;
    }
    const double integral = std::pow(static_cast<double>(j - k) * dt, h - 0.5) -
                            std::pow(dt, h - 0.5);
    return sum - integral;
}

double error_delta(const HurstIndex& H, double r, double t,
                   const GridSpec& grid) {
    require_super(H, "error_delta");
    const long k = grid.step_of(r);
    const long j = grid.step_of(t);
    if (k >= 0) throw std::invalid_argument("error_delta: needs r < 0");
    if (j < 0) throw std::invalid_argument("error_delta: needs t >= 0");
    const double h = H.value();
    const double dt = grid.dt();
    const long p = -k;
    double sum = 0.0;
    for (long n = p; n < p + j; ++n) {
        sum += (h - 0.5) * std::pow(static_cast<double>(n) * dt, h - 1.5) * dt;
    }
    const double integral = std::pow(static_cast<double>(p + j) * dt, h - 0.5) -
                            std::pow(static_cast<double>(p) * dt, h - 0.5);
    return sum - integral;
}

double error_epsilon_tilde(const HurstIndex& H, double r, double t,
                           const GridSpec& grid) {
    require_sub(H, "error_epsilon_tilde");
    const long k = grid.step_of(r);
    const long j = grid.step_of(t);
    if (k < 0 || j <= k) {
        throw std::invalid_argument("error_epsilon_tilde: needs 0 <= r < t");
    }
    const double h = H.value();
    const double dt = grid.dt();
    // Infinite upper sum via the analytically exact zeta tail.
    const double sum = -(h - 0.5) * std::pow(dt, h - 0.5) *
                       zeta_tail(1.5 - h, j - k);
    return sum - std::pow(static_cast<double>(j - k) * dt, h - 0.5);
}

double error_delta_tilde(const HurstIndex& H, double r, double t,
                         const GridSpec& grid) {
    require_sub(H, "error_delta_tilde");
    const long k = grid.step_of(r);
    const long j = grid.step_of(t);
    if (k >= 0) throw std::invalid_argument("error_delta_tilde: needs r < 0");
    if (j < 0) throw std::invalid_argument("error_delta_tilde: needs t >= 0");
    const double h = H.value();
    const double dt = grid.dt();
    const long p = -k;
    double sum = 0.0;
    for (long n = p; n < p + j; ++n) {
        sum += -(h - 0.5) * std::pow(static_cast<double>(n) * dt, h - 1.5) * dt;
    }
    const double integral =
        -std::pow(static_cast<double>(p + j) * dt, h - 0.5) +
        std::pow(static_cast<double>(p) * dt, h - 0.5);
    return sum - integral;
}

double error_term_bound(const HurstIndex& H, ErrorTermKind which, double r,
                        double t, const GridSpec& grid) {
    const double h = H.value();
    const double dt = grid.dt();
    switch (which) {
        case ErrorTermKind::Epsilon:
            return (h - 0.5) * std::pow(dt, h - 0.5);
        case ErrorTermKind::Delta:
            return (h - 0.5) * std::pow(-r, h - 1.5) * dt;
        case ErrorTermKind::EpsilonTilde:
            return -(h - 0.5) * std::pow(t - r, h - 1.5) * dt;
        case ErrorTermKind::DeltaTilde:
            return -(h - 0.5) * std::pow(-r, h - 1.5) * dt;
    }
    throw std::logic_error("error_term_bound: unknown kind");
}

ErrorTermReport error_term_report(const HurstIndex& H, const GridSpec& grid,
                                  ErrorTermKind which) {
    ErrorTermReport report{H, grid, which, {}};
    const long m = grid.future_steps();
    const long M = grid.past_steps();
    const bool future_kind = (which == ErrorTermKind::Epsilon ||
                              which == ErrorTermKind::EpsilonTilde);
    auto eval = [&](double r, double t) {
        switch (which) {
            case ErrorTermKind::Epsilon: return error_epsilon(H, r, t, grid);
            case ErrorTermKind::Delta: return error_delta(H, r, t, grid);
            case ErrorTermKind::EpsilonTilde:
                return error_epsilon_tilde(H, r, t, grid);
            case ErrorTermKind::DeltaTilde:
                return error_delta_tilde(H, r, t, grid);
        }
        throw std::logic_error("error_term_report: unknown kind");
    };
    for (long j = 1; j <= m; ++j) {
        const double t = grid.time_of(j);
        const long k_lo = future_kind ? 0 : -M;
        const long k_hi = future_kind ? j : 0;
        for (long k = k_lo; k < k_hi; ++k) {
            const double r = grid.time_of(k);
            const double value = eval(r, t);
            const double upper = error_term_bound(H, which, r, t, grid);
            // Tiny slack absorbs floating rounding of exactly-sandwiched
            // quantities.
            const double slack = 1e-12 * std::max(1.0, std::abs(upper));
            ErrorTermEntry e{r,     t, value, 0.0, upper,
                             value >= -slack && value <= upper + slack};
            report.entries.push_back(e);
        }
    }
    return report;
}

Lemma2Check lemma2_variance_bounds(const HurstIndex& H, double t,
                                   const GridSpec& grid) {
    require_super(H, "lemma2_variance_bounds");
    const long j = grid.step_of(t);
    if (j <= 0 || j > grid.future_steps()) {
        throw std::invalid_argument(
            "lemma2_variance_bounds: t outside (0, horizon]");
    }
    const double h = H.value();
    const double dt = grid.dt();
    const detail::WalkTables tab(H, grid);

    double eps_var = 0.0;
    for (long k = 0; k < j; ++k) {
        // eps(r,t) from prefix sums: weight sum over lags 1..j-k-1 minus
        // the closed-form integral.
        const double sum = tab.W[static_cast<size_t>(j - k - 1)];
        const double integral =
            tab.pw[static_cast<size_t>(j - k)] - tab.pw[1];
        const double eps = sum - integral;
        eps_var += eps * eps * dt;
    }
    double delta_var = 0.0;
    for (long p = 1; p <= grid.past_steps(); ++p) {
        const double sum = tab.W[static_cast<size_t>(p + j - 1)] -
                           tab.W[static_cast<size_t>(p - 1)];
        const double integral = tab.pw[static_cast<size_t>(p + j)] -
                                tab.pw[static_cast<size_t>(p)];
        const double d = sum - integral;
        delta_var += d * d * dt;
    }
    const double a = h - 0.5;
    Lemma2Check out;
    out.epsilon_variance = eps_var;
    out.epsilon_bound = a * a * t * std::pow(dt, 2.0 * h - 1.0);
    out.delta_variance = delta_var;
    out.delta_bound = a * a * zeta(3.0 - 2.0 * h) * std::pow(dt, 2.0 * h);
    out.pass_i = eps_var <= out.epsilon_bound * (1.0 + 1e-12);
    out.pass_ii = delta_var <= out.delta_bound * (1.0 + 1e-12);
    return out;
}

Lemma3Check lemma3_pathwise_bound(const HurstIndex& H,
                                  const BernoulliStream& stream) {
    require_sub(H, "lemma3_pathwise_bound");
    const PathSample inc = path_incremental(H, stream);
    const PathSample ker = path_kernel(H, stream);
    double max_d = 0.0;
    for (size_t i = 0; i < inc.values.size(); ++i) {
        max_d = std::max(max_d, std::abs(inc.values[i] - ker.values[i]));
    }
    const double h = H.value();
    const double bound = 2.0 * (0.5 - h) * zeta(1.5 - h) *
                         std::pow(stream.grid().dt(), h);
    return Lemma3Check{max_d, bound, max_d <= bound};
}

long past_horizon_for_tolerance(const HurstIndex& H, long n_per_unit,
                                double horizon, double rel_var_tol) {
    if (!(rel_var_tol > 0.0)) {
        throw std::invalid_argument(
            "past_horizon_for_tolerance: tolerance must be > 0");
    }
    if (n_per_unit < 1 || !(horizon > 0.0)) {
        throw std::invalid_argument(
            "past_horizon_for_tolerance: bad grid arguments");
    }
    const double h = H.value();
    const double a = h - 0.5;
    if (a == 0.0) return 1;  // classical walk has no past dependence
    // Tail variance bound (mean-value estimate of the kernel increment,
    // validated numerically in the test suite):
    //   sum_{r < -M dt} kernel(r,t)^2 dt <= a^2 t^2 (M dt)^(2H-2) / (2-2H),
    // monotone increasing in t for the relative target t^(2H), so the
    // horizon is the worst case.
    const double t = horizon;
    const double target = rel_var_tol * std::pow(t, 2.0 * h);
    const double lead = a * a * t * t / (2.0 - 2.0 * h);
    const double window = std::pow(target / lead, 1.0 / (2.0 * h - 2.0));
    const double steps = std::ceil(window * static_cast<double>(n_per_unit));
    return std::max(1L, static_cast<long>(steps));
}

double truncation_tail_variance(const HurstIndex& H, long n_per_unit,
                                long past_steps, double t) {
    const double h = H.value();
    const double a = h - 0.5;
    if (a == 0.0) return 0.0;
    const double dt = 1.0 / static_cast<double>(n_per_unit);
    double acc = 0.0;
    // Direct summation with a two-sided analytic bracket for the rest:
    // the mean-value form d = a t xi^(a-1), xi in (u, u+t), pins the
    // unsummed remainder between
    //   lead * (p dt + t)^(2H-2)  and  lead * ((p-1) dt)^(2H-2),
    // lead = a^2 t^2 / (2-2H). Stop once the bracket midpoint is good to
    // about 1e-4 relative.
    long p = past_steps + 1;
    const long chunk = 1 << 14;
    const double lead = a * a * t * t / (2.0 - 2.0 * h);
    for (;;) {
        for (long i = 0; i < chunk; ++i, ++p) {
            const double u = static_cast<double>(p) * dt;
            const double d = std::pow(t + u, a) - std::pow(u, a);
            acc += d * d * dt;
        }
        const double hi =
            lead * std::pow(static_cast<double>(p - 1) * dt, 2.0 * h - 2.0);
        const double lo =
            lead * std::pow(static_cast<double>(p) * dt + t, 2.0 * h - 2.0);
        if (hi - lo <= 2e-4 * (acc + lo) + 1e-18) {
            acc += 0.5 * (hi + lo);
            break;
        }
    }
    return acc;
}

}  // namespace fbmwalk
