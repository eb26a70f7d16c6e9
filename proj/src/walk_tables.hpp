#pragma once

#include <cmath>
#include <vector>

#include "fbmwalk/grid.hpp"
#include "fbmwalk/hurst.hpp"
#include "fbmwalk/special.hpp"

namespace fbmwalk::detail {

// Precomputed per-(H, grid) material shared by every path form.
// Immutable after construction.
struct WalkTables {
    double a;        // H - 1/2
    double dt;
    double dt_pow_a; // dt^(H-1/2)
    double K;        // coefficient_K(H)
    long m;          // future steps
    long M;          // past steps
    bool sub;        // H < 1/2 regime (zeta-tail coefficients)

    // w[k] = (H-1/2) (k dt)^(H-3/2) dt, k = 1..M+m-1 (w[0] unused = 0).
    std::vector<double> w;
    // W[q] = w[1] + ... + w[q], W[0] = 0.
    std::vector<double> W;
    // pw[q] = (q dt)^(H-1/2), q = 0..M+m (pw[0] = 0 by the (-r)_+ rule).
    std::vector<double> pw;
    // Z[n] = zeta_tail(3/2-H, n), n = 1..m; only for the sub regime.
    std::vector<double> Z;

    WalkTables(const HurstIndex& H, const GridSpec& grid) {
        const double h = H.value();
        a = h - 0.5;
        dt = grid.dt();
        dt_pow_a = std::pow(dt, a);
        K = coefficient_K(H);
        m = grid.future_steps();
        M = grid.past_steps();
        sub = H.sub_diffusive();

        const long L = M + m;
        w.assign(static_cast<size_t>(L), 0.0);
        W.assign(static_cast<size_t>(L), 0.0);
        pw.assign(static_cast<size_t>(L) + 1, 0.0);
        for (long k = 1; k < L; ++k) {
            w[static_cast<size_t>(k)] =
                a * std::pow(static_cast<double>(k) * dt, h - 1.5) * dt;
            W[static_cast<size_t>(k)] =
                W[static_cast<size_t>(k - 1)] + w[static_cast<size_t>(k)];
        }
        for (long q = 1; q <= L; ++q) {
            pw[static_cast<size_t>(q)] =
                std::pow(static_cast<double>(q) * dt, a);
        }
        if (sub) {
            Z.assign(static_cast<size_t>(m) + 1, 0.0);
            for (long n = 1; n <= m; ++n) {
                Z[static_cast<size_t>(n)] = zeta_tail(1.5 - h, n);
            }
        }
    }

    // Coefficient C(r, t) of Delta B(r) in the reordered form of X(t),
    // r = k dt (k may be negative), t = j dt, -M <= k < j.
    double coefficient(long k, long j) const {
        if (k >= 0) {
            if (sub) return -a * dt_pow_a * Z[static_cast<size_t>(j - k)];
            return K * dt_pow_a + W[static_cast<size_t>(j - k - 1)];
        }
        const long p = -k;
        return W[static_cast<size_t>(p + j - 1)] - W[static_cast<size_t>(p - 1)];
    }

    // Mandelbrot-Van Ness kernel (t-r)^(H-1/2) - (-r)_+^(H-1/2).
    double kernel(long k, long j) const {
        if (k >= 0) return pw[static_cast<size_t>(j - k)];
        return pw[static_cast<size_t>(j - k)] - pw[static_cast<size_t>(-k)];
    }
};

// Fills dB[i] = sqrt(dt) * omega(step), i = 0 .. M+m-1, step = i - M.
// Matches BernoulliStream::delta_b draw for draw.
inline void fill_delta_b(const GridSpec& grid, std::uint64_t seed,
                         std::vector<double>& out) {
    const long L = grid.past_steps() + grid.future_steps();
    out.resize(static_cast<size_t>(L));
    const CounterRng rng(seed);
    const double root_dt = std::sqrt(grid.dt());
    for (long i = 0; i < L; ++i) {
        out[static_cast<size_t>(i)] =
            root_dt * rng.sign(static_cast<std::uint64_t>(i));
    }
}

}  // namespace fbmwalk::detail
