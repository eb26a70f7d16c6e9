#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "fbmwalk/walk.hpp"
#include "walk_tables.hpp"

namespace fbmwalk {

namespace {

// FFTW plan creation is not thread-safe; execution with explicit
// arrays is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

long next_pow2(long v) {
    long p = 1;
    while (p < v) p <<= 1;
    return p;
}

struct FftwBuffer {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    long n = 0;

    explicit FftwBuffer(long fft_size) : n(fft_size) {
        real = fftw_alloc_real(static_cast<size_t>(n));
        cplx = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
        if (!real || !cplx) throw std::bad_alloc();
    }
    ~FftwBuffer() {
        fftw_free(real);
        fftw_free(cplx);
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

struct PathGenerator::Impl {
    HurstIndex H;
    GridSpec grid;
    Engine engine;
    detail::WalkTables tables;

    // Convolution engine state: kernel-block spectra for overlap-add.
    long fft_size = 0;    // F, power of two
    long block = 0;       // kernel block length B, 2B + m - 2 <= F
    long n_blocks = 0;
    std::vector<std::complex<double>> kernel_fft;  // n_blocks x (F/2+1)
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    Impl(const HurstIndex& h, const GridSpec& g, Engine requested)
        : H(h), grid(g), engine(requested), tables(h, g) {
        if (engine == Engine::Auto) {
            // Naive generation is O(m (M+m)); switch to FFT blocks once
            // that product gets into the tens of millions.
            const double cost = static_cast<double>(tables.m) *
                                static_cast<double>(tables.M + tables.m);
            engine = cost > 4e6 ? Engine::Convolution : Engine::Naive;
        }
        if (engine == Engine::Convolution) setup_convolution();
    }

    ~Impl() {
        if (fwd || inv) {
            std::lock_guard<std::mutex> lock(plan_mutex());
            if (fwd) fftw_destroy_plan(fwd);
            if (inv) fftw_destroy_plan(inv);
        }
    }

    void setup_convolution() {
        const long m = tables.m;
        const long L = tables.M + m;
        fft_size = next_pow2(std::max(4 * m, 64L));
        block = (fft_size - m + 2) / 2;
        n_blocks = (L - 1 + block - 1) / block;  // kernel lags 1..L-1
        const long half = fft_size / 2 + 1;

        FftwBuffer buf(fft_size);
        {
            std::lock_guard<std::mutex> lock(plan_mutex());
            fwd = fftw_plan_dft_r2c_1d(static_cast<int>(fft_size), buf.real,
                                       buf.cplx, FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_1d(static_cast<int>(fft_size), buf.cplx,
                                       buf.real, FFTW_ESTIMATE);
        }
        kernel_fft.assign(static_cast<size_t>(n_blocks * half), {0.0, 0.0});
        for (long b = 0; b < n_blocks; ++b) {
            std::memset(buf.real, 0, sizeof(double) * static_cast<size_t>(fft_size));
            for (long kappa = 0; kappa < block; ++kappa) {
                const long lag = 1 + b * block + kappa;
                if (lag < L) buf.real[kappa] = tables.w[static_cast<size_t>(lag)];
            }
            fftw_execute_dft_r2c(fwd, buf.real, buf.cplx);
            for (long q = 0; q < half; ++q) {
                kernel_fft[static_cast<size_t>(b * half + q)] = {
                    buf.cplx[q][0], buf.cplx[q][1]};
            }
        }
    }

    PathSample make_path(std::vector<double>&& increments) const {
        PathSample out{grid,
                       std::vector<double>(static_cast<size_t>(tables.m) + 1),
                       false};
        double x = 0.0;
        out.values[0] = 0.0;
        for (long j = 0; j < tables.m; ++j) {
            x += increments[static_cast<size_t>(j)];
            out.values[static_cast<size_t>(j + 1)] = x;
        }
        return out;
    }

    PathSample generate_naive(std::uint64_t seed) const {
        std::vector<double> dB;
        detail::fill_delta_b(grid, seed, dB);
        std::vector<double> inc(static_cast<size_t>(tables.m));
        for (long j = 0; j < tables.m; ++j) {
            double v = tables.K * tables.dt_pow_a *
                       dB[static_cast<size_t>(tables.M + j)];
            for (long k = 1; k <= tables.M + j; ++k) {
                v += tables.w[static_cast<size_t>(k)] *
                     dB[static_cast<size_t>(tables.M + j - k)];
            }
            inc[static_cast<size_t>(j)] = v;
        }
        return make_path(std::move(inc));
    }

    // Overlap-add evaluation of the history convolution
    //   out[j] = sum_{k>=1} w[k] dB[M+j-k],   j = 0..m-1.
    // Kernel block b holds lags [1+bB, bB+B]; its segment of dB is
    // aligned so the valid outputs land at positions B-1 .. B+m-2 of the
    // circular convolution for every block, letting the products
    // accumulate in the frequency domain with a single inverse FFT.
    PathSample generate_convolution(std::uint64_t seed) const {
        const long m = tables.m;
        const long M = tables.M;
        const long half = fft_size / 2 + 1;
        std::vector<double> dB;
        detail::fill_delta_b(grid, seed, dB);

        FftwBuffer buf(fft_size);
        std::vector<std::complex<double>> acc(static_cast<size_t>(half),
                                              {0.0, 0.0});
        const long seg_len = block + m - 1;
        for (long b = 0; b < n_blocks; ++b) {
            const long seg_start = M - b * block - block;  // dB index of p=0
            std::memset(buf.real, 0,
                        sizeof(double) * static_cast<size_t>(fft_size));
            const long p_lo = std::max(0L, -seg_start);
            const long p_hi = std::min(seg_len, M + m - seg_start);
            for (long p = p_lo; p < p_hi; ++p) {
                buf.real[p] = dB[static_cast<size_t>(seg_start + p)];
            }
            fftw_execute_dft_r2c(fwd, buf.real, buf.cplx);
            const std::complex<double>* kf =
                &kernel_fft[static_cast<size_t>(b * half)];
            for (long q = 0; q < half; ++q) {
                const std::complex<double> s(buf.cplx[q][0], buf.cplx[q][1]);
                acc[static_cast<size_t>(q)] += s * kf[q];
            }
        }
        for (long q = 0; q < half; ++q) {
            buf.cplx[q][0] = acc[static_cast<size_t>(q)].real();
            buf.cplx[q][1] = acc[static_cast<size_t>(q)].imag();
        }
        fftw_execute_dft_c2r(inv, buf.cplx, buf.real);

        const double norm = 1.0 / static_cast<double>(fft_size);
        std::vector<double> increments(static_cast<size_t>(m));
        for (long j = 0; j < m; ++j) {
            increments[static_cast<size_t>(j)] =
                buf.real[block - 1 + j] * norm +
                tables.K * tables.dt_pow_a * dB[static_cast<size_t>(M + j)];
        }
        return make_path(std::move(increments));
    }
};

PathGenerator::PathGenerator(const HurstIndex& H, const GridSpec& grid,
                             Engine engine)
    : impl_(std::make_unique<Impl>(H, grid, engine)) {}

PathGenerator::~PathGenerator() = default;
PathGenerator::PathGenerator(PathGenerator&&) noexcept = default;
PathGenerator& PathGenerator::operator=(PathGenerator&&) noexcept = default;

Engine PathGenerator::engine() const { return impl_->engine; }

PathSample PathGenerator::generate(std::uint64_t seed) const {
    if (impl_->engine == Engine::Convolution) {
        return impl_->generate_convolution(seed);
    }
    return impl_->generate_naive(seed);
}

}  // namespace fbmwalk
