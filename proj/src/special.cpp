#include "fbmwalk/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fbmwalk {

namespace {

constexpr double kSeriesGuard = 1e-6;  // reject s <= 1 + guard

// B_{2j} / (2j)! for j = 1..8.
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 12.0,                    // B2/2!
    -1.0 / 720.0,                  // B4/4!
    1.0 / 30240.0,                 // B6/6!
    -1.0 / 1209600.0,              // B8/8!
    1.0 / 47900160.0,              // B10/10!
    -691.0 / 1307674368000.0,      // B12/12!
    1.0 / 74724249600.0,           // B14/14!
    -3617.0 / 10670622842880000.0  // B16/16!
};

// Euler-Maclaurin evaluation of sum_{n>=m} n^(-s), m >= 24. The first
// omitted correction is of order |B18/18!| * (s)_17 * m^(-s-17), far
// below 1e-14 for the s range admitted here.
double euler_maclaurin_tail(double s, long m) {
    const double md = static_cast<double>(m);
    const double inv2 = 1.0 / (md * md);
    double acc = std::pow(md, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(md, -s);
    double poch = s;                      // (s)(s+1)...(s+2j-2)
    double mpow = std::pow(md, -s - 1.0);  // m^(-s-2j+1)
    double factor = s;                    // next factor to fold in
    for (double corr : kBernoulliOverFactorial) {
        acc += corr * poch * mpow;
        poch *= (factor + 1.0) * (factor + 2.0);
        factor += 2.0;
        mpow *= inv2;
    }
    return acc;
}

}  // namespace

double zeta_tail(double s, long k0) {
    if (!(s > 1.0 + kSeriesGuard)) {
        throw std::domain_error("zeta: series requires s > 1 (got s = " +
                                std::to_string(s) + ")");
    }
    if (k0 < 1) {
        throw std::domain_error("zeta_tail: k0 must be >= 1");
    }
    constexpr long kSwitch = 24;
    double head = 0.0;
    long m = k0;
    for (; m < kSwitch; ++m) head += std::pow(static_cast<double>(m), -s);
    return head + euler_maclaurin_tail(s, m);
}

double zeta(double s) { return zeta_tail(s, 1); }

double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("gamma_fn: x must be > 0 (got " +
                                std::to_string(x) + ")");
    }
    return std::tgamma(x);
}

double coefficient_K(const HurstIndex& H) {
    const double h = H.value();
    if (h >= 0.5 - HurstIndex::kBoundaryGuard) return 1.0;
    return -(h - 0.5) * zeta(1.5 - h);
}

double scaling_constant_c(const HurstIndex& H) {
    const double h = H.value();
    constexpr double kPi = 3.14159265358979323846;
    return std::sqrt(gamma_fn(2.0 * h + 1.0) * std::sin(kPi * h)) /
           gamma_fn(h + 0.5);
}

FbmConstants make_constants(const HurstIndex& H) {
    return FbmConstants{H, coefficient_K(H), scaling_constant_c(H)};
}

}  // namespace fbmwalk
