#pragma once

#include <stdexcept>
#include <string>

namespace fbmwalk {

/// Increment-correlation regime of a Hurst index.
enum class Regime {
    SubDiffusive,    // H < 1/2, negatively correlated increments
    Classical,       // H = 1/2, plain random walk
    SuperDiffusive,  // H > 1/2, positively correlated increments
};

/// Validated Hurst index, 0 < H < 1.
///
/// Values within kBoundaryGuard of 1/2 are routed to the classical
/// regime: the zeta arguments used by the sub-diffusive branch diverge
/// as H -> 1/2 and results there are meaningless.
class HurstIndex {
  public:
    static constexpr double kBoundaryGuard = 1e-6;

    explicit HurstIndex(double h) : h_(h) {
        if (!(h > 0.0 && h < 1.0)) {
            throw std::domain_error("HurstIndex: H must lie in (0,1), got " +
                                    std::to_string(h));
        }
    }

    double value() const { return h_; }

    Regime regime() const {
        if (h_ < 0.5 - kBoundaryGuard) return Regime::SubDiffusive;
        if (h_ > 0.5 + kBoundaryGuard) return Regime::SuperDiffusive;
        return Regime::Classical;
    }

    bool sub_diffusive() const { return regime() == Regime::SubDiffusive; }
    bool super_diffusive() const { return regime() == Regime::SuperDiffusive; }

  private:
    double h_;
};

}  // namespace fbmwalk
