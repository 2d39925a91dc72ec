#pragma once

#include "clearnet/network.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace clearnet {

/// One window of a piecewise-constant deterministic cash-flow rate.
struct CashRateWindow {
    Vec rate;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Drift/diffusion specification for the operating cash flows dc.
struct CashFlowSpec {
    enum class Kind { constant_rate, brownian_bridge, affine, piecewise_rates };

    Kind kind = Kind::constant_rate;
    Vec mu;        // constant_rate / affine drift
    Mat sigma;     // affine diffusion matrix
    Vec target;    // brownian_bridge pin at t = 1
    double vol = 0.0;  // brownian_bridge volatility (sigma = vol * I)
    std::vector<CashRateWindow> windows;  // piecewise_rates, additive overlaps

    static CashFlowSpec constant(Vec rate);
    // The bridge drift is singular at t = 1; only meaningful on horizon T = 1.
    static CashFlowSpec bridge(Vec target, double vol);
    static CashFlowSpec affine(Vec mu, Mat sigma);
    static CashFlowSpec piecewise(std::vector<CashRateWindow> windows);

    void validate(int size, double horizon) const;
    const char* kind_name() const;

    bool deterministic() const;
    /// Integral of the rate over [a, b) for deterministic variants; throws
    /// for the bridge and affine kinds.
    Vec deterministic_integral(double a, double b) const;
};

/// Drift and diffusion at (t, c). The bridge evaluates (target - c)/(1 - t)
/// and throws SimulationError at t >= 1 - 1e-9, where the drift blows up;
/// integrators must interpolate to the horizon before that.
std::pair<Vec, Mat> eval_mu_sigma(const CashFlowSpec& spec, double t, const Vec& c);

/// One window of constant liability accrual rates on [t_start, t_end).
struct RateWindow {
    Mat rate;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Piecewise-constant liability accrual schedule dL(t) = rate(t) dt.
///
/// Overlapping windows add. Window bounds are normalized to half-open
/// [start, end) intervals; the boundary convention is measure-zero and
/// cannot affect any integral.
class LiabilitySchedule {
public:
    LiabilitySchedule() = default;  // empty; size() == 0 until assigned

    static LiabilitySchedule constant(const Mat& total, double horizon);
    static LiabilitySchedule windows(std::vector<RateWindow> wins);

    /// Sum of the rates of all windows active at t.
    Mat rate_at(double t) const;

    /// Sorted unique window endpoints.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// First breakpoint strictly after t, or +infinity.
    double next_breakpoint_after(double t) const;

    /// Integral of the rate over [a, b): exact sum of window overlaps.
    Mat aggregate(double a, double b) const;

    /// Lower bound on the society share rate_{i0} / sum_k rate_{ik} over all
    /// segments where bank i accrues anything. Zero means uniqueness and
    /// boundedness guarantees do not apply.
    double society_floor() const;

    int size() const { return size_; }
    const std::vector<RateWindow>& window_list() const { return windows_; }

private:
    explicit LiabilitySchedule(std::vector<RateWindow> wins);

    std::vector<RateWindow> windows_;
    std::vector<double> breakpoints_;
    int size_ = 0;
};

/// Reproducible per-path normal source: mt19937_64 seeded by a splitmix64
/// mix of (seed, path_index), with Box-Muller on top so the draw sequence
/// does not depend on the standard library's distribution implementation.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t path_index);

    double normal();
    Vec normal_vector(int size);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path_index() const { return path_; }

    static constexpr const char* algorithm = "splitmix64-seeded mt19937_64, Box-Muller";

private:
    double uniform01();  // in (0, 1]

    std::uint64_t seed_;
    std::uint64_t path_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// One (n+1)-vector of independent standard normals from the stream.
Vec draw_standard_normal(RngStream& stream, int size);

}  // namespace clearnet
