#include "clearnet/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace clearnet {

CashFlowSpec CashFlowSpec::constant(Vec rate) {
    CashFlowSpec s;
    s.kind = Kind::constant_rate;
    s.mu = std::move(rate);
    return s;
}

CashFlowSpec CashFlowSpec::bridge(Vec target, double vol) {
    CashFlowSpec s;
    s.kind = Kind::brownian_bridge;
    s.target = std::move(target);
    s.vol = vol;
    return s;
}

CashFlowSpec CashFlowSpec::affine(Vec mu, Mat sigma) {
    CashFlowSpec s;
    s.kind = Kind::affine;
    s.mu = std::move(mu);
    s.sigma = std::move(sigma);
    return s;
}

CashFlowSpec CashFlowSpec::piecewise(std::vector<CashRateWindow> windows) {
    CashFlowSpec s;
    s.kind = Kind::piecewise_rates;
    s.windows = std::move(windows);
    return s;
}

const char* CashFlowSpec::kind_name() const {
    switch (kind) {
        case Kind::constant_rate: return "constant";
        case Kind::brownian_bridge: return "bridge";
        case Kind::affine: return "affine";
        case Kind::piecewise_rates: return "piecewise";
    }
    return "unknown";
}

bool CashFlowSpec::deterministic() const {
    return kind == Kind::constant_rate || kind == Kind::piecewise_rates;
}

Vec CashFlowSpec::deterministic_integral(double a, double b) const {
    switch (kind) {
        case Kind::constant_rate:
            return mu * (b - a);
        case Kind::piecewise_rates: {
            Vec total = Vec::Zero(windows.front().rate.size());
            for (const auto& w : windows) {
                const double lo = std::max(a, w.t_start);
                const double hi = std::min(b, w.t_end);
                if (hi > lo) total += w.rate * (hi - lo);
            }
            return total;
        }
        default:
            throw ValidationError("cashflow: integral only defined for deterministic variants");
    }
}

void CashFlowSpec::validate(int size, double horizon) const {
    switch (kind) {
        case Kind::constant_rate:
            if (mu.size() != size) throw ValidationError("cashflow/mu: wrong length");
            break;
        case Kind::brownian_bridge:
            if (target.size() != size) throw ValidationError("cashflow/target: wrong length");
            if (vol < 0.0) throw ValidationError("cashflow/vol: must be >= 0");
            if (std::abs(horizon - 1.0) > 1e-12) {
                throw ValidationError("cashflow: brownian bridge requires horizon T = 1");
            }
            break;
        case Kind::affine:
            if (mu.size() != size) throw ValidationError("cashflow/mu: wrong length");
            if (sigma.rows() != size || sigma.cols() != size) {
                throw ValidationError("cashflow/sigma: expected " + std::to_string(size) + "x" +
                                      std::to_string(size));
            }
            break;
        case Kind::piecewise_rates:
            if (windows.empty()) throw ValidationError("cashflow/windows: empty");
            for (std::size_t w = 0; w < windows.size(); ++w) {
                if (windows[w].rate.size() != size) {
                    throw ValidationError("cashflow/windows/" + std::to_string(w) +
                                          "/rate: wrong length");
                }
                if (!(windows[w].t_end > windows[w].t_start)) {
                    throw ValidationError("cashflow/windows/" + std::to_string(w) +
                                          ": window must have positive length");
                }
            }
            break;
    }
}

std::pair<Vec, Mat> eval_mu_sigma(const CashFlowSpec& spec, double t, const Vec& c) {
    const int size = static_cast<int>(c.size());
    switch (spec.kind) {
        case CashFlowSpec::Kind::constant_rate:
            return {spec.mu, Mat::Zero(size, size)};
        case CashFlowSpec::Kind::brownian_bridge: {
            if (t >= 1.0 - 1e-9) {
                throw SimulationError("bridge drift evaluated at t = " + std::to_string(t) +
                                      ", inside the horizon guard");
            }
            Vec mu = (spec.target - c) / (1.0 - t);
            Mat sigma = spec.vol * Mat::Identity(size, size);
            return {std::move(mu), std::move(sigma)};
        }
        case CashFlowSpec::Kind::affine:
            return {spec.mu, spec.sigma};
        case CashFlowSpec::Kind::piecewise_rates: {
            Vec mu = Vec::Zero(size);
            for (const auto& w : spec.windows) {
                if (w.t_start <= t && t < w.t_end) mu += w.rate;
            }
            return {std::move(mu), Mat::Zero(size, size)};
        }
    }
    throw SimulationError("unreachable cash flow kind");
}

LiabilitySchedule::LiabilitySchedule(std::vector<RateWindow> wins) : windows_(std::move(wins)) {
    if (windows_.empty()) throw ValidationError("liabilities: no windows given");
    size_ = static_cast<int>(windows_.front().rate.rows());
    for (std::size_t w = 0; w < windows_.size(); ++w) {
        const auto& win = windows_[w];
        const std::string ctx = "liabilities/windows/" + std::to_string(w);
        if (win.rate.rows() != size_ || win.rate.cols() != size_) {
            throw ValidationError(ctx + "/rate: inconsistent matrix size");
        }
        validate_liabilities(win.rate, ctx + "/rate");
        if (!(win.t_end > win.t_start)) {
            throw ValidationError(ctx + ": window must have positive length");
        }
        if (win.t_start < 0.0) throw ValidationError(ctx + ": window starts before 0");
        breakpoints_.push_back(win.t_start);
        breakpoints_.push_back(win.t_end);
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end(),
                                   [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                       breakpoints_.end());
}

LiabilitySchedule LiabilitySchedule::constant(const Mat& total, double horizon) {
    if (!(horizon > 0.0)) throw ValidationError("liabilities: horizon must be positive");
    return LiabilitySchedule({RateWindow{total / horizon, 0.0, horizon}});
}

LiabilitySchedule LiabilitySchedule::windows(std::vector<RateWindow> wins) {
    return LiabilitySchedule(std::move(wins));
}

Mat LiabilitySchedule::rate_at(double t) const {
    Mat r = Mat::Zero(size_, size_);
    for (const auto& w : windows_) {
        if (w.t_start <= t && t < w.t_end) r += w.rate;
    }
    return r;
}

double LiabilitySchedule::next_breakpoint_after(double t) const {
    for (double b : breakpoints_) {
        if (b > t + 1e-14) return b;
    }
    return std::numeric_limits<double>::infinity();
}

Mat LiabilitySchedule::aggregate(double a, double b) const {
    Mat total = Mat::Zero(size_, size_);
    for (const auto& w : windows_) {
        const double lo = std::max(a, w.t_start);
        const double hi = std::min(b, w.t_end);
        if (hi > lo) total += w.rate * (hi - lo);
    }
    return total;
}

double LiabilitySchedule::society_floor() const {
    double floor = std::numeric_limits<double>::infinity();
    // The rate matrix is constant between consecutive breakpoints.
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
        const Mat r = rate_at(0.5 * (breakpoints_[k] + breakpoints_[k + 1]));
        for (int i = 1; i < size_; ++i) {
            const double total = r.row(i).sum();
            if (total > 0.0) floor = std::min(floor, r(i, 0) / total);
        }
    }
    return std::isfinite(floor) ? floor : 0.0;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t path_index)
    : seed_(seed), path_(path_index) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state ^= path_index * 0xD1342543DE82EF95ULL;
    mixed ^= splitmix64(state);
    engine_.seed(mixed);
}

double RngStream::uniform01() {
    // 53-bit mantissa shifted into (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Vec RngStream::normal_vector(int size) {
    Vec z(size);
    for (int i = 0; i < size; ++i) z(i) = normal();
    return z;
}

Vec draw_standard_normal(RngStream& stream, int size) { return stream.normal_vector(size); }

}  // namespace clearnet
