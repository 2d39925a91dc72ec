#pragma once

#include "clearnet/network.hpp"
#include "clearnet/processes.hpp"
#include "clearnet/scenario.hpp"

#include <limits>
#include <utility>

namespace clearnet {

/// State of the continuous-time clearing system at one accepted step.
struct ContinuousState {
    double t = 0.0;
    Vec cash;                 // cumulative c(t)
    Vec wealth;               // V(t)
    Mat exposures;            // A(t)
    DistressMatrix distress;  // settled distress flags at t
    Mat fallback_rows;        // last normalized accrual row per bank, used
                              // when a solvent bank has no active schedule
};

/// Which constraint produced the accepted step size.
enum class StepConstraint { none, zero_crossing, sign_preservation, schedule_breakpoint };

struct StepBounds {
    double dt0 = 0.0;  // base step the caps were applied to
    double dt = 0.0;   // accepted step, in (0, dt0]
    StepConstraint binding = StepConstraint::none;
};

const char* to_string(StepConstraint c);

/// (I - A^T Lambda)^{-1} by direct factorization. Invertible for any
/// row-stochastic A whose distressed rows leak to society, where it equals
/// the Neumann series sum_k (A^T Lambda)^k.
Mat leontief_inverse(const Mat& exposures, const DistressMatrix& distress);

/// Drift and diffusion of the wealths under the current distress set:
///   mubar  = (I - A^T Lambda)^{-1} (mu - Ldot^T 1 + A^T Ldot 1)
///   sigbar = (I - A^T Lambda)^{-1} sigma Z
/// Z is drawn once per outer step and reused across the distress
/// refinement loop.
std::pair<Vec, Vec> transformed_coefficients(const ContinuousState& state, const Vec& mu,
                                             const Mat& sigma, const Mat& rate, const Vec& z);

/// Shrinks the step so no bank crosses zero wealth inside it and the drift
/// direction survives the shrinking. Per bank i:
///   (i)  solvent, mubar < 0:        step to the root of V + mubar dt + sigbar sqrt(dt)
///   (ii) distressed, mubar != 0:    same with the upward root
///   (iii) mubar == 0, V sigbar < 0: dt <= V^2 / sigbar^2
///   (iv) mubar sigbar < 0:          dt <= sigbar^2 / mubar^2
/// The result is never below `floor`; a bank whose cap demands less is
/// treated as having crossed, which the next distress update picks up at
/// equality. Throws SimulationError if the inputs force dt <= 0.
StepBounds event_limited_dt(const Vec& wealth, const Vec& mubar, const Vec& sigbar, double dt0,
                            double breakpoint_gap = std::numeric_limits<double>::infinity(),
                            double floor = -1.0);

/// Advances cash, wealths, and exposures by one accepted step.
///
/// Exposure rows of banks with negative wealth follow the accrual ODE
/// da = (Ldot - a * rowsum(Ldot)) / V^- dt, integrated in closed form with
/// coefficients frozen over the step (a convex combination of the current
/// row and the normalized accrual row, stable for any step size). Solvent
/// rows snap to the normalized accrual row, falling back to the last valid
/// one when the bank has no active schedule. Wealth entries within 1e-12 of
/// zero land exactly on zero so the boundary tie-breaking applies.
ContinuousState advance(const ContinuousState& state, double dt, const Vec& z, const Vec& mu,
                        const Mat& sigma, const Mat& rate);

/// A bank crossed the zero-wealth boundary: direction -1 entering distress,
/// +1 leaving it.
struct WealthEvent {
    double t = 0.0;
    int node = 0;
    int direction = 0;
};

struct ExposureStats {
    double min_row_sum = std::numeric_limits<double>::infinity();
    double max_row_sum = -std::numeric_limits<double>::infinity();
    double min_entry = std::numeric_limits<double>::infinity();
    // min a_{i0} over steps where bank i's schedule is active
    double min_society_share_active = std::numeric_limits<double>::infinity();
};

struct PathOptions {
    bool record_trajectory = false;
};

struct PathResult {
    ContinuousState terminal;
    std::vector<ContinuousState> trajectory;  // initial + accepted steps, if recorded
    std::vector<WealthEvent> events;
    std::vector<std::string> warnings;
    ExposureStats exposure_stats;
    long steps = 0;
    int refinement_cap_hits = 0;
};

/// Runs one sample path of the event-located Euler scheme: per outer step,
/// draw Z once, refine the distress set to a fixed point (re-shrinking the
/// step as needed), advance, and log distress transitions. A step that
/// overshoots the horizon is linearly interpolated back to T.
PathResult simulate_path(const ScenarioConfig& config, std::uint64_t path_index,
                         const PathOptions& opts = {});

/// Initial exposures: normalized accrual rows at t = 0 where active, the
/// uniform convention otherwise; society row fixed.
Mat initial_exposures(const LiabilitySchedule& sched, int size);

}  // namespace clearnet
