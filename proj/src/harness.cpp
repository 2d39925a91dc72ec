#include "clearnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace clearnet {

namespace {

int worker_count(int n_paths) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CLEARNET_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(std::max(1, n_paths))));
}

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

void merge_stats(ExposureStats& into, const ExposureStats& from) {
    into.min_row_sum = std::min(into.min_row_sum, from.min_row_sum);
    into.max_row_sum = std::max(into.max_row_sum, from.max_row_sum);
    into.min_entry = std::min(into.min_entry, from.min_entry);
    into.min_society_share_active =
        std::min(into.min_society_share_active, from.min_society_share_active);
}

/// Exposure invariants accumulated across scenario runs. The society-share
/// bound is relative to each run's own schedule floor, so runs with a
/// vanishing floor contribute a trivial margin rather than a false alarm.
struct CollectedInvariants {
    ExposureStats stats;
    double min_society_margin = std::numeric_limits<double>::infinity();

    void add(const ExposureStats& run, double schedule_floor) {
        merge_stats(stats, run);
        if (std::isfinite(run.min_society_share_active)) {
            min_society_margin =
                std::min(min_society_margin, run.min_society_share_active - schedule_floor);
        }
    }
};

}  // namespace

McSummary run_monte_carlo(const ScenarioConfig& config, bool keep_event_logs) {
    config.validate();
    const int size = config.network.size();
    const int n_paths = config.n_paths;

    std::vector<PathResult> results(n_paths);
    std::vector<std::string> failures(n_paths);
    std::atomic<int> next{0};

    auto worker = [&]() {
        for (;;) {
            const int p = next.fetch_add(1);
            if (p >= n_paths) return;
            try {
                results[p] = simulate_path(config, static_cast<std::uint64_t>(p));
            } catch (const std::exception& e) {
                failures[p] = e.what();
            }
        }
    };

    const int threads = worker_count(n_paths);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (int p = 0; p < n_paths; ++p) {
        if (!failures[p].empty()) {
            throw SimulationError("path " + std::to_string(p) + " failed: " + failures[p]);
        }
    }

    McSummary summary;
    summary.rng_algorithm = RngStream::algorithm;
    summary.terminal_wealth.resize(n_paths, size);
    summary.default_frequency = Vec::Zero(size);
    std::vector<double> payments;
    payments.reserve(n_paths);
    std::set<std::string> warnings;

    for (int p = 0; p < n_paths; ++p) {
        const PathResult& r = results[p];
        summary.terminal_wealth.row(p) = r.terminal.wealth.transpose();
        for (int i = 0; i < size; ++i) {
            if (r.terminal.wealth(i) < -kDefaultTolerance) summary.default_frequency(i) += 1.0;
        }
        payments.push_back(r.terminal.wealth(0) - config.initial_wealth(0));
        if (keep_event_logs) summary.path_events.push_back(r.events);
        merge_stats(summary.exposure_stats, r.exposure_stats);
        summary.total_steps += r.steps;
        summary.refinement_cap_hits += r.refinement_cap_hits;
        warnings.insert(r.warnings.begin(), r.warnings.end());
    }
    summary.default_frequency /= static_cast<double>(n_paths);
    summary.warnings.assign(warnings.begin(), warnings.end());

    std::vector<double> sorted = payments;
    std::sort(sorted.begin(), sorted.end());
    summary.society_payment_min = sorted.front();
    summary.society_payment_max = sorted.back();
    summary.society_payment_mean = 0.0;
    for (double v : payments) summary.society_payment_mean += v;
    summary.society_payment_mean /= static_cast<double>(n_paths);
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        summary.society_payment_quantiles[q] = quantile(sorted, q);
    }
    const double base = config.initial_wealth(0);
    summary.society_wealth_mean = summary.society_payment_mean + base;
    summary.society_wealth_min = summary.society_payment_min + base;
    summary.society_wealth_max = summary.society_payment_max + base;
    for (const auto& [q, v] : summary.society_payment_quantiles) {
        summary.society_wealth_quantiles[q] = v + base;
    }
    return summary;
}

DiscreteTrajectory run_discrete_dt(const ScenarioConfig& config, double dt) {
    config.validate();
    if (!config.cashflow.deterministic()) {
        throw ValidationError("run_discrete_dt needs a deterministic cash flow spec");
    }
    if (!(dt > 0.0)) throw ValidationError("run_discrete_dt: dt must be positive");

    DiscreteSchedule sched;
    sched.initial_wealth = config.initial_wealth;
    const int steps = static_cast<int>(std::ceil(config.horizon / dt - 1e-12));
    for (int k = 0; k < steps; ++k) {
        const double a = k * dt;
        const double b = std::min((k + 1) * dt, config.horizon);
        sched.cash.push_back(config.cashflow.deterministic_integral(a, b));
        sched.liabilities.push_back(config.liabilities.aggregate(a, b));
    }
    return run_discrete(sched);
}

namespace scenarios {

Mat four_bank_liabilities() {
    Mat L(5, 5);
    L << 0, 0, 0, 0, 0,
         3, 0, 7, 1, 1,
         3, 3, 0, 3, 3,
         3, 1, 1, 0, 1,
         3, 1, 2, 1, 0;
    return L;
}

Vec four_bank_assets() {
    Vec x(5);
    x << 100, 1, 3, 2, 5;
    return x;
}

FinancialNetwork four_bank_network() {
    FinancialNetwork net;
    net.n = 4;
    net.liabilities = four_bank_liabilities();
    net.names = {"society", "bank1", "bank2", "bank3", "bank4"};
    return net;
}

namespace {

Vec interbank_net_flow(const Mat& L) {
    return L.colwise().sum().transpose() - L.rowwise().sum();
}

/// Selects column j of L as a rate window: the obligations payable to node
/// j, accrued uniformly over [start, end).
RateWindow column_window(const Mat& L, int j, double start, double end) {
    Mat rate = Mat::Zero(L.rows(), L.cols());
    rate.col(j) = L.col(j) / (end - start);
    return RateWindow{std::move(rate), start, end};
}

CashFlowSpec matched_cash(const LiabilitySchedule& sched) {
    std::vector<CashRateWindow> wins;
    for (const auto& w : sched.window_list()) {
        wins.push_back(CashRateWindow{interbank_net_flow(w.rate), w.t_start, w.t_end});
    }
    return CashFlowSpec::piecewise(std::move(wins));
}

ScenarioConfig base_config(double dt0) {
    ScenarioConfig cfg;
    cfg.network = four_bank_network();
    cfg.initial_wealth = four_bank_assets();
    cfg.horizon = 1.0;
    cfg.dt0 = dt0;
    return cfg;
}

}  // namespace

ScenarioConfig constant_rate(double dt0) {
    ScenarioConfig cfg = base_config(dt0);
    cfg.liabilities = LiabilitySchedule::constant(four_bank_liabilities(), cfg.horizon);
    cfg.cashflow = CashFlowSpec::constant(interbank_net_flow(four_bank_liabilities()));
    return cfg;
}

ScenarioConfig bridge(double vol, double dt0, int n_paths, std::uint64_t seed) {
    ScenarioConfig cfg = base_config(dt0);
    cfg.liabilities = LiabilitySchedule::constant(four_bank_liabilities(), cfg.horizon);
    cfg.cashflow = CashFlowSpec::bridge(interbank_net_flow(four_bank_liabilities()), vol);
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    return cfg;
}

ScenarioConfig banks_first_windows(double dt0) {
    const Mat L = four_bank_liabilities();
    std::vector<RateWindow> wins;
    wins.push_back(column_window(L, 0, 0.8, 1.0));
    for (int j = 1; j <= 4; ++j) {
        wins.push_back(column_window(L, j, 0.2 * (j - 1), 0.2 * j));
    }
    ScenarioConfig cfg = base_config(dt0);
    cfg.liabilities = LiabilitySchedule::windows(std::move(wins));
    cfg.cashflow = matched_cash(cfg.liabilities);
    return cfg;
}

ScenarioConfig society_first_windows(double dt0) {
    const Mat L = four_bank_liabilities();
    std::vector<RateWindow> wins;
    wins.push_back(column_window(L, 0, 0.0, 0.2));
    for (int j = 1; j <= 4; ++j) {
        wins.push_back(column_window(L, j, 0.2 * j, 0.2 * (j + 1)));
    }
    ScenarioConfig cfg = base_config(dt0);
    cfg.liabilities = LiabilitySchedule::windows(std::move(wins));
    cfg.cashflow = matched_cash(cfg.liabilities);
    return cfg;
}

ScenarioConfig staggered_window_bridge(double vol, double dt0, int n_paths, std::uint64_t seed) {
    const Mat L = four_bank_liabilities();
    std::vector<RateWindow> wins;
    wins.push_back(column_window(L, 0, 0.0, 1.0));
    wins.push_back(column_window(L, 1, 0.145, 0.382));
    wins.push_back(column_window(L, 2, 0.331, 0.509));
    wins.push_back(column_window(L, 3, 0.301, 0.740));
    wins.push_back(column_window(L, 4, 0.673, 0.778));
    ScenarioConfig cfg = base_config(dt0);
    cfg.liabilities = LiabilitySchedule::windows(std::move(wins));
    cfg.cashflow = CashFlowSpec::bridge(interbank_net_flow(L), vol);
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    return cfg;
}

}  // namespace scenarios

bool SuiteReport::all_pass() const {
    for (const auto& e : entries) {
        if (!e.pass) return false;
    }
    return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::string fmt_vec(const Vec& v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
    os << ")";
    return os.str();
}

StaticProblem four_bank_problem() {
    return StaticProblem{scenarios::four_bank_assets(), scenarios::four_bank_liabilities()};
}

Vec reference_static_wealth() { return clear_static(four_bank_problem()).wealth; }

/// Random regular static problem: every bank owes society.
StaticProblem random_static_problem(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> nd(2, 6);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::uniform_real_distribution<double> soc(0.5, 1.5);
    std::uniform_real_distribution<double> xs(0.0, 3.0);
    std::bernoulli_distribution keep(0.7);
    const int n = nd(gen);
    const int size = n + 1;
    Mat L = Mat::Zero(size, size);
    Vec x(size);
    for (int i = 0; i < size; ++i) x(i) = xs(gen);
    for (int i = 1; i < size; ++i) {
        L(i, 0) = soc(gen);
        for (int j = 1; j < size; ++j) {
            if (j != i && keep(gen)) L(i, j) = u(gen);
        }
    }
    return StaticProblem{std::move(x), std::move(L)};
}

/// Random exposure matrix with a guaranteed society share in each bank row.
Mat random_exposures(std::mt19937_64& gen, int size, double society_low, double society_high) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> soc(society_low, society_high);
    Mat a = Mat::Zero(size, size);
    a.row(0) = uniform_row(size - 1, 0).transpose();
    for (int i = 1; i < size; ++i) {
        const double share = soc(gen);
        double total = 0.0;
        Vec rest = Vec::Zero(size);
        for (int j = 1; j < size; ++j) {
            if (j == i) continue;
            rest(j) = u(gen);
            total += rest(j);
        }
        a(i, 0) = share;
        if (total > 0.0) {
            for (int j = 1; j < size; ++j) a(i, j) = rest(j) / total * (1.0 - share);
        } else {
            a(i, 0) = 1.0;
        }
    }
    return a;
}

Mat neumann_sum(const Mat& exposures, const DistressMatrix& distress, int terms) {
    const int size = static_cast<int>(exposures.rows());
    Mat m = Mat::Zero(size, size);
    const Mat a_t = exposures.transpose();
    for (int j = 0; j < size; ++j) {
        if (distress.flags(j)) m.col(j) = a_t.col(j);
    }
    Mat sum = Mat::Identity(size, size);
    Mat power = Mat::Identity(size, size);
    for (int k = 1; k <= terms; ++k) {
        power = power * m;
        sum += power;
    }
    return sum;
}

SuiteEntry criterion_static_regression() {
    SuiteEntry entry{"1 static regression (four-bank network)", false, "", 0.0};
    const StaticProblem prob = four_bank_problem();
    clear_static(prob);  // warm up allocators before timing
    const auto start = Clock::now();
    const StaticSolution sol = clear_static(prob);
    entry.seconds = seconds_since(start);

    Vec ref(5);
    ref << 109.38, -6.81, -3.03, -0.32, 1.62;
    const double gap = (sol.wealth - ref).cwiseAbs().maxCoeff();
    const std::vector<std::set<int>> want = {{1}, {1, 2}, {1, 2, 3}};
    const bool orders_ok = sol.orders == want;
    entry.pass = gap <= 0.01 && orders_ok && entry.seconds < 0.010;
    entry.measured = "V = " + fmt_vec(sol.wealth) + ", max gap " + fmt(gap, 3) + ", orders " +
                     (orders_ok ? "{1},{1,2},{1,2,3}" : "unexpected") + ", " +
                     fmt(entry.seconds * 1e3, 3) + " ms";
    return entry;
}

SuiteEntry criterion_conservation(bool quick) {
    SuiteEntry entry{"2 conservation of positive wealth", false, "", 0.0};
    const auto start = Clock::now();
    const StaticSolution sol = clear_static(four_bank_problem());
    const double static_gap =
        std::abs(pos_part(sol.wealth).sum() - scenarios::four_bank_assets().sum());

    std::mt19937_64 gen(92821);
    std::uniform_int_distribution<int> nd(2, 6), Td(1, 20);
    std::uniform_real_distribution<double> u(0.0, 2.0), soc(0.2, 1.2), noise(0.0, 1.0);
    double worst_step = 0.0;
    const int runs = quick ? 20 : 100;
    for (int run = 0; run < runs; ++run) {
        const int n = nd(gen), T = Td(gen), size = n + 1;
        DiscreteSchedule sched;
        sched.initial_wealth = Vec::Zero(size);
        for (int i = 0; i < size; ++i) sched.initial_wealth(i) = u(gen);
        for (int t = 0; t <= T; ++t) {
            Mat L = Mat::Zero(size, size);
            for (int i = 1; i < size; ++i) {
                L(i, 0) = soc(gen);
                for (int j = 1; j < size; ++j) {
                    if (j != i) L(i, j) = u(gen);
                }
            }
            Vec c = L.colwise().sum().transpose() - L.rowwise().sum();
            for (int i = 0; i < size; ++i) c(i) += noise(gen);
            sched.cash.push_back(std::move(c));
            sched.liabilities.push_back(std::move(L));
        }
        const DiscreteTrajectory traj = run_discrete(sched);
        double prev_positive = pos_part(sched.initial_wealth).sum();
        for (std::size_t t = 0; t < traj.states.size(); ++t) {
            const double now = pos_part(traj.states[t].wealth).sum();
            worst_step = std::max(worst_step,
                                  std::abs(now - prev_positive - sched.cash[t].sum()));
            prev_positive = now;
        }
    }
    entry.seconds = seconds_since(start);
    entry.pass = static_gap <= 1e-8 && worst_step <= 1e-8;
    entry.measured = "static |sum V+ - sum x| = " + fmt(static_gap, 3) + ", worst per-step gap " +
                     fmt(worst_step, 3) + " over " + std::to_string(runs) + " schedules";
    return entry;
}

SuiteEntry criterion_oracle_equivalence() {
    SuiteEntry entry{"3 fictitious default vs Picard oracle", false, "", 0.0};
    const auto start = Clock::now();
    std::mt19937_64 gen(40917);
    double worst = 0.0;
    for (int run = 0; run < 50; ++run) {
        const StaticProblem prob = random_static_problem(gen);
        const StaticSolution sol = clear_static(prob);
        const auto [greatest, least] = picard_oracle(prob);
        worst = std::max(worst, (sol.wealth - greatest).cwiseAbs().maxCoeff());
        worst = std::max(worst, (greatest - least).cwiseAbs().maxCoeff());
    }
    entry.seconds = seconds_since(start);
    entry.pass = worst <= 1e-8;
    entry.measured = "worst deviation " + fmt(worst, 3) + " over 50 regular networks";
    return entry;
}

SuiteEntry criterion_continuous_recovers_static(CollectedInvariants* collected) {
    SuiteEntry entry{"4 continuous run recovers the static solution", false, "", 0.0};
    const auto start = Clock::now();
    const ScenarioConfig cfg = scenarios::constant_rate(1e-3);
    const PathResult path = simulate_path(cfg, 0);
    entry.seconds = seconds_since(start);
    if (collected) collected->add(path.exposure_stats, cfg.liabilities.society_floor());

    const Vec reference = reference_static_wealth();
    const double gap = (path.terminal.wealth - reference).cwiseAbs().maxCoeff();

    double enter1 = -1.0, enter2 = -1.0, enter3 = -1.0;
    bool any_exit = false;
    for (const auto& ev : path.events) {
        if (ev.direction == 1) any_exit = true;
        if (ev.direction == -1) {
            if (ev.node == 1 && enter1 < 0) enter1 = ev.t;
            if (ev.node == 2 && enter2 < 0) enter2 = ev.t;
            if (ev.node == 3 && enter3 < 0) enter3 = ev.t;
        }
    }
    const bool order_ok = enter1 >= 0 && enter2 > enter1 && enter3 > enter2;
    entry.pass = gap <= 0.05 && order_ok && !any_exit && entry.seconds < 5.0;
    entry.measured = "max gap " + fmt(gap, 3) + ", distress times " + fmt(enter1, 4) + " < " +
                     fmt(enter2, 4) + " < " + fmt(enter3, 4) +
                     (any_exit ? ", unexpected recovery" : ", no recoveries") + ", " +
                     fmt(entry.seconds, 3) + " s";
    return entry;
}

SuiteEntry criterion_path_independence(CollectedInvariants* collected) {
    SuiteEntry entry{"5 bridge paths are terminal-path-independent", false, "", 0.0};
    const auto start = Clock::now();
    const Vec reference = reference_static_wealth();
    const ScenarioConfig cfg = scenarios::bridge(1.0, 1e-3, 5);
    double worst = 0.0;
    for (int p = 0; p < 5; ++p) {
        const PathResult path = simulate_path(cfg, p);
        if (collected) collected->add(path.exposure_stats, cfg.liabilities.society_floor());
        worst = std::max(worst, (path.terminal.wealth - reference).cwiseAbs().maxCoeff());
    }
    entry.seconds = seconds_since(start);
    entry.pass = worst <= 0.1;
    entry.measured = "worst terminal gap " + fmt(worst, 4) + " over 5 paths (vol 1)";
    return entry;
}

SuiteEntry criterion_dt_convergence() {
    SuiteEntry entry{"6 step-size convergence of the discrete process", false, "", 0.0};
    const auto start = Clock::now();
    constexpr double kFloor = 1e-10;  // below this the sweep has converged

    // Constant relative liabilities make the terminal clearing identical at
    // every step size (the path-independence property), so the sweep is
    // expected to sit at the convergence floor for all three steps.
    const Vec reference = reference_static_wealth();
    const ScenarioConfig cfg = scenarios::constant_rate();
    std::vector<double> errs;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        const DiscreteTrajectory traj = run_discrete_dt(cfg, dt);
        errs.push_back((traj.states.back().wealth - reference).cwiseAbs().maxCoeff());
    }
    bool monotone = true;
    for (std::size_t k = 1; k < errs.size(); ++k) {
        if (!(errs[k] < errs[k - 1] || errs[k] <= kFloor)) monotone = false;
    }

    // Companion sweep with a grid that does not divide the accrual windows,
    // where the discretization error is genuinely nonzero.
    const ScenarioConfig windowed = scenarios::banks_first_windows();
    const Vec limit = run_discrete_dt(windowed, 1.0 / 400).states.back().wealth;
    std::vector<double> werrs;
    for (int steps : {7, 14, 28}) {
        const DiscreteTrajectory traj = run_discrete_dt(windowed, 1.0 / steps);
        werrs.push_back((traj.states.back().wealth - limit).cwiseAbs().maxCoeff());
    }
    bool wmonotone = true;
    for (std::size_t k = 1; k < werrs.size(); ++k) {
        if (!(werrs[k] < werrs[k - 1] || werrs[k] <= kFloor)) wmonotone = false;
    }

    entry.seconds = seconds_since(start);
    entry.pass = monotone && wmonotone;
    entry.measured = "aligned errors {" + fmt(errs[0], 3) + ", " + fmt(errs[1], 3) + ", " +
                     fmt(errs[2], 3) + "} (at convergence floor), unaligned {" + fmt(werrs[0], 3) +
                     ", " + fmt(werrs[1], 3) + ", " + fmt(werrs[2], 3) + "}";
    return entry;
}

SuiteEntry criterion_window_scenarios(CollectedInvariants* collected) {
    SuiteEntry entry{"7 window orderings flip the default set", false, "", 0.0};
    const auto start = Clock::now();

    PathOptions opts;
    opts.record_trajectory = true;

    const ScenarioConfig banks_cfg = scenarios::banks_first_windows();
    const PathResult banks_first = simulate_path(banks_cfg, 0, opts);
    if (collected) collected->add(banks_first.exposure_stats, banks_cfg.liabilities.society_floor());
    const Vec& v1 = banks_first.terminal.wealth;
    // Banks 2 and 3 close the horizon at exactly zero wealth in the limit;
    // the integration residual is O(dt0), so default membership for this
    // scenario is judged at the same +-0.05 band the wealth check uses.
    std::set<int> defaults1;
    for (int i = 1; i < 5; ++i) {
        if (v1(i) < -0.05) defaults1.insert(i);
    }
    const bool s1_ok = defaults1 == std::set<int>{1} && std::abs(v1(2)) <= 0.05 &&
                       std::abs(v1(3)) <= 0.05 && v1(4) > 0.05 && v1(0) > 0.0;

    const ScenarioConfig society_cfg = scenarios::society_first_windows();
    const PathResult society_first = simulate_path(society_cfg, 0, opts);
    if (collected) collected->add(society_first.exposure_stats, society_cfg.liabilities.society_floor());
    const Vec& v2 = society_first.terminal.wealth;
    std::set<int> defaults2;
    for (int i = 1; i < 5; ++i) {
        if (v2(i) < -kDefaultTolerance) defaults2.insert(i);
    }
    bool society_growing = true;
    double society_at_02 = 0.0, society_end = v2(0);
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& st : society_first.trajectory) {
        if (st.t >= 0.2 - 1e-12) {
            if (society_at_02 == 0.0) society_at_02 = st.wealth(0);
            if (st.wealth(0) < prev - 1e-9) society_growing = false;
            prev = st.wealth(0);
        }
    }
    const bool s2_ok = defaults2 == std::set<int>{1, 2, 3, 4} && v2(0) > 0.0 && society_growing &&
                       society_end > society_at_02 + 0.01;

    entry.seconds = seconds_since(start);
    entry.pass = s1_ok && s2_ok;
    entry.measured = "banks-first V = " + fmt_vec(v1) + "; society-first V = " + fmt_vec(v2) +
                     ", societal wealth " + fmt(society_at_02, 4) + " -> " + fmt(society_end, 4) +
                     " after t=0.2";
    return entry;
}

SuiteEntry criterion_monte_carlo(bool quick, CollectedInvariants* collected) {
    SuiteEntry entry{"8 staggered-window Monte Carlo frequencies", false, "", 0.0};
    const auto start = Clock::now();
    ScenarioConfig cfg = scenarios::staggered_window_bridge();
    if (quick) cfg.n_paths = 300;
    const McSummary mc = run_monte_carlo(cfg);
    entry.seconds = seconds_since(start);
    if (collected) collected->add(mc.exposure_stats, cfg.liabilities.society_floor());

    const Vec& freq = mc.default_frequency;
    const bool overlap = mc.society_payment_max >= 8.12 && mc.society_payment_min <= 10.20;
    entry.pass = freq(2) >= 0.96 && freq(2) <= 1.0 && freq(3) >= 0.01 && freq(3) <= 0.08 &&
                 freq(4) <= 0.005 && overlap && entry.seconds < 120.0;
    entry.measured = "freq = " + fmt_vec(freq, 4) + ", society payments [" +
                     fmt(mc.society_payment_min, 4) + ", " + fmt(mc.society_payment_max, 4) +
                     "], " + std::to_string(cfg.n_paths) + " paths, " + fmt(entry.seconds, 3) +
                     " s";
    return entry;
}

SuiteEntry criterion_property_suites(bool quick, const CollectedInvariants& collected) {
    SuiteEntry entry{"9 exposure, inverse, and default-order properties", false, "", 0.0};
    const auto start = Clock::now();

    const bool rows_ok = collected.stats.min_row_sum >= 1.0 - 1e-8 &&
                         collected.stats.max_row_sum <= 1.0 + 1e-8 &&
                         collected.stats.min_entry >= -1e-10;
    const bool society_ok = collected.min_society_margin >= -1e-8;

    std::mt19937_64 gen(77001);
    std::uniform_int_distribution<int> nd(2, 7);
    std::bernoulli_distribution flag(0.4);
    double worst_neumann = 0.0;
    for (int run = 0; run < 100; ++run) {
        const int size = nd(gen) + 1;
        // Society shares of 0.4+ keep the 50-term tail below the tolerance
        // for every sample, and satisfy the delta >= 0.05 floor with margin.
        const Mat a = random_exposures(gen, size, 0.4, 0.85);
        DistressMatrix lam = DistressMatrix::none(size);
        for (int i = 1; i < size; ++i) lam.flags(i) = flag(gen) ? 1 : 0;
        const Mat direct = leontief_inverse(a, lam);
        const Mat series = neumann_sum(a, lam, 50);
        worst_neumann = std::max(worst_neumann, (direct - series).cwiseAbs().maxCoeff());
    }

    std::uniform_real_distribution<double> su(0.0, 0.7), lu(0.1, 0.5);
    const Mat L = scenarios::four_bank_liabilities();
    const int sweeps = quick ? 20 : 100;
    int bank1_defaults = 0, society_solvent = 0;
    for (int run = 0; run < sweeps; ++run) {
        std::vector<RateWindow> wins;
        for (int j = 0; j <= 4; ++j) {
            const double s = su(gen);
            const double e = std::min(1.0, s + lu(gen));
            Mat rate = Mat::Zero(5, 5);
            rate.col(j) = L.col(j) / (e - s);
            wins.push_back(RateWindow{std::move(rate), s, e});
        }
        ScenarioConfig cfg;
        cfg.network = scenarios::four_bank_network();
        cfg.initial_wealth = scenarios::four_bank_assets();
        cfg.horizon = 1.0;
        cfg.dt0 = 1e-3;
        cfg.liabilities = LiabilitySchedule::windows(std::move(wins));
        std::vector<CashRateWindow> cash;
        for (const auto& w : cfg.liabilities.window_list()) {
            cash.push_back(CashRateWindow{
                Vec(w.rate.colwise().sum().transpose() - w.rate.rowwise().sum()), w.t_start,
                w.t_end});
        }
        cfg.cashflow = CashFlowSpec::piecewise(std::move(cash));
        const PathResult path = simulate_path(cfg, 0);
        if (path.terminal.wealth(1) < -kDefaultTolerance) ++bank1_defaults;
        if (path.terminal.wealth(0) > kDefaultTolerance) ++society_solvent;
    }

    entry.seconds = seconds_since(start);
    entry.pass = rows_ok && society_ok && worst_neumann <= 1e-10 && bank1_defaults == sweeps &&
                 society_solvent == sweeps;
    entry.measured = "row sums in [" + fmt(collected.stats.min_row_sum, 10) + ", " +
                     fmt(collected.stats.max_row_sum, 10) + "], society share margin " +
                     fmt(collected.min_society_margin, 4) +
                     " over each run's floor, worst Neumann gap " + fmt(worst_neumann, 3) +
                     ", first-order default frequency " +
                     fmt(static_cast<double>(bank1_defaults) / sweeps, 3) +
                     ", society solvency frequency " +
                     fmt(static_cast<double>(society_solvent) / sweeps, 3);
    return entry;
}

}  // namespace

SuiteReport run_scenario_suite(bool quick) {
    SuiteReport report;
    CollectedInvariants collected;
    report.entries.push_back(criterion_static_regression());
    report.entries.push_back(criterion_conservation(quick));
    report.entries.push_back(criterion_oracle_equivalence());
    report.entries.push_back(criterion_continuous_recovers_static(&collected));
    report.entries.push_back(criterion_path_independence(&collected));
    report.entries.push_back(criterion_dt_convergence());
    report.entries.push_back(criterion_window_scenarios(&collected));
    report.entries.push_back(criterion_monte_carlo(quick, &collected));
    report.entries.push_back(criterion_property_suites(quick, collected));
    return report;
}

}  // namespace clearnet
