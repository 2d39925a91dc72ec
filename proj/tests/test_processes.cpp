#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clearnet/harness.hpp"
#include "clearnet/processes.hpp"

#include <cmath>

using namespace clearnet;

TEST_CASE("constant cash flow evaluates to its rate") {
    Vec rate(3);
    rate << 1, -2, 3;
    const CashFlowSpec spec = CashFlowSpec::constant(rate);
    const auto [mu, sigma] = eval_mu_sigma(spec, 0.7, Vec::Zero(3));
    CHECK((mu - rate).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sigma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bridge drift pulls toward the target") {
    Vec target(3);
    target << 2, 4, 6;
    const CashFlowSpec spec = CashFlowSpec::bridge(target, 0.0);
    const auto [mu, sigma] = eval_mu_sigma(spec, 0.5, Vec(target / 2));
    CHECK((mu - target).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sigma.cwiseAbs().maxCoeff() == 0.0);

    const CashFlowSpec noisy = CashFlowSpec::bridge(target, 5.0);
    const auto [mu2, sigma2] = eval_mu_sigma(noisy, 0.25, Vec::Zero(3));
    CHECK(sigma2(1, 1) == 5.0);
    CHECK(sigma2(0, 1) == 0.0);

    CHECK_THROWS_AS(eval_mu_sigma(noisy, 1.0 - 1e-10, Vec::Zero(3)), SimulationError);
}

TEST_CASE("bridge requires a unit horizon") {
    CHECK_THROWS_AS(CashFlowSpec::bridge(Vec::Zero(3), 1.0).validate(3, 2.0), ValidationError);
    CHECK_NOTHROW(CashFlowSpec::bridge(Vec::Zero(3), 1.0).validate(3, 1.0));
}

TEST_CASE("constant schedule spreads the total uniformly") {
    const Mat total = scenarios::four_bank_liabilities();
    const LiabilitySchedule sched = LiabilitySchedule::constant(total, 2.0);
    CHECK((sched.rate_at(0.3) - total / 2.0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((sched.aggregate(0.0, 2.0) - total).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sched.breakpoints().size() == 2);
}

TEST_CASE("window schedules aggregate back to the total") {
    for (const ScenarioConfig& cfg :
         {scenarios::banks_first_windows(), scenarios::society_first_windows(),
          scenarios::staggered_window_bridge()}) {
        const Mat agg = cfg.liabilities.aggregate(0.0, 1.0);
        CHECK((agg - scenarios::four_bank_liabilities()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("window structure of the priority schedules") {
    const ScenarioConfig cfg = scenarios::banks_first_windows();
    const Mat L = scenarios::four_bank_liabilities();
    // claims on bank 1 accrue in the first window, nothing else is active
    const Mat early = cfg.liabilities.rate_at(0.1);
    CHECK(early(2, 1) == doctest::Approx(5.0 * L(2, 1)));
    CHECK(early.col(0).cwiseAbs().maxCoeff() == 0.0);
    // society's claims accrue only in the last window
    const Mat late = cfg.liabilities.rate_at(0.9);
    CHECK(late(1, 0) == doctest::Approx(5.0 * L(1, 0)));
    CHECK(late(2, 1) == 0.0);
}

TEST_CASE("rates are constant between breakpoints and add on overlap") {
    Mat r1 = Mat::Zero(3, 3), r2 = Mat::Zero(3, 3);
    r1(1, 0) = 1.0;
    r2(1, 0) = 2.0;
    const LiabilitySchedule sched = LiabilitySchedule::windows(
        {RateWindow{r1, 0.0, 0.6}, RateWindow{r2, 0.4, 1.0}});
    CHECK(sched.rate_at(0.2)(1, 0) == 1.0);
    CHECK(sched.rate_at(0.5)(1, 0) == 3.0);
    CHECK(sched.rate_at(0.7)(1, 0) == 2.0);
    CHECK(sched.next_breakpoint_after(0.0) == doctest::Approx(0.4));
    CHECK(sched.next_breakpoint_after(0.4) == doctest::Approx(0.6));

    // additivity of the aggregate over an arbitrary split
    const Mat whole = sched.aggregate(0.0, 1.0);
    const Mat split = sched.aggregate(0.0, 0.37) + sched.aggregate(0.37, 1.0);
    CHECK((whole - split).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("negative rates are rejected with their path") {
    Mat r = Mat::Zero(3, 3);
    r(1, 2) = -1.0;
    CHECK_THROWS_WITH_AS(LiabilitySchedule::windows({RateWindow{r, 0.0, 1.0}}),
                         doctest::Contains("liabilities/windows/0/rate"), ValidationError);
}

TEST_CASE("society floor reflects the worst active segment") {
    const ScenarioConfig staggered = scenarios::staggered_window_bridge();
    CHECK(staggered.liabilities.society_floor() > 0.0);
    const ScenarioConfig banks_first = scenarios::banks_first_windows();
    CHECK(banks_first.liabilities.society_floor() == 0.0);
}

TEST_CASE("identical streams reproduce, distinct paths decorrelate") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.normal() == b.normal());

    RngStream c(42, 8);
    const int draws = 100000;
    double mean = 0.0, var = 0.0, cross = 0.0;
    RngStream d(42, 7);
    for (int i = 0; i < draws; ++i) {
        const double x = d.normal();
        const double y = c.normal();
        mean += x;
        var += x * x;
        cross += x * y;
    }
    mean /= draws;
    var = var / draws - mean * mean;
    cross /= draws;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
    CHECK(std::abs(cross) < 0.02);
}

TEST_CASE("vector draws consume the stream in order") {
    RngStream a(1, 0), b(1, 0);
    const Vec v = draw_standard_normal(a, 5);
    for (int i = 0; i < 5; ++i) CHECK(v(i) == b.normal());
}
