#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clearnet/harness.hpp"
#include "clearnet/network.hpp"
#include "clearnet/scenario_io.hpp"

#include <random>

using namespace clearnet;

TEST_CASE("relative liabilities normalize rows") {
    const Mat L = scenarios::four_bank_liabilities();
    const Mat pi = relative_liabilities(L);
    CHECK(pi(1, 0) == doctest::Approx(0.25));
    CHECK(pi(1, 1) == 0.0);
    CHECK(pi(1, 2) == doctest::Approx(7.0 / 12.0));
    CHECK(pi(1, 3) == doctest::Approx(1.0 / 12.0));
    CHECK(pi(1, 4) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("zero rows get the uniform convention") {
    Mat L = Mat::Zero(5, 5);
    L(1, 0) = 1.0;  // keep one nonzero row so the matrix is nontrivial
    const Mat pi = relative_liabilities(L);
    // society row: n = 4 banks, 1/4 each
    for (int j = 1; j <= 4; ++j) CHECK(pi(0, j) == doctest::Approx(0.25));
    CHECK(pi(0, 0) == 0.0);
    // bank 2 has no obligations
    CHECK(pi(2, 2) == 0.0);
    CHECK(pi(2, 0) == doctest::Approx(0.25));
    CHECK(pi(2, 1) == doctest::Approx(0.25));
}

TEST_CASE("single creditor row normalizes to itself") {
    Mat L = Mat::Zero(3, 3);
    L(1, 0) = 1.0;
    const Mat pi = relative_liabilities(L);
    CHECK(pi(1, 0) == 1.0);
    CHECK(pi(1, 1) == 0.0);
    CHECK(pi(1, 2) == 0.0);
}

TEST_CASE("liability validation names the offending entry") {
    Mat L = Mat::Zero(3, 3);
    L(2, 1) = -0.5;
    CHECK_THROWS_WITH_AS(validate_liabilities(L), doctest::Contains("L/2/1"), ValidationError);

    Mat D = Mat::Zero(3, 3);
    D(1, 1) = 0.3;
    CHECK_THROWS_WITH_AS(validate_liabilities(D), doctest::Contains("1/1"), ValidationError);

    Mat S = Mat::Zero(3, 3);
    S(0, 2) = 1.0;
    CHECK_THROWS_WITH_AS(validate_liabilities(S), doctest::Contains("society"), ValidationError);
}

TEST_CASE("relative liabilities are row-stochastic for random inputs") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::bernoulli_distribution keep(0.5);
    for (int run = 0; run < 200; ++run) {
        const int n = 1 + static_cast<int>(gen() % 7);
        Mat L = Mat::Zero(n + 1, n + 1);
        for (int i = 1; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
                if (j != i && keep(gen)) L(i, j) = u(gen);
            }
        }
        const Mat pi = relative_liabilities(L);
        for (int i = 0; i <= n; ++i) {
            CHECK(pi.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(pi(i, i) == 0.0);
            CHECK(pi.row(i).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("distress flags follow wealth and step sign") {
    Vec v(3), dv(3);

    v << 1, 2, 3;
    dv << -1, -1, -1;
    CHECK_FALSE(DistressMatrix::from_wealth(v, dv).any());

    v << 5, -1, 0;
    dv << 0, 0, -1;
    auto d = DistressMatrix::from_wealth(v, dv);
    CHECK(d.flags(1) == 1);
    CHECK(d.flags(2) == 1);
    CHECK(d.flags(0) == 0);

    // society is never flagged, whatever its wealth does
    v.resize(2);
    dv.resize(2);
    v << -1, 1;
    dv << -1, 0;
    CHECK_FALSE(DistressMatrix::from_wealth(v, dv).any());
}

TEST_CASE("distress classification is scale invariant") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0), scale(0.1, 10.0);
    for (int run = 0; run < 200; ++run) {
        Vec v(5), dv(5);
        for (int i = 0; i < 5; ++i) {
            v(i) = u(gen);
            dv(i) = u(gen);
        }
        const auto base = DistressMatrix::from_wealth(v, dv);
        const auto scaled = DistressMatrix::from_wealth(v * scale(gen), dv * scale(gen));
        CHECK(base == scaled);
    }
}

TEST_CASE("network JSON block validates with paths") {
    const char* good = R"({"n": 2, "L": [[0,0,0],[1,0,1],[1,0,0]], "names": ["s","a","b"]})";
    const FinancialNetwork net = network_from_json(good);
    CHECK(net.n == 2);
    CHECK(net.node_name(2) == "b");

    const char* bad = R"({"n": 2, "L": [[0,0,0],[1,0,-1],[1,0,0]]})";
    CHECK_THROWS_WITH_AS(network_from_json(bad), doctest::Contains("network/L/1/2"),
                         ValidationError);

    const char* short_row = R"({"n": 2, "L": [[0,0,0],[1,0],[1,0,0]]})";
    CHECK_THROWS_WITH_AS(network_from_json(short_row), doctest::Contains("network/L/1"),
                         ValidationError);
}
