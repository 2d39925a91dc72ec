#pragma once

// Independent reference implementations used only by the tests. These stay
// deliberately close to the defining equations (payment-map iteration,
// truncated Neumann series) and share no code with the solvers they check.

#include "clearnet/discrete_clearing.hpp"
#include "clearnet/network.hpp"
#include "clearnet/static_clearing.hpp"

#include <random>
#include <utility>

namespace clearnet::oracles {

/// Truncated Neumann series sum_{k<=terms} (A^T Lambda)^k.
inline Mat neumann_sum(const Mat& exposures, const DistressMatrix& distress, int terms) {
    const int size = static_cast<int>(exposures.rows());
    Mat m = Mat::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            if (distress.flags(j)) m(i, j) = exposures(j, i);
        }
    }
    Mat sum = Mat::Identity(size, size);
    Mat power = Mat::Identity(size, size);
    for (int k = 1; k <= terms; ++k) {
        power = power * m;
        sum += power;
    }
    return sum;
}

/// Greatest/least wealths of one rolling-debt clearing date, by iterating
/// the monotone payment-form map from both lattice ends.
inline std::pair<Vec, Vec> discrete_picard(const Vec& prev_wealth, const Mat& prev_exposures,
                                           const Vec& cash_t, const Mat& liabilities_t,
                                           double tol = 1e-12) {
    const int size = static_cast<int>(prev_wealth.size());
    const int n = size - 1;
    const Vec rolled = neg_part(prev_wealth);
    const Vec pbar = liabilities_t.rowwise().sum() + rolled;
    Mat pi(size, size);
    for (int i = 0; i < size; ++i) {
        if (pbar(i) > 0.0) {
            pi.row(i) = (liabilities_t.row(i) + prev_exposures.row(i) * rolled(i)) / pbar(i);
        } else {
            pi.row(i) = uniform_row(n, i).transpose();
        }
    }
    const Vec external = cash_t - liabilities_t.colwise().sum().transpose() +
                         liabilities_t.rowwise().sum();

    auto iterate = [&](Vec v) {
        for (int it = 0; it < 1000000; ++it) {
            const Vec paid = pos_part(pbar - neg_part(v));
            Vec next = pos_part(prev_wealth) + external + pi.transpose() * paid - pbar;
            if ((next - v).cwiseAbs().maxCoeff() < tol) return next;
            v = std::move(next);
        }
        throw SolverError("discrete picard oracle did not converge");
    };

    const Vec upper = pos_part(prev_wealth) + external + pi.transpose() * pbar - pbar;
    const Vec lower = pos_part(prev_wealth) + external - pbar;
    return {iterate(upper), iterate(lower)};
}

/// Random regular network: every bank owes society, so the clearing
/// solution is unique.
inline StaticProblem random_regular_problem(std::mt19937_64& gen, int max_banks = 6) {
    std::uniform_int_distribution<int> nd(2, max_banks);
    std::uniform_real_distribution<double> u(0.0, 2.0), soc(0.5, 1.5), xs(0.0, 3.0);
    std::bernoulli_distribution keep(0.7);
    const int n = nd(gen);
    Mat L = Mat::Zero(n + 1, n + 1);
    Vec x(n + 1);
    for (int i = 0; i <= n; ++i) x(i) = xs(gen);
    for (int i = 1; i <= n; ++i) {
        L(i, 0) = soc(gen);
        for (int j = 1; j <= n; ++j) {
            if (j != i && keep(gen)) L(i, j) = u(gen);
        }
    }
    return StaticProblem{std::move(x), std::move(L)};
}

/// Random row-stochastic exposure matrix with zero diagonal, the uniform
/// society row, and bank society shares in [society_low, society_high].
inline Mat random_exposures(std::mt19937_64& gen, int size, double society_low,
                            double society_high) {
    std::uniform_real_distribution<double> u(0.0, 1.0), soc(society_low, society_high);
    Mat a = Mat::Zero(size, size);
    a.row(0) = uniform_row(size - 1, 0).transpose();
    for (int i = 1; i < size; ++i) {
        const double share = soc(gen);
        Vec rest = Vec::Zero(size);
        double total = 0.0;
        for (int j = 1; j < size; ++j) {
            if (j != i) {
                rest(j) = u(gen);
                total += rest(j);
            }
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

}  // namespace clearnet::oracles
