#include "clearnet/static_clearing.hpp"

#include <Eigen/LU>

namespace clearnet {

void StaticProblem::validate() const {
    validate_liabilities(liabilities, "static/L");
    if (external_assets.size() != liabilities.rows()) {
        throw ValidationError("static/x: expected " + std::to_string(liabilities.rows()) +
                              " entries, got " + std::to_string(external_assets.size()));
    }
    for (Eigen::Index i = 0; i < external_assets.size(); ++i) {
        if (!(external_assets(i) >= 0.0)) {
            throw ValidationError("static/x/" + std::to_string(i) + ": external assets must be >= 0");
        }
    }
}

namespace {

std::vector<std::string> society_obligation_warnings(const Mat& L) {
    std::vector<std::string> out;
    for (Eigen::Index i = 1; i < L.rows(); ++i) {
        if (L(i, 0) <= 0.0) {
            out.push_back("bank " + std::to_string(i) +
                          " owes nothing to society; uniqueness not guaranteed");
        }
    }
    return out;
}

Mat minus_scaled_columns(const Mat& pi_t, const DistressMatrix& lambda) {
    // I - Pi^T Lambda: column j of Pi^T survives only for flagged j.
    Mat m = Mat::Identity(pi_t.rows(), pi_t.cols());
    for (int j = 0; j < lambda.size(); ++j) {
        if (lambda.flags(j)) m.col(j) -= pi_t.col(j);
    }
    return m;
}

}  // namespace

StaticSolution clear_static(const StaticProblem& prob) {
    prob.validate();
    const int size = static_cast<int>(prob.liabilities.rows());
    const Vec pbar = prob.total_obligations();
    const Mat pi = relative_liabilities(prob.liabilities);
    const Mat pi_t = pi.transpose();

    StaticSolution sol;
    sol.warnings = society_obligation_warnings(prob.liabilities);

    // Wealths when every bank pays in full.
    const Vec base = prob.external_assets + pi_t * pbar - pbar;
    Vec v = base;
    std::set<int> insolvent_prev;
    bool first_round = true;
    for (int round = 0; round < size + 1; ++round) {
        std::set<int> insolvent;
        for (int i = 1; i < size; ++i) {
            if (v(i) < 0.0) insolvent.insert(i);
        }
        if (!first_round && insolvent == insolvent_prev) break;
        first_round = false;
        sol.orders.push_back(insolvent);
        DistressMatrix lambda = DistressMatrix::none(size);
        for (int i : insolvent) lambda.flags(i) = 1;
        Eigen::FullPivLU<Mat> lu(minus_scaled_columns(pi_t, lambda));
        if (!lu.isInvertible()) {
            std::string msg = "singular clearing system for insolvent set {";
            for (int i : insolvent) msg += std::to_string(i) + ",";
            msg += "}";
            throw SolverError(msg);
        }
        v = lu.solve(base);
        insolvent_prev = std::move(insolvent);
    }

    sol.wealth = v;
    sol.payments = pos_part(pbar - neg_part(v));
    sol.first_order_solvent.insert(0);
    for (int i = 1; i < size; ++i) {
        if (prob.external_assets(i) - pbar(i) > 0.0) sol.first_order_solvent.insert(i);
    }
    return sol;
}

std::pair<Vec, Vec> picard_oracle(const StaticProblem& prob, double tol, int max_iters) {
    prob.validate();
    const Vec pbar = prob.total_obligations();
    const Mat pi_t = relative_liabilities(prob.liabilities).transpose();

    auto iterate = [&](Vec p) {
        for (int it = 0; it < max_iters; ++it) {
            Vec next = pbar.cwiseMin(prob.external_assets + pi_t * p);
            if ((next - p).cwiseAbs().maxCoeff() < tol) {
                return next;
            }
            p = std::move(next);
        }
        throw SolverError("payment iteration did not converge within " +
                          std::to_string(max_iters) + " steps");
    };

    const Vec p_greatest = iterate(pbar);
    const Vec p_least = iterate(Vec::Zero(pbar.size()));
    return {prob.external_assets + pi_t * p_greatest - pbar,
            prob.external_assets + pi_t * p_least - pbar};
}

std::pair<std::vector<std::set<int>>, std::set<int>> classify_orders(const StaticProblem& prob) {
    StaticSolution sol = clear_static(prob);
    return {sol.orders, sol.first_order_solvent};
}

int StaticSolution::default_order(int node) const {
    for (std::size_t k = 0; k < orders.size(); ++k) {
        if (orders[k].count(node)) return static_cast<int>(k) + 1;
    }
    return 0;
}

std::set<int> StaticSolution::default_set() const {
    return orders.empty() ? std::set<int>{} : orders.back();
}

}  // namespace clearnet
