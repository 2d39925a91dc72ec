#include "clearnet/network.hpp"

namespace clearnet {

void validate_liabilities(const Mat& L, const std::string& context) {
    if (L.rows() != L.cols() || L.rows() < 2) {
        throw ValidationError(context + ": expected a square matrix of size >= 2, got " +
                              std::to_string(L.rows()) + "x" + std::to_string(L.cols()));
    }
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        for (Eigen::Index j = 0; j < L.cols(); ++j) {
            const double v = L(i, j);
            if (!std::isfinite(v)) {
                throw ValidationError(context + "/" + std::to_string(i) + "/" + std::to_string(j) +
                                      ": entry is not finite");
            }
            if (v < 0.0) {
                throw ValidationError(context + "/" + std::to_string(i) + "/" + std::to_string(j) +
                                      ": negative liability " + std::to_string(v));
            }
            if (i == j && v != 0.0) {
                throw ValidationError(context + "/" + std::to_string(i) + "/" + std::to_string(j) +
                                      ": nonzero diagonal entry " + std::to_string(v));
            }
            if (i == 0 && v != 0.0) {
                throw ValidationError(context + "/0/" + std::to_string(j) +
                                      ": society row must be zero, got " + std::to_string(v));
            }
        }
    }
}

void FinancialNetwork::validate() const {
    if (n < 1) throw ValidationError("network/n: need at least one bank, got " + std::to_string(n));
    if (liabilities.rows() != n + 1) {
        throw ValidationError("network/L: expected " + std::to_string(n + 1) + "x" +
                              std::to_string(n + 1) + ", got " + std::to_string(liabilities.rows()) +
                              "x" + std::to_string(liabilities.cols()));
    }
    validate_liabilities(liabilities, "network/L");
    if (!names.empty() && static_cast<int>(names.size()) != n + 1) {
        throw ValidationError("network/names: expected " + std::to_string(n + 1) + " labels, got " +
                              std::to_string(names.size()));
    }
}

std::string FinancialNetwork::node_name(int i) const {
    if (i >= 0 && i < static_cast<int>(names.size())) return names[i];
    return i == 0 ? "society" : "bank" + std::to_string(i);
}

Vec uniform_row(int n, int node) {
    Vec row = Vec::Constant(n + 1, 1.0 / n);
    row(node) = 0.0;
    return row;
}

Mat relative_liabilities(const Mat& L) {
    validate_liabilities(L);
    const int size = static_cast<int>(L.rows());
    const int n = size - 1;
    Mat pi(size, size);
    for (int i = 0; i < size; ++i) {
        const double total = L.row(i).sum();
        if (total > 0.0) {
            pi.row(i) = L.row(i) / total;
        } else {
            pi.row(i) = uniform_row(n, i).transpose();
        }
    }
    return pi;
}

DistressMatrix DistressMatrix::none(int size) {
    return DistressMatrix{Eigen::VectorXi::Zero(size)};
}

DistressMatrix DistressMatrix::from_wealth(const Vec& wealth, const Vec& delta) {
    if (wealth.size() != delta.size()) {
        throw ValidationError("distress: wealth and delta sizes differ");
    }
    DistressMatrix d = none(static_cast<int>(wealth.size()));
    for (Eigen::Index i = 1; i < wealth.size(); ++i) {
        if (wealth(i) < 0.0 || (wealth(i) == 0.0 && delta(i) < 0.0)) d.flags(i) = 1;
    }
    return d;
}

DistressMatrix DistressMatrix::from_negative_wealth(const Vec& wealth) {
    DistressMatrix d = none(static_cast<int>(wealth.size()));
    for (Eigen::Index i = 1; i < wealth.size(); ++i) {
        if (wealth(i) < 0.0) d.flags(i) = 1;
    }
    return d;
}

std::vector<int> DistressMatrix::members() const {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < flags.size(); ++i) {
        if (flags(i)) out.push_back(static_cast<int>(i));
    }
    return out;
}

}  // namespace clearnet
