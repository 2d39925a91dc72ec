#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace clearnet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Input data failed a structural check (negative entry, bad shape, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear system or fixed-point iteration could not be resolved.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A path simulation failed (step underflow, horizon guard, ...).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Entrywise positive part: max(v, 0).
inline Vec pos_part(const Vec& v) { return v.cwiseMax(0.0); }

/// Entrywise negative part: max(-v, 0), so v = pos_part(v) - neg_part(v).
inline Vec neg_part(const Vec& v) { return (-v).cwiseMax(0.0); }

/// Interbank network of n banks plus the outside node at index 0.
///
/// Node 0 aggregates everything outside the banking system; it receives
/// obligations but owes nothing, so row 0 of the liability matrix is zero.
struct FinancialNetwork {
    int n = 0;                       // number of banks; matrices are (n+1)x(n+1)
    Mat liabilities;                 // L, nonnegative, zero diagonal, zero row 0
    std::vector<std::string> names;  // optional labels, index 0 = society

    int size() const { return n + 1; }

    /// Throws ValidationError naming the offending entry if the matrix
    /// violates the structural invariants.
    void validate() const;

    std::string node_name(int i) const;
};

/// Checks a liability matrix: square, nonnegative, zero diagonal, zero
/// society row. `context` prefixes error messages (e.g. a JSON path).
void validate_liabilities(const Mat& L, const std::string& context = "L");

/// Row-normalizes a liability matrix into relative liabilities.
///
/// Rows with positive total obligations are divided by their sum. A row
/// with no obligations (always including the society row) gets the uniform
/// convention 1/n off-diagonal, zero diagonal, so every row sums to one.
Mat relative_liabilities(const Mat& L);

/// Uniform fallback row for a node with no obligations: 1/n off the
/// diagonal, 0 at the node itself.
Vec uniform_row(int n, int node);

/// Diagonal 0/1 matrix flagging banks in distress. The society node is
/// never flagged.
struct DistressMatrix {
    Eigen::VectorXi flags;  // 0/1 per node, flags[0] == 0 always

    static DistressMatrix none(int size);

    /// Flags bank i when V_i < 0, or V_i == 0 with the step dV_i < 0.
    static DistressMatrix from_wealth(const Vec& wealth, const Vec& delta);

    /// Flags bank i when V_i < 0 strictly (no tie-breaking on the step).
    static DistressMatrix from_negative_wealth(const Vec& wealth);

    bool any() const { return flags.any(); }
    int size() const { return static_cast<int>(flags.size()); }
    bool operator==(const DistressMatrix& other) const { return (flags == other.flags); }
    bool operator!=(const DistressMatrix& other) const { return !(*this == other); }

    std::vector<int> members() const;
};

}  // namespace clearnet
