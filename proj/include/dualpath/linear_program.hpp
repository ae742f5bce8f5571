#pragma once

#include "dualpath/types.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace dualpath {

/// Standard-form linear program
///
///     minimize    c'x  (- objective_constant)
///     subject to  A x = b,   lower <= x <= upper,
///
/// with A stored as coordinate triples. Bound entries may be +-infinity;
/// lower[i] == upper[i] denotes a fixed variable.
struct LinearProgram {
    std::string name;
    Vec objective;                 // c, length n
    std::vector<Triplet> entries;  // A, m_eq x n
    Vec rhs;                       // b, length m_eq
    Vec lower;                     // length n
    Vec upper;                     // length n
    double objective_constant = 0.0;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }

    SpMat matrix() const {
        SpMat a(num_rows(), num_vars());
        a.setFromTriplets(entries.begin(), entries.end());
        return a;
    }

    double objective_value(const Vec& x) const {
        return objective.dot(x) - objective_constant;
    }

    /// Checks the structural invariants; throws std::invalid_argument.
    void validate() const {
        const int n = num_vars();
        const int m = num_rows();
        require(lower.size() == n && upper.size() == n,
                name + ": bound vectors must have length n");
        for (int i = 0; i < n; ++i)
            require(lower[i] <= upper[i],
                    name + ": crossing bounds at column " + std::to_string(i));
        std::vector<std::pair<int, int>> coords;
        coords.reserve(entries.size());
        for (const auto& t : entries) {
            require(t.row() >= 0 && t.row() < m && t.col() >= 0 && t.col() < n,
                    name + ": coordinate entry out of range");
            coords.emplace_back(t.row(), t.col());
        }
        std::sort(coords.begin(), coords.end());
        require(std::adjacent_find(coords.begin(), coords.end()) == coords.end(),
                name + ": duplicate coordinate entry");
    }
};

inline bool operator==(const LinearProgram& a, const LinearProgram& b) {
    auto key = [](const LinearProgram& lp) {
        std::vector<std::tuple<int, int, double>> k;
        k.reserve(lp.entries.size());
        for (const auto& t : lp.entries) k.emplace_back(t.row(), t.col(), t.value());
        std::sort(k.begin(), k.end());
        return k;
    };
    return a.objective == b.objective && a.rhs == b.rhs && a.lower == b.lower &&
           a.upper == b.upper && a.objective_constant == b.objective_constant &&
           key(a) == key(b);
}

} // namespace dualpath
