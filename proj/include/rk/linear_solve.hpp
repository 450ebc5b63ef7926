// Gaussian elimination for systems that are jointly linear in a designated
// set of unknowns, over the field of rational functions in the remaining
// variables. This is the staged-solve workhorse behind every coefficient
// family in the solver module.
#pragma once

#include "rk/rational_function.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rk {

struct NonlinearSystemError : std::runtime_error {
    explicit NonlinearSystemError(const std::string& eq)
        : std::runtime_error("equation is not linear in the designated unknowns: " + eq) {}
};

enum class LinearStatus { unique, parametric, inconsistent, underdetermined };

struct LinearSolution {
    LinearStatus status = LinearStatus::unique;
    // Pivot unknowns -> rational functions in the remaining variables (and in
    // the declared free unknowns, for parametric systems).
    std::map<std::string, RationalFunction> values;
    std::vector<std::string> free_vars;       // as declared by the caller
    std::vector<std::string> candidate_free;  // unpivoted unknowns, when underdetermined
    MultiPoly witness;                        // nonzero residue row, when inconsistent

    bool solved() const {
        return status == LinearStatus::unique || status == LinearStatus::parametric;
    }
};

// Solves eqs == 0 for `unknowns` \ `free_vars`. Each equation must have joint
// degree <= 1 in the unknowns (no products of two unknowns). Declared free
// unknowns are moved to the right-hand side and survive in the solution as
// ordinary variables. Overdetermined consistent systems are accepted; an
// all-zero row with nonzero right-hand side makes the system inconsistent.
inline LinearSolution linear_solve(const std::vector<MultiPoly>& eqs,
                                   const std::vector<std::string>& unknowns,
                                   const std::vector<std::string>& free_vars = {}) {
    if (eqs.empty()) throw std::invalid_argument("linear_solve: no equations");
    const Ring& ring = eqs.front().ring();
    for (const auto& e : eqs) require_same_ring(ring, e.ring());

    std::vector<std::size_t> unknown_idx;
    for (const auto& u : unknowns) unknown_idx.push_back(ring->index(u));

    auto is_free = [&](const std::string& u) {
        return std::find(free_vars.begin(), free_vars.end(), u) != free_vars.end();
    };

    std::vector<std::string> pivots_wanted;
    for (const auto& u : unknowns)
        if (!is_free(u)) pivots_wanted.push_back(u);

    // Split each equation into sum(coef_u * u) + rest.
    std::size_t n = pivots_wanted.size();
    std::vector<std::vector<RationalFunction>> mat;  // rows x n
    std::vector<RationalFunction> rhs;
    for (const auto& eq : eqs) {
        if (eq.joint_degree(unknown_idx) > 1) throw NonlinearSystemError(eq.to_string());
        std::vector<RationalFunction> row;
        MultiPoly rest(ring);
        std::map<std::string, MultiPoly> coefs;
        for (const auto& u : unknowns) coefs.emplace(u, MultiPoly(ring));
        for (const auto& [m, c] : eq.terms()) {
            bool placed = false;
            for (const auto& u : unknowns) {
                std::size_t vi = ring->index(u);
                if (m.exps[vi] == 1) {
                    Monomial reduced = m;
                    reduced.exps[vi] = 0;
                    coefs.at(u) += MultiPoly::term(ring, reduced, c);
                    placed = true;
                    break;
                }
            }
            if (!placed) rest += MultiPoly::term(ring, m, c);
        }
        for (const auto& u : pivots_wanted) row.emplace_back(coefs.at(u));
        MultiPoly right = -rest;
        for (const auto& u : free_vars)
            right -= coefs.at(u) * MultiPoly::variable(ring, u);
        mat.push_back(std::move(row));
        rhs.emplace_back(right);
    }

    // Forward elimination with deterministic pivot choice: among rows with a
    // nonzero entry in the column, take the one with the smallest numerator.
    std::vector<bool> row_used(mat.size(), false);
    std::vector<long> col_pivot_row(n, -1);
    for (std::size_t col = 0; col < n; ++col) {
        long best = -1;
        for (std::size_t r = 0; r < mat.size(); ++r) {
            if (row_used[r] || mat[r][col].is_zero()) continue;
            if (best < 0 ||
                mat[r][col].num().terms().size() < mat[(std::size_t)best][col].num().terms().size())
                best = (long)r;
        }
        if (best < 0) continue;
        std::size_t pr = (std::size_t)best;
        row_used[pr] = true;
        col_pivot_row[col] = (long)pr;
        for (std::size_t r = 0; r < mat.size(); ++r) {
            if (r == pr || mat[r][col].is_zero()) continue;
            RationalFunction factor = mat[r][col] / mat[pr][col];
            for (std::size_t cc = 0; cc < n; ++cc)
                mat[r][cc] = mat[r][cc] - factor * mat[pr][cc];
            mat[r][col] = RationalFunction::constant(ring, Rational(0));
            rhs[r] = rhs[r] - factor * rhs[pr];
        }
    }

    LinearSolution out;
    out.free_vars = free_vars;

    // Consistency: unused rows must be identically zero.
    for (std::size_t r = 0; r < mat.size(); ++r) {
        if (row_used[r]) continue;
        bool all_zero = true;
        for (std::size_t cc = 0; cc < n; ++cc)
            if (!mat[r][cc].is_zero()) all_zero = false;
        if (all_zero && !rhs[r].is_zero()) {
            out.status = LinearStatus::inconsistent;
            out.witness = rhs[r].num();
            return out;
        }
    }

    for (std::size_t col = 0; col < n; ++col)
        if (col_pivot_row[col] < 0) out.candidate_free.push_back(pivots_wanted[col]);
    if (!out.candidate_free.empty()) {
        out.status = LinearStatus::underdetermined;
        return out;
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t r = (std::size_t)col_pivot_row[col];
        out.values.emplace(pivots_wanted[col], rhs[r] / mat[r][col]);
    }
    out.status = free_vars.empty() ? LinearStatus::unique : LinearStatus::parametric;
    return out;
}

}  // namespace rk
