// Staged solving of the order-condition systems: the order-3 closed-form
// family over Q(c2,c3), the order-4 family via Groebner preprocessing, the
// degenerate c2 = c3 case, and affine parametrization for embedded weights.
#pragma once

#include "rk/conditions.hpp"
#include "rk/groebner.hpp"
#include "rk/linear_solve.hpp"
#include "rk/rational_function.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rk {

struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

// A parametric solution of a condition system: solved coefficients as
// rational functions of the free variables, together with the denominators
// that must not vanish and the equations verified to hold identically.
struct FamilySolution {
    Ring ring;
    std::map<std::string, RationalFunction> coefficients;
    std::vector<std::string> free_vars;
    std::vector<MultiPoly> excluded_loci;   // distinct denominators of the map
    std::vector<MultiPoly> residuals;       // equations not consumed by the staged solve
};

namespace detail {

inline void collect_excluded_loci(FamilySolution& fam) {
    fam.excluded_loci.clear();
    for (const auto& [name, value] : fam.coefficients) {
        if (value.den().is_constant()) continue;
        MultiPoly locus = value.den().primitive_normalized();
        bool known = false;
        for (const auto& existing : fam.excluded_loci)
            if (existing.proportional(locus)) known = true;
        if (!known) fam.excluded_loci.push_back(locus);
    }
}

// Substitutes the solved map and demands the exact zero polynomial
// (cross-multiplied). Throws if any equation survives.
inline void verify_family(const FamilySolution& fam, const std::vector<MultiPoly>& eqs) {
    for (const auto& eq : eqs) {
        RationalFunction value = substitute(eq, fam.coefficients);
        if (!value.is_zero())
            throw SolveError("family does not satisfy equation: " + eq.to_string());
    }
}

// Solves a single equation, already reduced modulo the current solution, for
// one unknown. The substituted numerator must be linear in that unknown.
inline RationalFunction solve_single(const MultiPoly& eq,
                                     const std::map<std::string, RationalFunction>& sol,
                                     const std::string& unknown) {
    MultiPoly numerator = substitute(eq, sol).num();
    LinearSolution res = linear_solve({numerator}, {unknown});
    if (!res.solved())
        throw SolveError("staged solve: equation did not determine " + unknown + ": " +
                         eq.to_string());
    return res.values.at(unknown);
}

inline DiffMonomial dm(std::vector<std::pair<DerivSymbol, unsigned>> factors) {
    DiffMonomial m = std::move(factors);
    std::sort(m.begin(), m.end());
    return m;
}

inline const LabeledEquation& find_equation(const ConditionSet& cs, int h_power,
                                            const DiffMonomial& mono) {
    const LabeledEquation* eq = cs.find(h_power, mono);
    if (!eq)
        throw SolveError("condition set lacks the expected h^" + std::to_string(h_power) +
                         " equation");
    return *eq;
}

}  // namespace detail

// The one-parameter-pair family for s = 3, p = 3 over Q(c2, c3), from the
// full 8-equation general condition set (row-sum not pre-applied; the solve
// rediscovers a21 = c2 and a31 + a32 = c3).
inline FamilySolution solve_order3_family(const ConditionSet& cs) {
    if (cs.stages != 3 || cs.order != 3 || cs.row_sum_applied ||
        cs.mode != ExpansionMode::general)
        throw SolveError("solve_order3_family expects the general s=3 p=3 condition set");

    const DerivSymbol F{0, 0}, Fx{1, 0}, Fy{0, 1}, Fxx{2, 0}, Fxy{1, 1}, Fyy{0, 2};
    using detail::dm;
    const auto& eq_f = detail::find_equation(cs, 0, dm({{F, 1}}));
    const auto& eq_fx = detail::find_equation(cs, 1, dm({{Fx, 1}}));
    const auto& eq_fxx = detail::find_equation(cs, 2, dm({{Fxx, 1}}));
    const auto& eq_fxfy = detail::find_equation(cs, 2, dm({{Fx, 1}, {Fy, 1}}));
    const auto& eq_fy2f = detail::find_equation(cs, 2, dm({{Fy, 2}, {F, 1}}));
    const auto& eq_fyf = detail::find_equation(cs, 1, dm({{Fy, 1}, {F, 1}}));

    FamilySolution fam;
    fam.ring = cs.ring;
    fam.free_vars = {"c2", "c3"};

    // Quadrature stage: the three b-only equations, linear in b1..b3.
    LinearSolution bres =
        linear_solve({eq_f.poly, eq_fx.poly, eq_fxx.poly}, {"b1", "b2", "b3"});
    if (!bres.solved()) throw SolveError("order-3 b-system did not solve (pivot failure)");
    fam.coefficients = bres.values;

    // Coupling stage, one unknown at a time.
    fam.coefficients.emplace("a32", detail::solve_single(eq_fxfy.poly, fam.coefficients, "a32"));
    fam.coefficients.emplace("a21", detail::solve_single(eq_fy2f.poly, fam.coefficients, "a21"));
    fam.coefficients.emplace("a31", detail::solve_single(eq_fyf.poly, fam.coefficients, "a31"));

    for (const auto& e : cs.equations) {
        if (&e == &eq_f || &e == &eq_fx || &e == &eq_fxx || &e == &eq_fxfy ||
            &e == &eq_fy2f || &e == &eq_fyf)
            continue;
        fam.residuals.push_back(e.poly);
    }
    detail::verify_family(fam, cs.polys());
    detail::collect_excluded_loci(fam);
    return fam;
}

namespace detail {

// Shared order-4 staged solve: interreduce the generators, specialize c4 = 1,
// read b1..b4 off the a-free basis elements, the a's off the a-linear ones,
// and verify the family against `verify_eqs` (with c4 = 1 applied).
inline FamilySolution solve_order4_staged(const Ring& ring,
                                          const std::vector<MultiPoly>& gens,
                                          const std::vector<MultiPoly>& verify_eqs) {
    std::vector<MultiPoly> basis = interreduce(gens, MonomialOrder::lex);

    // c4 = 1 is forced by the ideal; specialize.
    MultiPoly one(ring, Rational(1));
    std::vector<MultiPoly> specialized;
    for (const auto& p : basis) {
        MultiPoly q = p.substitute("c4", one);
        if (!q.is_zero()) specialized.push_back(q);
    }

    std::vector<std::string> a_unknowns = {"a32", "a42", "a43"};
    std::vector<std::size_t> a_idx;
    for (const auto& v : a_unknowns) a_idx.push_back(ring->index(v));
    auto uses_a = [&](const MultiPoly& p) {
        for (std::size_t v : a_idx)
            if (p.degree_in(v) > 0) return true;
        return false;
    };

    std::vector<MultiPoly> b_eqs, a_linear, residual;
    for (const auto& p : specialized) {
        if (!uses_a(p)) b_eqs.push_back(p);
        else if (p.joint_degree(a_idx) <= 1) a_linear.push_back(p);
        else residual.push_back(p);
    }
    if (b_eqs.empty() || a_linear.empty())
        throw SolveError("order-4 basis did not split into b- and a-stages");

    FamilySolution fam;
    fam.ring = ring;
    fam.free_vars = {"c2", "c3"};

    LinearSolution bres = linear_solve(b_eqs, {"b1", "b2", "b3", "b4"});
    if (!bres.solved()) throw SolveError("order-4 b-system did not solve");
    fam.coefficients = bres.values;
    fam.coefficients.emplace("c4", RationalFunction::constant(ring, Rational(1)));

    std::vector<MultiPoly> a_eqs;
    for (const auto& p : a_linear) a_eqs.push_back(substitute(p, fam.coefficients).num());
    LinearSolution ares = linear_solve(a_eqs, a_unknowns);
    if (!ares.solved()) throw SolveError("order-4 a-system did not solve");
    for (const auto& [name, value] : ares.values) fam.coefficients.emplace(name, value);

    // Row-sum completion.
    RationalFunction c2v = RationalFunction::variable(ring, "c2");
    RationalFunction c3v = RationalFunction::variable(ring, "c3");
    RationalFunction one_rf = RationalFunction::constant(ring, Rational(1));
    fam.coefficients.emplace("a21", c2v);
    fam.coefficients.emplace("a31", c3v - fam.coefficients.at("a32"));
    fam.coefficients.emplace("a41", one_rf - fam.coefficients.at("a42") -
                                        fam.coefficients.at("a43"));

    fam.residuals = residual;
    std::vector<MultiPoly> to_verify;
    for (const auto& p : verify_eqs) to_verify.push_back(p.substitute("c4", one));
    verify_family(fam, to_verify);
    collect_excluded_loci(fam);
    return fam;
}

}  // namespace detail

// The order-4 family over Q(c2, c3) with c4 = 1: Groebner interreduction,
// then b's from the a-free basis elements, then the a-linear elements, with
// the remaining (quadratic) elements verified as identities.
inline FamilySolution solve_order4_family(const ConditionSet& cs) {
    if (cs.stages != 4 || cs.order != 4 || !cs.row_sum_applied)
        throw SolveError("solve_order4_family expects a row-sum-applied s=4 p=4 condition set");
    return detail::solve_order4_staged(cs.ring, cs.polys(), cs.polys());
}

inline Ring equal_c_ring() {
    return make_ring({"a21", "a31", "a32", "a41", "a42", "a43", "b1", "b2", "b3", "b4", "u",
                      "r1"});
}

// The c2 = c3 = u, c4 = 1 specialization. Interreduction forces u = 1/2; the
// four-b solve is singular (b2 and b3 share columns) and is retried with b2
// free, which then becomes the family parameter r1.
inline FamilySolution solve_order4_equal_c(const ConditionSet& cs) {
    if (cs.stages != 4 || cs.order != 4 || !cs.row_sum_applied)
        throw SolveError("solve_order4_equal_c expects a row-sum-applied s=4 p=4 condition set");
    Ring ring = equal_c_ring();

    // Ring map: c2, c3 -> u; c4 -> 1; everything else keeps its name.
    std::vector<MultiPoly> images;
    for (std::size_t v = 0; v < cs.ring->size(); ++v) {
        const std::string& name = cs.ring->name(v);
        if (name == "c2" || name == "c3") images.push_back(MultiPoly::variable(ring, "u"));
        else if (name == "c4") images.push_back(MultiPoly(ring, Rational(1)));
        else images.push_back(MultiPoly::variable(ring, name));
    }
    std::vector<MultiPoly> eqs;
    for (const auto& p : cs.polys()) {
        MultiPoly q = p.compose(ring, images).primitive_normalized();
        if (q.is_zero()) continue;
        bool dup = false;
        for (const auto& existing : eqs)
            if (existing.proportional(q)) dup = true;
        if (!dup) eqs.push_back(q);
    }

    std::vector<MultiPoly> basis = interreduce(eqs, MonomialOrder::lex);

    std::vector<std::string> a_unknowns = {"a32", "a42", "a43"};
    std::vector<std::size_t> a_idx;
    for (const auto& v : a_unknowns) a_idx.push_back(ring->index(v));
    std::size_t u_idx = ring->index("u");

    std::vector<MultiPoly> b_eqs, u_eqs, rest;
    for (const auto& p : basis) {
        bool has_a = false;
        for (std::size_t v : a_idx)
            if (p.degree_in(v) > 0) has_a = true;
        if (has_a) rest.push_back(p);
        else if (p.degree_in(u_idx) > 0 &&
                 p.joint_degree({ring->index("b1"), ring->index("b2"), ring->index("b3"),
                                 ring->index("b4")}) == 0)
            u_eqs.push_back(p);
        else b_eqs.push_back(p);
    }

    FamilySolution fam;
    fam.ring = ring;
    fam.free_vars = {"r1"};

    // The full four-b solve must fail: b2 and b3 are indistinguishable here.
    LinearSolution attempt = linear_solve(b_eqs, {"b1", "b2", "b3", "b4"});
    if (attempt.status != LinearStatus::underdetermined)
        throw SolveError("equal-c b-system unexpectedly nonsingular");
    LinearSolution bres = linear_solve(b_eqs, {"b1", "b2", "b3", "b4"}, {"b2"});
    if (!bres.solved()) throw SolveError("equal-c b-system did not solve with b2 free");

    // Rename the free b2 to the family parameter r1.
    std::vector<MultiPoly> rename;
    for (std::size_t v = 0; v < ring->size(); ++v)
        rename.push_back(ring->name(v) == "b2" ? MultiPoly::variable(ring, "r1")
                                               : MultiPoly::variable(ring, ring->name(v)));
    for (const auto& [name, value] : bres.values)
        fam.coefficients.emplace(name, value.compose(ring, rename));
    fam.coefficients.emplace("b2", RationalFunction::variable(ring, "r1"));

    if (u_eqs.empty()) throw SolveError("equal-c basis does not determine u");
    LinearSolution ures = linear_solve(u_eqs, {"u"});
    if (!ures.solved()) throw SolveError("equal-c u equation did not solve");
    fam.coefficients.emplace("u", ures.values.at("u"));

    // Triangular sweep over the remaining a-equations.
    std::set<std::string> unsolved(a_unknowns.begin(), a_unknowns.end());
    std::vector<MultiPoly> pool = rest;
    bool progress = true;
    while (!unsolved.empty() && progress) {
        progress = false;
        for (std::size_t i = 0; i < pool.size() && !progress; ++i) {
            MultiPoly numerator = substitute(pool[i], fam.coefficients).num();
            std::vector<std::string> present;
            for (const auto& v : unsolved)
                if (numerator.degree_in(ring->index(v)) > 0) present.push_back(v);
            if (present.size() != 1) continue;
            if (numerator.degree_in(ring->index(present[0])) != 1) continue;
            LinearSolution res = linear_solve({numerator}, {present[0]});
            if (!res.solved()) continue;
            fam.coefficients.emplace(present[0], res.values.at(present[0]));
            unsolved.erase(present[0]);
            pool.erase(pool.begin() + (long)i);
            progress = true;
        }
    }
    if (!unsolved.empty()) throw SolveError("equal-c a-equations did not triangularize");
    fam.residuals = pool;

    // Row-sum completion with c2 = c3 = u, c4 = 1.
    RationalFunction u_val = fam.coefficients.at("u");
    RationalFunction one_rf = RationalFunction::constant(ring, Rational(1));
    fam.coefficients.emplace("a21", u_val);
    fam.coefficients.emplace("a31", u_val - fam.coefficients.at("a32"));
    fam.coefficients.emplace("a41",
                             one_rf - fam.coefficients.at("a42") - fam.coefficients.at("a43"));

    detail::verify_family(fam, eqs);
    detail::collect_excluded_loci(fam);
    return fam;
}

// The autonomous route to the order-4 family. The scalar autonomous
// expansion cannot separate the two order-4 trees whose elementary
// differential collapses to f'f''f^2 -- it only produces their combined
// condition -- so the 7-equation system has a spurious solution branch on
// top of the genuine one-parameter family. The tree condition
// sum_i b_i c_i (a c)_i = 1/8 is adjoined as the branch selector, after
// which the staged Groebner solve applies unchanged; the returned family is
// verified to satisfy the original autonomous system identically.
inline FamilySolution solve_order4_autonomous(const ConditionSet& cs) {
    if (cs.stages != 4 || cs.order != 4 || !cs.row_sum_applied ||
        cs.mode != ExpansionMode::autonomous)
        throw SolveError("solve_order4_autonomous expects the autonomous row-sum s=4 p=4 set");
    const Ring& ring = cs.ring;

    std::vector<MultiPoly> gens = cs.polys();
    gens.push_back(
        MultiPoly::parse(ring, "b3*c3*a32*c2 + b4*c4*(a42*c2 + a43*c3) - 1/8"));
    return detail::solve_order4_staged(ring, gens, cs.polys());
}

// Affine solve of a system linear in `unknowns` over Q[free]; free unknowns
// survive as parameters. Used for embedded hat weights.
inline FamilySolution parametrize(const std::vector<MultiPoly>& eqs,
                                  const std::vector<std::string>& unknowns,
                                  const std::vector<std::string>& free_unknowns) {
    LinearSolution res = linear_solve(eqs, unknowns, free_unknowns);
    if (res.status == LinearStatus::inconsistent)
        throw SolveError("parametrize: system inconsistent, witness " +
                         res.witness.to_string());
    if (res.status == LinearStatus::underdetermined) {
        std::string names;
        for (const auto& v : res.candidate_free) names += (names.empty() ? "" : ", ") + v;
        throw SolveError("parametrize: system underdetermined; candidate free unknowns: " +
                         names);
    }
    FamilySolution fam;
    fam.ring = eqs.front().ring();
    fam.coefficients = res.values;
    for (const auto& f : free_unknowns) {
        fam.coefficients.emplace(f, RationalFunction::variable(fam.ring, f));
        fam.free_vars.push_back(f);
    }
    detail::verify_family(fam, eqs);
    detail::collect_excluded_loci(fam);
    return fam;
}

// Evaluates a family at rational values of its free variables; refuses
// points on any excluded locus.
inline std::map<std::string, Rational> instantiate(
    const FamilySolution& fam, const std::map<std::string, Rational>& free_values) {
    std::vector<Rational> point(fam.ring->size(), Rational(0));
    for (const auto& f : fam.free_vars) {
        auto it = free_values.find(f);
        if (it == free_values.end())
            throw std::invalid_argument("missing value for free variable " + f);
        point[fam.ring->index(f)] = it->second;
    }
    for (const auto& locus : fam.excluded_loci)
        if (locus.evaluate(point) == 0) throw ExcludedLocusError(locus.to_string());
    std::map<std::string, Rational> out;
    for (const auto& [name, value] : fam.coefficients) out.emplace(name, value.evaluate(point));
    for (const auto& [name, value] : free_values) out[name] = value;
    return out;
}

}  // namespace rk
