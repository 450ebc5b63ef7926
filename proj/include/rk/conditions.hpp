// Named systems of polynomial order conditions: extraction from the series
// engine (general and autonomous, with optional row-sum substitution) and the
// independent rooted-tree construction.
#pragma once

#include "rk/groebner.hpp"
#include "rk/ring.hpp"
#include "rk/series.hpp"
#include "rk/trees.hpp"

#include <map>
#include <string>
#include <vector>

namespace rk {

inline std::string aname(unsigned i, unsigned j) {
    return "a" + std::to_string(i) + std::to_string(j);
}
inline std::string bname(unsigned i) { return "b" + std::to_string(i); }
inline std::string cname(unsigned i) { return "c" + std::to_string(i); }

// The standard coefficient ring for an s-stage scheme, in the conventional
// variable order a21, a31, a32, ..., b1..bs, c2..cs (lex-significant first).
inline Ring rk_ring(unsigned s, const std::vector<std::string>& extra = {}) {
    std::vector<std::string> names;
    for (unsigned i = 2; i <= s; ++i)
        for (unsigned j = 1; j < i; ++j) names.push_back(aname(i, j));
    for (unsigned i = 1; i <= s; ++i) names.push_back(bname(i));
    for (unsigned i = 2; i <= s; ++i) names.push_back(cname(i));
    for (const auto& e : extra) names.push_back(e);
    return make_ring(names);
}

enum class ExpansionMode { general, autonomous };

struct LabeledEquation {
    std::string label;
    MultiPoly poly;  // understood as "= 0"
    int h_power = -1;
    DiffMonomial mono;  // provenance for series-derived equations
};

struct ConditionSet {
    unsigned stages = 0;
    unsigned order = 0;
    ExpansionMode mode = ExpansionMode::general;
    bool row_sum_applied = false;
    Ring ring;
    std::vector<LabeledEquation> equations;

    std::vector<MultiPoly> polys() const {
        std::vector<MultiPoly> out;
        for (const auto& e : equations) out.push_back(e.poly);
        return out;
    }

    const LabeledEquation* find(int h_power, const DiffMonomial& mono) const {
        for (const auto& e : equations)
            if (e.h_power == h_power && e.mono == mono) return &e;
        return nullptr;
    }
};

namespace detail {

// Integer coefficients, content 1, positive graded-lex leading coefficient.
inline MultiPoly canonical_equation(const MultiPoly& p) { return p.primitive_normalized(); }

inline void push_unique(std::vector<LabeledEquation>& eqs, LabeledEquation eq) {
    for (const auto& existing : eqs)
        if (existing.poly.proportional(eq.poly)) return;
    eqs.push_back(std::move(eq));
}

// Images of the row-sum substitution a_{i1} = c_i - sum_{j>=2} a_{ij}.
inline std::vector<MultiPoly> row_sum_images(const Ring& ring, unsigned s) {
    std::vector<MultiPoly> images;
    for (std::size_t v = 0; v < ring->size(); ++v)
        images.push_back(MultiPoly::variable(ring, ring->name(v)));
    for (unsigned i = 2; i <= s; ++i) {
        MultiPoly value = MultiPoly::variable(ring, cname(i));
        for (unsigned j = 2; j < i; ++j)
            value -= MultiPoly::variable(ring, aname(i, j));
        images[ring->index(aname(i, 1))] = value;
    }
    return images;
}

}  // namespace detail

// Order conditions for an s-stage method targeting order p: the nonzero
// coefficients of T - RK, optionally with the row-sum substitution applied.
inline ConditionSet generate_conditions(unsigned s, unsigned p, ExpansionMode mode,
                                        bool row_sum) {
    Ring ring = rk_ring(s);
    bool autonomous = mode == ExpansionMode::autonomous;

    std::vector<std::vector<MultiPoly>> a(s, std::vector<MultiPoly>(s, MultiPoly(ring)));
    std::vector<MultiPoly> c(s, MultiPoly(ring));
    for (unsigned i = 2; i <= s; ++i) {
        c[i - 1] = MultiPoly::variable(ring, cname(i));
        for (unsigned j = 1; j < i; ++j)
            a[i - 1][j - 1] = MultiPoly::variable(ring, aname(i, j));
    }

    std::vector<TruncatedSeries> stages = expand_stages(a, c, p, autonomous);
    TruncatedSeries rk_series(ring, p);
    for (unsigned i = 1; i <= s; ++i)
        rk_series = rk_series + stages[i - 1] * MultiPoly::variable(ring, bname(i));
    TruncatedSeries target = taylor_target(ring, p, autonomous);

    std::vector<MultiPoly> images;
    if (row_sum) images = detail::row_sum_images(ring, s);

    ConditionSet cs{s, p, mode, row_sum, ring, {}};
    for (const auto& [key, coef] : collect_difference(target, rk_series)) {
        MultiPoly poly = row_sum ? coef.compose(ring, images) : coef;
        poly = detail::canonical_equation(poly);
        if (poly.is_zero()) continue;
        LabeledEquation eq;
        eq.label = "h^" + std::to_string(key.h_power) + " * " + diff_mono_to_string(key.mono);
        eq.poly = poly;
        eq.h_power = (int)key.h_power;
        eq.mono = key.mono;
        detail::push_unique(cs.equations, std::move(eq));
    }
    return cs;
}

namespace detail {

// Elementary weights Phi_i(t) for every stage, under the row-sum convention
// (a_{i1} = c_i - sum_{j>=2} a_{ij}, c_1 = 0).
inline std::vector<MultiPoly> elementary_weights(const Ring& ring, unsigned s,
                                                 const RootedTree& tree) {
    std::vector<MultiPoly> phi(s, MultiPoly(ring, Rational(1)));
    if (tree.children().empty()) return phi;

    std::vector<std::vector<MultiPoly>> child_phi;
    for (const auto& ch : tree.children()) child_phi.push_back(elementary_weights(ring, s, ch));

    // a_{ij} with the first column eliminated by row-sum.
    auto a_entry = [&](unsigned i, unsigned j) {  // 1-based
        if (j == 1) {
            MultiPoly v = i == 1 ? MultiPoly(ring) : MultiPoly::variable(ring, cname(i));
            for (unsigned jj = 2; jj < i; ++jj) v -= MultiPoly::variable(ring, aname(i, jj));
            return v;
        }
        return MultiPoly::variable(ring, aname(i, j));
    };

    for (unsigned i = 1; i <= s; ++i) {
        MultiPoly prod(ring, Rational(1));
        for (std::size_t k = 0; k < tree.children().size(); ++k) {
            MultiPoly sum(ring);
            for (unsigned j = 1; j < i; ++j) sum += a_entry(i, j) * child_phi[k][j - 1];
            prod = prod * sum;
        }
        phi[i - 1] = prod;
    }
    return phi;
}

}  // namespace detail

// One equation per rooted tree of order <= p:  sum_i b_i Phi_i(t) = 1/gamma(t).
inline ConditionSet tree_conditions(unsigned s, unsigned p) {
    Ring ring = rk_ring(s);
    ConditionSet cs{s, p, ExpansionMode::general, true, ring, {}};
    for (const auto& tree : enumerate_trees(p)) {
        std::vector<MultiPoly> phi = detail::elementary_weights(ring, s, tree);
        MultiPoly eq(ring);
        for (unsigned i = 1; i <= s; ++i)
            eq += MultiPoly::variable(ring, bname(i)) * phi[i - 1];
        Rational inv_gamma(mpz_class(1), tree.density());
        inv_gamma.canonicalize();
        eq -= MultiPoly(ring, inv_gamma);
        LabeledEquation labeled;
        labeled.label = "tree " + tree.encode() + " gamma=" + tree.density().get_str();
        labeled.poly = detail::canonical_equation(eq);
        detail::push_unique(cs.equations, std::move(labeled));
    }
    return cs;
}

}  // namespace rk
