// Butcher tableau data model: exact order verification against rooted-tree
// conditions, the catalogue of named methods, embedded 4(3)-style pair
// construction, and serialization (structured text and LaTeX).
#pragma once

#include "rk/conditions.hpp"
#include "rk/solver.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rk {

struct TableauError : std::runtime_error {
    explicit TableauError(const std::string& what) : std::runtime_error(what) {}
};

// Explicit Runge-Kutta coefficient scheme with exact rational entries.
// The a block is ragged: row i (0-based) has i entries.
struct ButcherTableau {
    unsigned s = 0;
    std::vector<Rational> c;                // size s; c[0] == 0 for catalogue entries
    std::vector<std::vector<Rational>> a;   // ragged lower triangle
    std::vector<Rational> b;                // size s
    std::string label;
    std::optional<unsigned> nominal_order;

    Rational a_entry(unsigned i, unsigned j) const {  // 1-based, full-matrix view
        if (j >= i) return Rational(0);
        return a.at(i - 1).at(j - 1);
    }
};

struct TableauValidation {
    bool well_formed = true;
    bool row_sum_ok = true;
    std::vector<std::string> issues;
};

inline TableauValidation validate(const ButcherTableau& t) {
    TableauValidation v;
    if (t.s == 0 || t.c.size() != t.s || t.b.size() != t.s || t.a.size() != t.s) {
        v.well_formed = false;
        v.issues.push_back("dimension mismatch: need |c| = |b| = #rows(a) = s");
        return v;
    }
    for (unsigned i = 0; i < t.s; ++i)
        if (t.a[i].size() != i) {
            v.well_formed = false;
            v.issues.push_back("a row " + std::to_string(i + 1) + " must have " +
                               std::to_string(i) + " entries (strictly lower triangular)");
        }
    if (!v.well_formed) return v;
    for (unsigned i = 0; i < t.s; ++i) {
        Rational sum(0);
        for (const auto& e : t.a[i]) sum += e;
        if (sum != t.c[i]) {
            v.row_sum_ok = false;
            v.issues.push_back("row-sum violation in stage " + std::to_string(i + 1) + ": c = " +
                               to_string(t.c[i]) + " but row sums to " + to_string(sum));
        }
    }
    return v;
}

struct OrderReport {
    bool satisfied = false;
    // (condition label, exact residual); all residuals for failed checks are
    // recorded, satisfied conditions report residual 0 as well.
    std::vector<std::pair<std::string, Rational>> residuals;
};

// Exact substitution of the tableau into the rooted-tree conditions of order
// <= p. Satisfied iff every residual is exactly zero.
inline OrderReport verify_order(const ButcherTableau& t, unsigned p) {
    TableauValidation v = validate(t);
    if (!v.well_formed)
        throw TableauError("malformed tableau: " + (v.issues.empty() ? "" : v.issues.front()));

    ConditionSet cs = tree_conditions(t.s, p);
    std::vector<Rational> point(cs.ring->size(), Rational(0));
    for (unsigned i = 2; i <= t.s; ++i) {
        point[cs.ring->index(cname(i))] = t.c[i - 1];
        for (unsigned j = 1; j < i; ++j)
            point[cs.ring->index(aname(i, j))] = t.a_entry(i, j);
    }
    for (unsigned i = 1; i <= t.s; ++i) point[cs.ring->index(bname(i))] = t.b[i - 1];

    OrderReport report;
    report.satisfied = true;
    for (const auto& eq : cs.equations) {
        Rational r = eq.poly.evaluate(point);
        report.residuals.emplace_back(eq.label, r);
        if (r != 0) report.satisfied = false;
    }
    return report;
}

namespace detail {

inline ButcherTableau make_tableau(std::string label, unsigned order,
                                   std::vector<std::string> c,
                                   std::vector<std::vector<std::string>> a,
                                   std::vector<std::string> b) {
    ButcherTableau t;
    t.label = std::move(label);
    t.nominal_order = order;
    t.s = (unsigned)c.size();
    for (const auto& x : c) t.c.push_back(parse_rational(x));
    for (const auto& row : a) {
        t.a.emplace_back();
        for (const auto& x : row) t.a.back().push_back(parse_rational(x));
    }
    for (const auto& x : b) t.b.push_back(parse_rational(x));
    return t;
}

}  // namespace detail

// Named methods used throughout: the improved Euler method, Kutta's and
// Heun's third-order methods, the classic fourth-order method, Kutta's 3/8
// rule, and a third-order example at (c2, c3) = (-1, 1).
inline const std::vector<ButcherTableau>& catalogue() {
    static const std::vector<ButcherTableau> entries = {
        detail::make_tableau("improved-euler", 2, {"0", "1"}, {{}, {"1"}}, {"1/2", "1/2"}),
        detail::make_tableau("kutta3", 3, {"0", "1/2", "1"}, {{}, {"1/2"}, {"-1", "2"}},
                             {"1/6", "2/3", "1/6"}),
        detail::make_tableau("heun3", 3, {"0", "1/3", "2/3"}, {{}, {"1/3"}, {"0", "2/3"}},
                             {"1/4", "0", "3/4"}),
        detail::make_tableau("rk4", 4, {"0", "1/2", "1/2", "1"},
                             {{}, {"1/2"}, {"0", "1/2"}, {"0", "0", "1"}},
                             {"1/6", "1/3", "1/3", "1/6"}),
        detail::make_tableau("kutta38", 4, {"0", "1/3", "2/3", "1"},
                             {{}, {"1/3"}, {"-1/3", "1"}, {"1", "-1", "1"}},
                             {"1/8", "3/8", "3/8", "1/8"}),
        detail::make_tableau("rk3-nonstandard", 3, {"0", "-1", "1"},
                             {{}, {"-1"}, {"7/5", "-2/5"}},
                             {"2/3", "-1/12", "5/12"}),
    };
    return entries;
}

inline const ButcherTableau& catalogue_entry(const std::string& name) {
    for (const auto& t : catalogue())
        if (t.label == name) return t;
    throw TableauError("no catalogue entry named '" + name + "'");
}

// A p(p-1) pair: the base method plus one extra stage whose a-row is the base
// weight vector, and hat weights accurate to order p-1.
struct EmbeddedPair {
    ButcherTableau base;
    std::vector<Rational> bhat;  // size s+1
    unsigned order = 0;
    unsigned hat_order = 0;

    Rational c_extra() const {
        Rational sum(0);
        for (const auto& w : base.b) sum += w;
        return sum;
    }

    // The extended (s+1)-stage scheme with the given weight row.
    ButcherTableau extended(const std::vector<Rational>& weights, std::string label) const {
        ButcherTableau t;
        t.s = base.s + 1;
        t.c = base.c;
        t.c.push_back(c_extra());
        t.a = base.a;
        t.a.push_back(base.b);
        t.b = weights;
        t.label = std::move(label);
        return t;
    }

    // The lower-order method as a standalone (s+1)-stage tableau.
    ButcherTableau hat_method() const {
        ButcherTableau t = extended(bhat, base.label + "-hat");
        t.nominal_order = hat_order;
        return t;
    }
};

struct EmbeddedFamily {
    ButcherTableau base;
    unsigned order = 0;
    unsigned hat_order = 0;
    FamilySolution family;  // hat weights s1..s_{s+1} affine in r1

    EmbeddedPair at(const Rational& r1) const {
        std::map<std::string, Rational> values = instantiate(family, {{"r1", r1}});
        EmbeddedPair pair;
        pair.base = base;
        pair.order = order;
        pair.hat_order = hat_order;
        for (unsigned i = 1; i <= base.s + 1; ++i)
            pair.bhat.push_back(values.at("s" + std::to_string(i)));
        return pair;
    }
};

// Constructs the order-(p-1) hat-weight family for a verified order-p base
// method: append stage s+1 with a-row = b, expand the autonomous conditions
// for the extended scheme with unknown weights, and solve affinely with the
// last weight free (renamed r1).
inline EmbeddedFamily embed_lower_order(const ButcherTableau& base) {
    if (!base.nominal_order || *base.nominal_order < 2)
        throw TableauError("embed_lower_order needs a base method of known order >= 2");
    unsigned p = *base.nominal_order;
    if (!verify_order(base, p).satisfied)
        throw TableauError("base method does not satisfy its nominal order conditions");

    unsigned s_ext = base.s + 1;
    std::vector<std::string> names;
    for (unsigned i = 1; i <= s_ext; ++i) names.push_back("s" + std::to_string(i));
    names.push_back("r1");
    Ring ring = make_ring(names);

    std::vector<std::vector<MultiPoly>> a(s_ext, std::vector<MultiPoly>(s_ext, MultiPoly(ring)));
    std::vector<MultiPoly> c(s_ext, MultiPoly(ring));
    for (unsigned i = 2; i <= s_ext; ++i) {
        MultiPoly ci(ring);
        for (unsigned j = 1; j < i; ++j) {
            Rational entry = i <= base.s ? base.a_entry(i, j) : base.b[j - 1];
            a[i - 1][j - 1] = MultiPoly(ring, entry);
            ci += a[i - 1][j - 1];
        }
        c[i - 1] = ci;
    }

    unsigned hat_p = p - 1;
    std::vector<TruncatedSeries> stages = expand_stages(a, c, hat_p, true);
    TruncatedSeries rk_series(ring, hat_p);
    for (unsigned i = 1; i <= s_ext; ++i)
        rk_series =
            rk_series + stages[i - 1] * MultiPoly::variable(ring, "s" + std::to_string(i));
    TruncatedSeries target = taylor_target(ring, hat_p, true);

    std::vector<MultiPoly> eqs;
    for (const auto& [key, coef] : collect_difference(target, rk_series))
        eqs.push_back(coef.primitive_normalized());

    std::vector<std::string> unknowns(names.begin(), names.end() - 1);
    // Discover the free direction, then pin it and rename to r1.
    LinearSolution probe = linear_solve(eqs, unknowns);
    std::vector<std::string> free_unknowns;
    if (probe.status == LinearStatus::underdetermined) free_unknowns = probe.candidate_free;
    FamilySolution fam = parametrize(eqs, unknowns, free_unknowns);

    std::vector<MultiPoly> rename;
    for (std::size_t v = 0; v < ring->size(); ++v) {
        const std::string& name = ring->name(v);
        bool is_free = std::find(free_unknowns.begin(), free_unknowns.end(), name) !=
                       free_unknowns.end();
        rename.push_back(is_free ? MultiPoly::variable(ring, "r1")
                                 : MultiPoly::variable(ring, name));
    }
    FamilySolution renamed;
    renamed.ring = ring;
    for (const auto& [name, value] : fam.coefficients)
        renamed.coefficients.emplace(name, value.compose(ring, rename));
    renamed.free_vars = {"r1"};
    renamed.residuals = fam.residuals;
    detail::collect_excluded_loci(renamed);

    EmbeddedFamily out;
    out.base = base;
    out.order = p;
    out.hat_order = hat_p;
    out.family = std::move(renamed);
    return out;
}

// ---- Serialization -------------------------------------------------------
//
// Structured text form: a JSON document with rational strings only. Floating
// point is rejected on input; entries are "p/q" strings (integers may also
// appear as JSON integers).

namespace detail {

inline Rational json_rational(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational((long)j.get<long long>());
    throw TableauError("non-rational entry in " + where +
                       " (use \"p/q\" strings; floats are rejected)");
}

inline nlohmann::json rational_json(const Rational& r) { return to_string(r); }

}  // namespace detail

inline std::string to_text_form(const ButcherTableau& t,
                                const std::vector<Rational>* bhat = nullptr) {
    nlohmann::json doc;
    doc["s"] = t.s;
    for (const auto& x : t.c) doc["c"].push_back(detail::rational_json(x));
    doc["a"] = nlohmann::json::array();
    for (const auto& row : t.a) {
        nlohmann::json jrow = nlohmann::json::array();
        for (const auto& x : row) jrow.push_back(detail::rational_json(x));
        doc["a"].push_back(jrow);
    }
    for (const auto& x : t.b) doc["b"].push_back(detail::rational_json(x));
    if (bhat) {
        for (const auto& x : *bhat) doc["bhat"].push_back(detail::rational_json(x));
    }
    if (!t.label.empty()) doc["label"] = t.label;
    if (t.nominal_order) doc["order"] = *t.nominal_order;
    return doc.dump(2) + "\n";
}

inline std::string to_text_form(const EmbeddedPair& pair) {
    return to_text_form(pair.base, &pair.bhat);
}

struct TableauDocument {
    ButcherTableau tableau;
    std::optional<std::vector<Rational>> bhat;  // size s+1 when present
};

inline TableauDocument tableau_from_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw TableauError(std::string("tableau parse error: ") + e.what());
    }
    TableauDocument out;
    ButcherTableau& t = out.tableau;
    if (!doc.contains("s") || !doc["s"].is_number_integer())
        throw TableauError("tableau document needs an integer field 's'");
    t.s = doc["s"].get<unsigned>();
    for (const char* field : {"c", "a", "b"})
        if (!doc.contains(field) || !doc[field].is_array())
            throw TableauError(std::string("tableau document needs array field '") + field +
                               "'");
    for (const auto& x : doc["c"]) t.c.push_back(detail::json_rational(x, "c"));
    for (const auto& row : doc["a"]) {
        if (!row.is_array()) throw TableauError("'a' must be an array of arrays");
        t.a.emplace_back();
        for (const auto& x : row) t.a.back().push_back(detail::json_rational(x, "a"));
    }
    for (const auto& x : doc["b"]) t.b.push_back(detail::json_rational(x, "b"));
    if (doc.contains("label")) t.label = doc["label"].get<std::string>();
    if (doc.contains("order")) t.nominal_order = doc["order"].get<unsigned>();
    if (doc.contains("bhat")) {
        std::vector<Rational> bhat;
        for (const auto& x : doc["bhat"]) bhat.push_back(detail::json_rational(x, "bhat"));
        if (bhat.size() != t.s + 1)
            throw TableauError("'bhat' must have s+1 entries (the implied extra stage uses the "
                               "base weights as its a-row)");
        out.bhat = std::move(bhat);
    }
    TableauValidation v = validate(t);
    if (!v.well_formed) throw TableauError("invalid tableau: " + v.issues.front());
    return out;
}

// LaTeX array in the usual layout: c column, lower-triangular a block, rule,
// weight row, optional hat-weight row.
inline std::string to_latex(const ButcherTableau& t,
                            const std::vector<Rational>* bhat = nullptr) {
    auto frac = [](const Rational& r) {
        if (r.get_den() == 1) return r.get_num().get_str();
        std::string s = r < 0 ? "-" : "";
        Rational abs_r = r < 0 ? Rational(-r) : r;
        return s + "\\frac{" + abs_r.get_num().get_str() + "}{" + abs_r.get_den().get_str() +
               "}";
    };
    unsigned cols = bhat ? t.s + 1 : t.s;
    std::ostringstream out;
    out << "\\begin{array}{c|" << std::string(cols, 'c') << "}\n";
    for (unsigned i = 0; i < t.s; ++i) {
        out << frac(t.c[i]);
        for (unsigned j = 0; j < cols; ++j) {
            out << " & ";
            if (j < i) out << frac(t.a[i][j]);
        }
        out << " \\\\\n";
    }
    out << "\\hline\n";
    for (unsigned j = 0; j < cols; ++j) out << " & " << (j < t.s ? frac(t.b[j]) : "");
    out << " \\\\\n";
    if (bhat) {
        for (unsigned j = 0; j < cols; ++j)
            out << " & " << (j < bhat->size() ? frac((*bhat)[j]) : "");
        out << " \\\\\n";
    }
    out << "\\end{array}\n";
    return out.str();
}

}  // namespace rk
