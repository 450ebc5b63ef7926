// Formal truncated Taylor machinery for explicit Runge-Kutta derivations:
// total derivatives of y under y' = f(x,y), the bivariate stage-expansion
// template, nested stage series and term collection by elementary-differential
// monomial.
#pragma once

#include "rk/ring.hpp"

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rk {

// A partial derivative of f: (dx, dy) stands for d^(dx+dy) f / dx^dx dy^dy;
// (0,0) is f itself.
struct DerivSymbol {
    unsigned dx = 0;
    unsigned dy = 0;

    auto operator<=>(const DerivSymbol&) const = default;

    std::string name() const {
        std::string s = "F";
        s.append(dx, 'x');
        s.append(dy, 'y');
        return s;
    }
};

// Product of derivative symbols with positive exponents, canonically sorted.
using DiffMonomial = std::vector<std::pair<DerivSymbol, unsigned>>;

inline DiffMonomial diff_mono_mul(const DiffMonomial& a, const DiffMonomial& b) {
    DiffMonomial r = a;
    for (const auto& [sym, exp] : b) {
        bool merged = false;
        for (auto& [rsym, rexp] : r)
            if (rsym == sym) {
                rexp += exp;
                merged = true;
                break;
            }
        if (!merged) r.emplace_back(sym, exp);
    }
    std::sort(r.begin(), r.end());
    return r;
}

// Display order: higher derivatives first, x-partials before y-partials.
inline std::string diff_mono_to_string(const DiffMonomial& mono) {
    if (mono.empty()) return "1";
    DiffMonomial sorted = mono;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        unsigned oa = a.first.dx + a.first.dy, ob = b.first.dx + b.first.dy;
        if (oa != ob) return oa > ob;
        if (a.first.dx != b.first.dx) return a.first.dx > b.first.dx;
        return a.first.dy > b.first.dy;
    });
    std::string s;
    for (const auto& [sym, exp] : sorted) {
        if (!s.empty()) s += "*";
        s += sym.name();
        if (exp > 1) s += "^" + std::to_string(exp);
    }
    return s;
}

// Linear combination of elementary differentials with rational coefficients;
// the representation of the total derivatives F1, F2, ...
using DiffExpr = std::map<DiffMonomial, Rational>;

namespace detail {

inline void diff_expr_add(DiffExpr& e, const DiffMonomial& m, const Rational& c) {
    auto [it, inserted] = e.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) e.erase(it);
    }
}

// Total derivative along solutions: D(g) = g_x + g_y * f, extended to
// products by the Leibniz rule. In autonomous mode x-partials are dropped.
inline DiffExpr total_derivative(const DiffExpr& expr, bool autonomous) {
    DiffExpr out;
    for (const auto& [mono, coef] : expr) {
        for (std::size_t i = 0; i < mono.size(); ++i) {
            auto [sym, exp] = mono[i];
            // Remove one factor of sym.
            DiffMonomial base;
            for (std::size_t j = 0; j < mono.size(); ++j) {
                if (j == i) {
                    if (exp > 1) base.emplace_back(sym, exp - 1);
                } else {
                    base.push_back(mono[j]);
                }
            }
            Rational c = coef * (long)exp;
            if (!autonomous) {
                DiffMonomial dxm =
                    diff_mono_mul(base, {{DerivSymbol{sym.dx + 1, sym.dy}, 1}});
                diff_expr_add(out, dxm, c);
            }
            DiffMonomial dym = diff_mono_mul(
                base, {{DerivSymbol{sym.dx, sym.dy + 1}, 1}, {DerivSymbol{0, 0}, 1}});
            diff_expr_add(out, dym, c);
        }
    }
    return out;
}

}  // namespace detail

// F_1 .. F_{p-1}, the total derivatives of f along solutions of y' = f with
// every dy/dx replaced by f.
inline std::vector<DiffExpr> total_derivatives(unsigned p, bool autonomous) {
    if (p < 1) throw std::invalid_argument("total_derivatives: order must be >= 1");
    std::vector<DiffExpr> out;
    DiffExpr current{{DiffMonomial{{DerivSymbol{0, 0}, 1}}, Rational(1)}};
    for (unsigned k = 1; k < p; ++k) {
        current = detail::total_derivative(current, autonomous);
        out.push_back(current);
    }
    return out;
}

struct SeriesKey {
    unsigned h_power = 0;
    DiffMonomial mono;
    auto operator<=>(const SeriesKey&) const = default;
};

struct UnsupportedStructureError : std::runtime_error {
    explicit UnsupportedStructureError(const std::string& what) : std::runtime_error(what) {}
};

// Formal series in the step size h whose coefficients are polynomials in the
// RK unknowns attached to elementary-differential monomials. Terms with
// h-power >= cutoff are dropped by every operation.
class TruncatedSeries {
public:
    TruncatedSeries(Ring ring, unsigned cutoff) : ring_(std::move(ring)), cutoff_(cutoff) {}

    const Ring& ring() const { return ring_; }
    unsigned cutoff() const { return cutoff_; }
    const std::map<SeriesKey, MultiPoly>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    // Smallest h-power present is >= k (vacuously true for the zero series).
    bool order_at_least(unsigned k) const {
        for (const auto& [key, coef] : terms_)
            if (key.h_power < k) return false;
        return true;
    }

    void add(unsigned h_power, const DiffMonomial& mono, const MultiPoly& coef) {
        if (h_power >= cutoff_ || coef.is_zero()) return;
        SeriesKey key{h_power, mono};
        auto [it, inserted] = terms_.emplace(std::move(key), coef);
        if (!inserted) {
            it->second += coef;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TruncatedSeries operator-() const {
        TruncatedSeries r(ring_, cutoff_);
        for (const auto& [key, coef] : terms_) r.terms_.emplace(key, -coef);
        return r;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        check_compatible(a, b);
        TruncatedSeries r = a;
        for (const auto& [key, coef] : b.terms_) r.add(key.h_power, key.mono, coef);
        return r;
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a + (-b);
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        check_compatible(a, b);
        TruncatedSeries r(a.ring_, a.cutoff_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                unsigned hp = ka.h_power + kb.h_power;
                if (hp >= a.cutoff_) continue;
                r.add(hp, diff_mono_mul(ka.mono, kb.mono), ca * cb);
            }
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& s, const MultiPoly& p) {
        TruncatedSeries r(s.ring_, s.cutoff_);
        for (const auto& [key, coef] : s.terms_) r.add(key.h_power, key.mono, coef * p);
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& s, const Rational& c) {
        return s * MultiPoly(s.ring_, c);
    }

    TruncatedSeries times_h(unsigned k = 1) const {
        TruncatedSeries r(ring_, cutoff_);
        for (const auto& [key, coef] : terms_) r.add(key.h_power + k, key.mono, coef);
        return r;
    }

    TruncatedSeries truncated(unsigned new_cutoff) const {
        TruncatedSeries r(ring_, new_cutoff);
        for (const auto& [key, coef] : terms_) r.add(key.h_power, key.mono, coef);
        return r;
    }

    bool operator==(const TruncatedSeries& other) const {
        return cutoff_ == other.cutoff_ && terms_ == other.terms_;
    }

private:
    Ring ring_;
    unsigned cutoff_;
    std::map<SeriesKey, MultiPoly> terms_;

    static void check_compatible(const TruncatedSeries& a, const TruncatedSeries& b) {
        require_same_ring(a.ring_, b.ring_);
        if (a.cutoff_ != b.cutoff_)
            throw std::invalid_argument("series cutoffs differ");
    }
};

namespace detail {

inline TruncatedSeries from_diff_expr(const Ring& ring, unsigned cutoff, unsigned h_power,
                                      const DiffExpr& expr, const Rational& scale) {
    TruncatedSeries s(ring, cutoff);
    for (const auto& [mono, coef] : expr)
        s.add(h_power, mono, MultiPoly(ring, coef * scale));
    return s;
}

inline Rational factorial(unsigned n) {
    Rational r(1);
    for (unsigned i = 2; i <= n; ++i) r *= (long)i;
    return r;
}

}  // namespace detail

// The Taylor increment target (y_{n+1} - y_n)/h to order p:
//   T = F + sum_{k=1}^{p-1} h^k / (k+1)! * F_k,  truncated at h^p.
inline TruncatedSeries taylor_target(const Ring& ring, unsigned p, bool autonomous) {
    std::vector<DiffExpr> fs = total_derivatives(p, autonomous);
    TruncatedSeries t(ring, p);
    t.add(0, DiffMonomial{{DerivSymbol{0, 0}, 1}}, MultiPoly(ring, Rational(1)));
    for (unsigned k = 1; k < p; ++k) {
        Rational scale = Rational(1) / detail::factorial(k + 1);
        t = t + detail::from_diff_expr(ring, p, k, fs[k - 1], scale);
    }
    return t;
}

// Bivariate Taylor expansion of f about (x, y) with offsets (x_off, y_off),
// to total offset degree p-1:
//   sum_{i+j <= p-1} 1/(i! j!) * d^{i+j}f/dx^i dy^j * x_off^i * y_off^j.
// Offsets must be O(h); the result is evaluated with truncating arithmetic.
inline TruncatedSeries stage_template(unsigned p, bool autonomous,
                                      const TruncatedSeries& x_off,
                                      const TruncatedSeries& y_off) {
    if (!x_off.order_at_least(1) || !y_off.order_at_least(1))
        throw std::invalid_argument("stage offsets must vanish at h^0");
    const Ring& ring = x_off.ring();
    unsigned cutoff = x_off.cutoff();
    TruncatedSeries result(ring, cutoff);
    MultiPoly one(ring, Rational(1));

    std::vector<TruncatedSeries> x_pows, y_pows;
    TruncatedSeries unit(ring, cutoff);
    unit.add(0, DiffMonomial{}, one);
    x_pows.push_back(unit);
    y_pows.push_back(unit);
    for (unsigned d = 1; d < p; ++d) {
        x_pows.push_back(x_pows.back() * x_off);
        y_pows.push_back(y_pows.back() * y_off);
    }

    for (unsigned i = 0; i + 1 <= p; ++i) {
        if (autonomous && i > 0) break;
        for (unsigned j = 0; i + j + 1 <= p; ++j) {
            Rational scale = Rational(1) / (detail::factorial(i) * detail::factorial(j));
            TruncatedSeries prod = x_pows[i] * y_pows[j];
            TruncatedSeries with_symbol(ring, cutoff);
            DiffMonomial sym{{DerivSymbol{i, j}, 1}};
            for (const auto& [key, coef] : prod.terms())
                with_symbol.add(key.h_power, diff_mono_mul(key.mono, sym), coef * scale);
            result = result + with_symbol;
        }
    }
    return result;
}

// Stage series k_1..k_s for an explicit method with symbolic coefficient
// matrix a (s x s, strictly lower triangular) and nodes c, truncated at h^p.
inline std::vector<TruncatedSeries> expand_stages(const std::vector<std::vector<MultiPoly>>& a,
                                                  const std::vector<MultiPoly>& c, unsigned p,
                                                  bool autonomous) {
    std::size_t s = a.size();
    if (c.size() != s) throw std::invalid_argument("expand_stages: |c| must equal stage count");
    Ring ring;
    for (const auto& row : a) {
        if (row.size() != s)
            throw std::invalid_argument("expand_stages: a must be square");
        for (const auto& entry : row)
            if (!ring && entry.ring()) ring = entry.ring();
    }
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i; j < s; ++j)
            if (!a[i][j].is_zero())
                throw UnsupportedStructureError(
                    "expand_stages: coefficient matrix is not strictly lower triangular");
    if (!ring) throw std::invalid_argument("expand_stages: no ring available");

    std::vector<TruncatedSeries> stages;
    for (std::size_t i = 0; i < s; ++i) {
        TruncatedSeries x_off(ring, p), y_off(ring, p);
        if (!autonomous) x_off.add(1, DiffMonomial{}, c[i]);
        for (std::size_t j = 0; j < i; ++j)
            y_off = y_off + (stages[j] * a[i][j]).times_h(1);
        stages.push_back(stage_template(p, autonomous, x_off, y_off));
    }
    return stages;
}

// Coefficient of every (h-power, elementary differential) pair in T - RK.
inline std::map<SeriesKey, MultiPoly> collect_difference(const TruncatedSeries& taylor,
                                                         const TruncatedSeries& rk) {
    return (taylor - rk).terms();
}

}  // namespace rk
