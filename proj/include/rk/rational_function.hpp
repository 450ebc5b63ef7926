// Quotients of multivariate polynomials. There is deliberately no full
// multivariate GCD: equality and zero-tests go through cross-multiplication,
// which is all the coefficient families in this library need. A light
// normalization (content and common monomial factors) keeps sizes in check.
#pragma once

#include "rk/ring.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rk {

struct ZeroDenominatorError : std::runtime_error {
    ZeroDenominatorError() : std::runtime_error("rational function with zero denominator") {}
};

struct ExcludedLocusError : std::runtime_error {
    explicit ExcludedLocusError(const std::string& locus)
        : std::runtime_error("substitution lies on excluded locus: " + locus) {}
};

class RationalFunction {
public:
    RationalFunction() = default;

    explicit RationalFunction(MultiPoly num)
        : num_(std::move(num)), den_(num_.ring(), Rational(1)) {}

    RationalFunction(MultiPoly num, MultiPoly den)
        : num_(std::move(num)), den_(std::move(den)) {
        require_same_ring(num_.ring(), den_.ring());
        if (den_.is_zero()) throw ZeroDenominatorError();
        normalize();
    }

    static RationalFunction constant(const Ring& ring, const Rational& value) {
        return RationalFunction(MultiPoly(ring, value));
    }

    static RationalFunction variable(const Ring& ring, const std::string& name) {
        return RationalFunction(MultiPoly::variable(ring, name));
    }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const Ring& ring() const { return num_.ring(); }

    bool is_zero() const { return num_.is_zero(); }

    bool is_polynomial() const { return den_.is_constant(); }

    // Valid when is_polynomial().
    MultiPoly as_polynomial() const {
        if (!is_polynomial()) throw std::logic_error("rational function is not a polynomial");
        return num_ * (Rational(1) / den_.constant_value());
    }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw ZeroDenominatorError();
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

    // p/q == r/s iff p*s == r*q.
    bool equals(const RationalFunction& other) const {
        return num_ * other.den_ == other.num_ * den_;
    }

    RationalFunction compose(const Ring& target, const std::vector<MultiPoly>& images) const {
        return RationalFunction(num_.compose(target, images), den_.compose(target, images));
    }

    Rational evaluate(const std::vector<Rational>& point) const {
        Rational d = den_.evaluate(point);
        if (d == 0) throw ExcludedLocusError(den_.to_string());
        return num_.evaluate(point) / d;
    }

    std::string to_string() const {
        if (is_polynomial()) return as_polynomial().to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    MultiPoly num_, den_;

    void normalize() {
        if (num_.is_zero()) {
            den_ = MultiPoly(num_.ring(), Rational(1));
            return;
        }
        // Cancel the common monomial factor.
        Monomial common{std::vector<unsigned>(num_.ring()->size(), 0u)};
        bool first = true;
        auto fold = [&](const MultiPoly& p) {
            for (const auto& [m, c] : p.terms()) {
                if (first) {
                    common = m;
                    first = false;
                } else {
                    for (std::size_t i = 0; i < common.exps.size(); ++i)
                        common.exps[i] = std::min(common.exps[i], m.exps[i]);
                }
            }
        };
        fold(num_);
        fold(den_);
        if (!common.is_one()) {
            auto strip = [&](const MultiPoly& p) {
                MultiPoly r(p.ring());
                for (const auto& [m, c] : p.terms())
                    r += MultiPoly::term(p.ring(), m / common, c);
                return r;
            };
            num_ = strip(num_);
            den_ = strip(den_);
        }
        // Make the denominator primitive with positive leading coefficient
        // and fold the scale into the numerator.
        MultiPoly den_norm = den_.primitive_normalized();
        Rational scale =
            den_norm.leading_term(MonomialOrder::grlex).second /
            den_.leading_term(MonomialOrder::grlex).second;
        num_ = num_ * scale;
        den_ = den_norm;
    }
};

// Substitutes rational functions for variables in a polynomial. Variables
// absent from the map are left alone.
inline RationalFunction substitute(const MultiPoly& p,
                                   const std::map<std::string, RationalFunction>& values) {
    const Ring& ring = p.ring();
    RationalFunction sum = RationalFunction::constant(ring, Rational(0));
    for (const auto& [m, c] : p.terms()) {
        RationalFunction term = RationalFunction::constant(ring, c);
        for (std::size_t i = 0; i < m.exps.size(); ++i) {
            if (m.exps[i] == 0) continue;
            auto it = values.find(ring->name(i));
            RationalFunction base = it != values.end()
                                        ? it->second
                                        : RationalFunction::variable(ring, ring->name(i));
            for (unsigned e = 0; e < m.exps[i]; ++e) term *= base;
        }
        sum += term;
    }
    return sum;
}

inline RationalFunction substitute(const RationalFunction& f,
                                   const std::map<std::string, RationalFunction>& values) {
    return substitute(f.num(), values) / substitute(f.den(), values);
}

}  // namespace rk
