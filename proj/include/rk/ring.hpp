// Multivariate polynomial ring over the exact rationals: variable tables,
// exponent-vector monomials, monomial orders (lex / graded lex) and the
// MultiPoly arithmetic everything else is built on.
#pragma once

#include "rk/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rk {

struct RingMismatchError : std::runtime_error {
    RingMismatchError() : std::runtime_error("polynomials belong to different rings") {}
};

// Immutable ordered list of variable names. The order is significant: both
// monomial orders tie-break by it, so it is fixed at construction.
class VarTable {
public:
    explicit VarTable(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second)
                throw std::invalid_argument("duplicate variable name: " + names_[i]);
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t index(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::out_of_range("unknown variable: " + name);
        return it->second;
    }

    bool operator==(const VarTable& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
};

using Ring = std::shared_ptr<const VarTable>;

inline Ring make_ring(std::vector<std::string> names) {
    return std::make_shared<const VarTable>(std::move(names));
}

inline bool same_ring(const Ring& a, const Ring& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_ring(const Ring& a, const Ring& b) {
    if (!same_ring(a, b)) throw RingMismatchError();
}

// Exponent vector; length always equals the ring's variable count.
struct Monomial {
    std::vector<unsigned> exps;

    auto operator<=>(const Monomial&) const = default;

    unsigned total_degree() const {
        return std::accumulate(exps.begin(), exps.end(), 0u);
    }

    bool is_one() const {
        return std::all_of(exps.begin(), exps.end(), [](unsigned e) { return e == 0; });
    }

    bool divides(const Monomial& other) const {
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > other.exps[i]) return false;
        return true;
    }

    Monomial operator*(const Monomial& other) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += other.exps[i];
        return r;
    }

    // Assumes other.divides(*this).
    Monomial operator/(const Monomial& other) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] -= other.exps[i];
        return r;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (std::size_t i = 0; i < r.exps.size(); ++i)
            r.exps[i] = std::max(a.exps[i], b.exps[i]);
        return r;
    }
};

enum class MonomialOrder { lex, grlex };

// true iff a < b under ord. A variable listed earlier in the VarTable is the
// larger one, matching the usual CAS convention.
inline bool mono_less(const Monomial& a, const Monomial& b, MonomialOrder ord) {
    if (ord == MonomialOrder::grlex) {
        unsigned da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
    }
    for (std::size_t i = 0; i < a.exps.size(); ++i)
        if (a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i];
    return false;
}

class MultiPoly {
public:
    MultiPoly() = default;
    explicit MultiPoly(Ring ring) : ring_(std::move(ring)) {}

    MultiPoly(Ring ring, const Rational& constant) : ring_(std::move(ring)) {
        if (constant != 0) terms_.emplace(one_mono(), constant);
    }

    static MultiPoly variable(const Ring& ring, const std::string& name) {
        MultiPoly p(ring);
        Monomial m{std::vector<unsigned>(ring->size(), 0)};
        m.exps[ring->index(name)] = 1;
        p.terms_.emplace(std::move(m), Rational(1));
        return p;
    }

    static MultiPoly term(const Ring& ring, Monomial mono, const Rational& coef) {
        MultiPoly p(ring);
        if (mono.exps.size() != ring->size())
            throw std::invalid_argument("monomial length does not match ring");
        if (coef != 0) p.terms_.emplace(std::move(mono), coef);
        return p;
    }

    const Ring& ring() const { return ring_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("polynomial is not constant");
        return terms_.begin()->second;
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& other) {
        require_same_ring(ring_, other.ring_);
        for (const auto& [m, c] : other.terms_) {
            auto [it, inserted] = terms_.emplace(m, c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }

    MultiPoly& operator-=(const MultiPoly& other) { return *this += -other; }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        require_same_ring(a.ring_, b.ring_);
        MultiPoly r(a.ring_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma * mb;
                auto [it, inserted] = r.terms_.emplace(std::move(m), ca * cb);
                if (!inserted) {
                    it->second += ca * cb;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        return r;
    }

    MultiPoly& operator*=(const MultiPoly& other) { return *this = *this * other; }

    friend MultiPoly operator*(const MultiPoly& p, const Rational& s) {
        MultiPoly r(p.ring_);
        if (s == 0) return r;
        r.terms_ = p.terms_;
        for (auto& [m, c] : r.terms_) c *= s;
        return r;
    }
    friend MultiPoly operator*(const Rational& s, const MultiPoly& p) { return p * s; }

    MultiPoly pow(unsigned e) const {
        MultiPoly r(ring_, Rational(1));
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    bool operator==(const MultiPoly& other) const {
        require_same_ring(ring_, other.ring_);
        return terms_ == other.terms_;
    }

    // Equality up to a nonzero rational scalar.
    bool proportional(const MultiPoly& other) const {
        require_same_ring(ring_, other.ring_);
        if (is_zero() || other.is_zero()) return is_zero() && other.is_zero();
        if (terms_.size() != other.terms_.size()) return false;
        auto it = terms_.begin();
        auto jt = other.terms_.begin();
        Rational scale = jt->second / it->second;
        for (; it != terms_.end(); ++it, ++jt) {
            if (it->first != jt->first) return false;
            if (it->second * scale != jt->second) return false;
        }
        return true;
    }

    std::pair<Monomial, Rational> leading_term(MonomialOrder ord) const {
        if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (mono_less(best->first, it->first, ord)) best = it;
        return {best->first, best->second};
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.exps[var]);
        return d;
    }

    // Joint degree in a set of variables (max per-term sum of their exponents).
    unsigned joint_degree(const std::vector<std::size_t>& vars) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) {
            unsigned t = 0;
            for (std::size_t v : vars) t += m.exps[v];
            d = std::max(d, t);
        }
        return d;
    }

    // Ring homomorphism: variable i is replaced by images[i] (a polynomial in
    // the target ring). Used for row-sum substitution and variable renaming.
    MultiPoly compose(const Ring& target, const std::vector<MultiPoly>& images) const {
        if (images.size() != ring_->size())
            throw std::invalid_argument("compose: one image per variable required");
        MultiPoly r(target);
        for (const auto& [m, c] : terms_) {
            MultiPoly t(target, c);
            for (std::size_t i = 0; i < m.exps.size(); ++i)
                if (m.exps[i] > 0) t = t * images[i].pow(m.exps[i]);
            r += t;
        }
        return r;
    }

    MultiPoly substitute(const std::string& var, const MultiPoly& value) const {
        require_same_ring(ring_, value.ring());
        std::vector<MultiPoly> images;
        images.reserve(ring_->size());
        for (std::size_t i = 0; i < ring_->size(); ++i)
            images.push_back(i == ring_->index(var) ? value
                                                    : MultiPoly::variable(ring_, ring_->name(i)));
        return compose(ring_, images);
    }

    Rational evaluate(const std::vector<Rational>& point) const {
        if (point.size() != ring_->size())
            throw std::invalid_argument("evaluate: one value per variable required");
        Rational sum(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < m.exps.size(); ++i)
                for (unsigned e = 0; e < m.exps[i]; ++e) t *= point[i];
            sum += t;
        }
        return sum;
    }

    // Integer coefficients with content 1 and positive graded-lex leading
    // coefficient; the canonical representative of the scalar-multiple class.
    MultiPoly primitive_normalized() const {
        if (is_zero()) return *this;
        mpz_class den_lcm(1), num_gcd(0);
        for (const auto& [m, c] : terms_) {
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        }
        Rational scale(den_lcm, num_gcd);
        scale.canonicalize();
        if (leading_term(MonomialOrder::grlex).second < 0) scale = -scale;
        return *this * scale;
    }

    MultiPoly monic(MonomialOrder ord) const {
        if (is_zero()) return *this;
        return *this * (Rational(1) / leading_term(ord).second);
    }

    std::string to_string() const;
    static MultiPoly parse(const Ring& ring, const std::string& text);

private:
    Ring ring_;
    std::map<Monomial, Rational> terms_;

    Monomial one_mono() const { return Monomial{std::vector<unsigned>(ring_->size(), 0)}; }
};

inline std::string MultiPoly::to_string() const {
    if (is_zero()) return "0";
    // Terms printed in descending graded-lex order.
    std::vector<const std::pair<const Monomial, Rational>*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
        return mono_less(b->first, a->first, MonomialOrder::grlex);
    });
    std::ostringstream out;
    bool first = true;
    for (auto* t : order) {
        Rational c = t->second;
        if (first) {
            if (c < 0) { out << "-"; c = -c; }
        } else {
            out << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        std::vector<std::string> factors;
        if (c != 1 || t->first.is_one()) factors.push_back(rk::to_string(c));
        for (std::size_t i = 0; i < t->first.exps.size(); ++i) {
            unsigned e = t->first.exps[i];
            if (e == 0) continue;
            if (e == 1) factors.push_back(ring_->name(i));
            else factors.push_back(ring_->name(i) + "^" + std::to_string(e));
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out << "*";
            out << factors[i];
        }
    }
    return out.str();
}

namespace detail {

struct PolyParser {
    const Ring& ring;
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; }

    bool eat(char ch) {
        skip_ws();
        if (pos < text.size() && text[pos] == ch) { ++pos; return true; }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("polynomial parse error at position " +
                                    std::to_string(pos) + ": " + what);
    }

    std::string read_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected digits");
        return text.substr(start, pos - start);
    }

    std::string read_name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected variable name");
        return text.substr(start, pos - start);
    }

    MultiPoly parse_factor() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char ch = text[pos];
        if (ch == '(') {
            ++pos;
            MultiPoly p = parse_poly();
            if (!eat(')')) fail("expected ')'");
            if (eat('^')) return p.pow((unsigned)std::stoul(read_number()));
            return p;
        }
        if (std::isdigit((unsigned char)ch)) {
            std::string num = read_number();
            if (eat('/')) num += "/" + read_number();
            return MultiPoly(ring, parse_rational(num));
        }
        if (std::isalpha((unsigned char)ch) || ch == '_') {
            std::string name = read_name();
            if (!ring->contains(name)) fail("unknown variable '" + name + "'");
            MultiPoly v = MultiPoly::variable(ring, name);
            if (eat('^')) {
                unsigned e = (unsigned)std::stoul(read_number());
                return v.pow(e);
            }
            return v;
        }
        fail("unexpected character");
    }

    MultiPoly parse_term() {
        MultiPoly p = parse_factor();
        while (eat('*')) p = p * parse_factor();
        return p;
    }

    MultiPoly parse_poly() {
        MultiPoly p(ring);
        bool negate = false;
        skip_ws();
        if (eat('-')) negate = true;
        else eat('+');
        MultiPoly t = parse_term();
        p += negate ? -t : t;
        for (;;) {
            skip_ws();
            if (pos >= text.size() || text[pos] == ')') break;
            if (eat('-')) negate = true;
            else if (eat('+')) negate = false;
            else fail("expected '+' or '-'");
            t = parse_term();
            p += negate ? -t : t;
        }
        return p;
    }
};

}  // namespace detail

inline MultiPoly MultiPoly::parse(const Ring& ring, const std::string& text) {
    std::string trimmed;
    for (char ch : text) trimmed += ch;
    detail::PolyParser parser{ring, trimmed};
    parser.skip_ws();
    if (parser.pos >= trimmed.size())
        throw std::invalid_argument("polynomial parse error: empty input");
    if (trimmed.find_first_not_of(" \t0") == std::string::npos) return MultiPoly(ring);
    MultiPoly p = parser.parse_poly();
    parser.skip_ws();
    if (parser.pos != trimmed.size()) parser.fail("trailing input");
    return p;
}

}  // namespace rk
