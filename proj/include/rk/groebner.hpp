// Multivariate division, Buchberger's algorithm and interreduction. The
// systems this library meets are tiny (at most 19 generators in 13
// variables), so the classic algorithm with Buchberger's two pair-elimination
// criteria is entirely sufficient.
#pragma once

#include "rk/ring.hpp"

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace rk {

// Normal form of p after multivariate division by basis. No term of the
// result is divisible by any basis leading term. If quotients is non-null it
// receives one polynomial per basis element such that
//   p = sum(quotients[i] * basis[i]) + result.
inline MultiPoly poly_reduce(const MultiPoly& p, const std::vector<MultiPoly>& basis,
                             MonomialOrder ord, std::vector<MultiPoly>* quotients = nullptr) {
    for (const auto& b : basis) require_same_ring(p.ring(), b.ring());
    if (quotients) quotients->assign(basis.size(), MultiPoly(p.ring()));

    MultiPoly rest = p;
    MultiPoly remainder(p.ring());
    while (!rest.is_zero()) {
        auto [lm, lc] = rest.leading_term(ord);
        bool divided = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].is_zero()) continue;
            auto [blm, blc] = basis[i].leading_term(ord);
            if (!blm.divides(lm)) continue;
            MultiPoly q = MultiPoly::term(p.ring(), lm / blm, lc / blc);
            rest -= q * basis[i];
            if (quotients) (*quotients)[i] += q;
            divided = true;
            break;
        }
        if (!divided) {
            MultiPoly t = MultiPoly::term(p.ring(), lm, lc);
            remainder += t;
            rest -= t;
        }
    }
    return remainder;
}

inline MultiPoly s_polynomial(const MultiPoly& f, const MultiPoly& g, MonomialOrder ord) {
    require_same_ring(f.ring(), g.ring());
    auto [lmf, lcf] = f.leading_term(ord);
    auto [lmg, lcg] = g.leading_term(ord);
    Monomial l = Monomial::lcm(lmf, lmg);
    MultiPoly a = MultiPoly::term(f.ring(), l / lmf, Rational(1) / lcf);
    MultiPoly b = MultiPoly::term(g.ring(), l / lmg, Rational(1) / lcg);
    return a * f - b * g;
}

namespace detail {

// Fraction-free reduction engine: reduce(p) is proportional to
// poly_reduce(p, basis, ord) but works on integer coefficients (clearing
// denominators instead of dividing), keeps the working terms sorted by ord,
// and strips the content whenever the coefficients grow. Buchberger's
// algorithm only ever needs remainders up to scale, and on the elimination
// systems this library meets the rational arithmetic of poly_reduce is
// orders of magnitude slower. The prepared reducers persist across calls.
class NormalFormer {
public:
    explicit NormalFormer(MonomialOrder ord) : ord_(ord) {}

    static constexpr std::size_t no_skip = static_cast<std::size_t>(-1);

    void add(const MultiPoly& b) {
        if (b.is_zero()) return;
        if (!ring_) ring_ = b.ring();
        require_same_ring(ring_, b.ring());
        MultiPoly bi = b.primitive_normalized();
        Reducer red;
        red.lm = bi.leading_term(ord_).first;
        for (const auto& [m, c] : bi.terms())
            if (m == red.lm) red.lc = c.get_num();
            else red.tail.emplace_back(m, c.get_num());
        std::sort(red.tail.begin(), red.tail.end(), [&](const auto& a, const auto& b2) {
            return mono_less(b2.first, a.first, ord_);
        });
        reducers_.push_back(std::move(red));
    }

    std::size_t size() const { return reducers_.size(); }

    // Normal form of p, primitive-normalized; reducer `skip` is ignored
    // (used when interreducing a set against itself).
    MultiPoly reduce(const MultiPoly& p, std::size_t skip = no_skip) const {
        if (p.is_zero()) return p;
        require_same_ring(ring_ ? ring_ : p.ring(), p.ring());

        auto desc = [this](const Monomial& a, const Monomial& b) {
            return mono_less(b, a, ord_);
        };
        std::map<Monomial, mpz_class, decltype(desc)> rest(desc), remainder(desc);
        {
            MultiPoly pi = p.primitive_normalized();
            for (const auto& [m, c] : pi.terms()) rest.emplace(m, c.get_num());
        }

        auto strip_content = [&] {
            mpz_class g(0);
            for (const auto& [m, c] : rest) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            for (const auto& [m, c] : remainder)
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g > 1) {
                for (auto& [m, c] : rest) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
                for (auto& [m, c] : remainder)
                    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
            }
        };

        long steps = 0;
        while (!rest.empty()) {
            Monomial lm = rest.begin()->first;
            mpz_class lc = rest.begin()->second;
            const Reducer* hit = nullptr;
            for (std::size_t i = 0; i < reducers_.size(); ++i) {
                if (i == skip) continue;
                if (reducers_[i].lm.divides(lm)) { hit = &reducers_[i]; break; }
            }
            if (!hit) {
                remainder.emplace(std::move(lm), std::move(lc));
                rest.erase(rest.begin());
                continue;
            }
            // rest := (blc/g)*rest - (lc/g)*(lm/blm)*b, cancelling the lead.
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), lc.get_mpz_t(), hit->lc.get_mpz_t());
            mpz_class scale_rest = hit->lc / g;
            if (scale_rest < 0) { scale_rest = -scale_rest; g = -g; }
            mpz_class scale_b = lc / g;
            if (scale_rest != 1) {
                for (auto& [m, c] : rest) c *= scale_rest;
                for (auto& [m, c] : remainder) c *= scale_rest;
            }
            rest.erase(rest.begin());
            Monomial shift = lm / hit->lm;
            for (const auto& [m, c] : hit->tail) {
                Monomial mm = m * shift;
                auto [it, inserted] = rest.emplace(std::move(mm), -scale_b * c);
                if (!inserted) {
                    it->second -= scale_b * c;
                    if (it->second == 0) rest.erase(it);
                }
            }
            if (++steps % 16 == 0) strip_content();
        }

        MultiPoly out(p.ring());
        for (const auto& [m, c] : remainder) out += MultiPoly::term(p.ring(), m, Rational(c));
        if (out.is_zero()) return out;
        return out.primitive_normalized();
    }

private:
    struct Reducer {
        Monomial lm;
        std::vector<std::pair<Monomial, mpz_class>> tail;  // descending, without lm
        mpz_class lc;
    };
    MonomialOrder ord_;
    Ring ring_;
    std::vector<Reducer> reducers_;
};

inline MultiPoly gb_normal_form(const MultiPoly& p, const std::vector<MultiPoly>& basis,
                                MonomialOrder ord) {
    NormalFormer nf(ord);
    for (const auto& b : basis) nf.add(b);
    return nf.reduce(p);
}

// Interreduce a generating set: replace each element by its normal form
// against the others (dropping it when that is zero) until stable. The
// replacement is again a combination of the set, so the generated ideal is
// unchanged; at the fixpoint no term of any element is divisible by another
// element's leading term.
inline std::vector<MultiPoly> autoreduce(std::vector<MultiPoly> basis, MonomialOrder ord) {
    std::erase_if(basis, [](const MultiPoly& p) { return p.is_zero(); });
    for (auto& p : basis) p = p.primitive_normalized();
    bool changed = true;
    while (changed) {
        changed = false;
        NormalFormer nf(ord);
        for (const auto& p : basis) nf.add(p);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            MultiPoly r = nf.reduce(basis[i], i);
            if (r.is_zero()) {
                basis.erase(basis.begin() + (long)i);
                changed = true;
                break;
            }
            if (!(r == basis[i])) {
                basis[i] = r;
                changed = true;
                break;
            }
        }
    }
    return basis;
}

// Core of Buchberger's algorithm with the Gebauer-Moeller pair criteria and
// normal selection (smallest pair lcm degree first). `stop` is consulted
// whenever the working basis changes; returning true ends the run early with
// the partial basis, which generates a subideal of <gens>. With a
// never-stopping callback the returned set is a (non-reduced) Groebner basis.
template <typename StopFn>
std::vector<MultiPoly> buchberger_run(const std::vector<MultiPoly>& gens, MonomialOrder ord,
                                      StopFn stop) {
    std::vector<MultiPoly> basis;
    for (const auto& g : gens) {
        if (!basis.empty()) require_same_ring(basis.front().ring(), g.ring());
        if (!g.is_zero()) basis.push_back(g.primitive_normalized());
    }
    if (basis.empty()) return basis;
    basis = autoreduce(std::move(basis), ord);

    std::vector<Monomial> lms;
    for (const auto& p : basis) lms.push_back(p.leading_term(ord).first);

    struct Pair {
        std::size_t i, j;
        Monomial lcm;
    };
    std::vector<Pair> pending;
    auto pair_less = [&](const Pair& a, const Pair& b) {
        if (a.lcm.total_degree() != b.lcm.total_degree())
            return a.lcm.total_degree() < b.lcm.total_degree();
        return mono_less(a.lcm, b.lcm, ord);
    };

    // Gebauer-Moeller update: adjoin element t, pruning redundant pairs.
    auto update_pairs = [&](std::size_t t) {
        // B-criterion against the surviving old pairs.
        std::erase_if(pending, [&](const Pair& p) {
            return lms[t].divides(p.lcm) && Monomial::lcm(lms[p.i], lms[t]) != p.lcm &&
                   Monomial::lcm(lms[p.j], lms[t]) != p.lcm;
        });
        std::vector<Pair> fresh;
        for (std::size_t i = 0; i < t; ++i) fresh.push_back({i, t, Monomial::lcm(lms[i], lms[t])});
        // M-criterion: drop a new pair whose lcm another new pair's lcm
        // strictly divides; F-criterion: keep one pair per lcm value.
        std::vector<Pair> kept;
        for (std::size_t a = 0; a < fresh.size(); ++a) {
            bool drop = false;
            for (std::size_t b = 0; b < fresh.size() && !drop; ++b) {
                if (a == b) continue;
                if (fresh[b].lcm == fresh[a].lcm) {
                    if (b < a) drop = true;
                } else if (fresh[b].lcm.divides(fresh[a].lcm)) {
                    drop = true;
                }
            }
            if (!drop) kept.push_back(fresh[a]);
        }
        // Coprime criterion.
        for (auto& p : kept)
            if (!(p.lcm == lms[p.i] * lms[p.j])) pending.push_back(std::move(p));
    };

    NormalFormer nf(ord);
    auto restart_from = [&](std::vector<MultiPoly> set) {
        basis.clear();
        lms.clear();
        pending.clear();
        nf = NormalFormer(ord);
        for (auto& p : set) {
            basis.push_back(std::move(p));
            lms.push_back(basis.back().leading_term(ord).first);
            nf.add(basis.back());
            update_pairs(basis.size() - 1);
        }
    };
    restart_from(std::move(basis));
    if (stop(basis, nf)) return basis;

    // When the working basis outgrows the interreduced set it came from,
    // compress: interreduce and restart the pair queue. Without this the
    // denser starting systems (the combined autonomous conditions) push the
    // basis into hundreds of elements with enormous unreduced tails. The
    // zero-reductions already performed are repeated after a restart, but
    // against a far tighter basis they are cheap.
    std::size_t compress_at = 2 * basis.size() + 8;
    while (!pending.empty()) {
        auto chosen = std::min_element(pending.begin(), pending.end(), pair_less);
        Pair p = *chosen;
        pending.erase(chosen);
        MultiPoly r = nf.reduce(s_polynomial(basis[p.i], basis[p.j], ord));
        if (r.is_zero()) continue;
        basis.push_back(std::move(r));
        lms.push_back(basis.back().leading_term(ord).first);
        nf.add(basis.back());
        update_pairs(basis.size() - 1);
        if (basis.size() >= compress_at) {
            restart_from(autoreduce(std::move(basis), ord));
            compress_at = 2 * basis.size() + 8;
        }
        if (stop(basis, nf)) return basis;
    }
    return basis;
}

}  // namespace detail

// Groebner basis of <gens> under ord: Buchberger's algorithm with the
// Gebauer-Moeller pair criteria, normal selection (smallest pair lcm degree
// first) and the fraction-free reducer above. The input is interreduced
// before the pair loop and the final basis is interreduced again, so the
// result is the unique reduced Groebner basis of <gens>.
inline std::vector<MultiPoly> buchberger(const std::vector<MultiPoly>& gens, MonomialOrder ord) {
    auto never = [](const std::vector<MultiPoly>&, const detail::NormalFormer&) { return false; };
    return detail::autoreduce(detail::buchberger_run(gens, ord, never), ord);
}

// Interreduced form of the generating set: monic elements, no term of any
// element divisible by another's leading term, sorted by ascending leading
// monomial. Generates the same ideal as <gens>. Note this interreduces the
// given generators only (it adjoins no S-polynomial remainders), so the
// result is a Groebner basis only when the input already was one; use
// buchberger() for ideal-membership questions.
inline std::vector<MultiPoly> interreduce(const std::vector<MultiPoly>& gens, MonomialOrder ord) {
    std::vector<MultiPoly> minimal;
    for (const auto& g : gens) {
        if (!minimal.empty()) require_same_ring(minimal.front().ring(), g.ring());
        if (!g.is_zero()) minimal.push_back(g.primitive_normalized());
    }
    minimal = detail::autoreduce(std::move(minimal), ord);
    for (auto& p : minimal) p = p.monic(ord);
    std::sort(minimal.begin(), minimal.end(), [&](const MultiPoly& a, const MultiPoly& b) {
        return mono_less(a.leading_term(ord).first, b.leading_term(ord).first, ord);
    });
    return minimal;
}

inline bool in_ideal(const MultiPoly& p, const std::vector<MultiPoly>& groebner_basis,
                     MonomialOrder ord) {
    return detail::gb_normal_form(p, groebner_basis, ord).is_zero();
}

// True iff every member of `targets` lies in the ideal <gens>. A reduction
// to zero against any partial Buchberger basis is already a membership
// certificate (the partial basis is a subset of the ideal), so the run stops
// as soon as all targets are certified; only a negative answer requires the
// completed Groebner basis.
inline bool ideal_contains(const std::vector<MultiPoly>& gens,
                           const std::vector<MultiPoly>& targets, MonomialOrder ord) {
    std::vector<MultiPoly> open;
    for (const auto& t : targets)
        if (!t.is_zero()) open.push_back(t);
    if (open.empty()) return true;
    auto certified = [&](const std::vector<MultiPoly>&, const detail::NormalFormer& nf) {
        std::erase_if(open, [&](const MultiPoly& t) { return nf.reduce(t).is_zero(); });
        return open.empty();
    };
    detail::buchberger_run(gens, ord, certified);
    return open.empty();
}

// Two generating sets span the same ideal iff each generator of one reduces
// to zero against a (possibly partial) Groebner basis of the other.
inline bool ideal_equal(const std::vector<MultiPoly>& gens_a,
                        const std::vector<MultiPoly>& gens_b, MonomialOrder ord) {
    return ideal_contains(gens_a, gens_b, ord) && ideal_contains(gens_b, gens_a, ord);
}

}  // namespace rk
