#ifndef RODMAT_ROOTS_HPP
#define RODMAT_ROOTS_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace rodmat {

// Yun's algorithm: p = c * prod f_i^i with f_i squarefree, monic and pairwise coprime.
inline std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& p)
{
    std::vector<std::pair<Polynomial, int>> out;
    if (p.degree() <= 0) return out;
    Polynomial P = p.monic();
    Polynomial dp = P.derivative();
    Polynomial a = gcd(P, dp);
    Polynomial b = exact_div(P, a);
    Polynomial c = exact_div(dp, a);
    Polynomial d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        a = gcd(b, d);
        if (a.degree() > 0) out.push_back({a, i});
        b = exact_div(b, a);
        c = exact_div(d, a);
        d = c - b.derivative();
        ++i;
    }
    return out;
}

inline Polynomial squarefree_part(const Polynomial& p)
{
    Polynomial out = Polynomial::constant(1);
    for (const auto& [f, k] : squarefree_decomposition(p)) out *= f;
    return out;
}

inline std::vector<Polynomial> sturm_sequence(const Polynomial& p)
{
    std::vector<Polynomial> s{p, p.derivative()};
    while (!s.back().is_zero()) {
        Polynomial r = s[s.size() - 2] % s.back();
        if (r.is_zero()) break;
        s.push_back(-r);
    }
    if (s.back().is_zero()) s.pop_back();
    return s;
}

namespace detail {

inline int sign(const Rational& x) { return sgn(x); }

inline int sign_changes(const std::vector<int>& signs)
{
    int changes = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline int variations_at(const std::vector<Polynomial>& seq, const Rational& x)
{
    std::vector<int> s;
    for (const auto& q : seq) s.push_back(sign(q.eval(x)));
    return sign_changes(s);
}

inline int variations_at_infinity(const std::vector<Polynomial>& seq, bool positive)
{
    std::vector<int> s;
    for (const auto& q : seq) {
        int sg = sign(q.leading());
        if (!positive && q.degree() % 2 == 1) sg = -sg;
        s.push_back(sg);
    }
    return sign_changes(s);
}

inline Rational cauchy_bound(const Polynomial& p)
{
    Rational m = 0;
    Rational lc = rodmat::abs(p.leading());
    for (int k = 0; k < p.degree(); ++k) m = std::max(m, Rational(rodmat::abs(p[k]) / lc));
    return m + 1;
}

// Smallest-denominator rational in the closed interval [lo, hi], lo <= hi.
inline Rational simplest_between(Rational lo, Rational hi)
{
    if (lo <= 0 && hi >= 0) return Rational(0);
    if (hi < 0) return -simplest_between(-hi, -lo);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    if (Rational(fl) == lo) return lo;
    if (Rational(fl + 1) <= hi) return Rational(fl + 1);
    // lo and hi share the integer part fl
    Rational frac_lo = lo - fl, frac_hi = hi - fl;
    Rational inner = simplest_between(1 / frac_hi, 1 / frac_lo);
    Rational out = Rational(fl) + 1 / inner;
    out.canonicalize();
    return out;
}

} // namespace detail

// Number of distinct real roots of p in (lo, hi].
inline int count_roots(const std::vector<Polynomial>& sturm, const Rational& lo, const Rational& hi)
{
    return detail::variations_at(sturm, lo) - detail::variations_at(sturm, hi);
}

inline int count_real_roots(const Polynomial& p)
{
    if (p.degree() <= 0) return 0;
    auto seq = sturm_sequence(squarefree_part(p));
    return detail::variations_at_infinity(seq, false) - detail::variations_at_infinity(seq, true);
}

// A real root, either exact or isolated in (lo, hi) with a sign change of the squarefree factor.
struct RealRoot {
    bool exact = false;
    Rational value;  // meaningful when exact
    Rational lo, hi; // isolating interval (lo == hi == value when exact)
    int multiplicity = 1;
    Polynomial factor; // squarefree factor this root belongs to

    double approx() const { return exact ? value.get_d() : Rational((lo + hi) / 2).get_d(); }
};

inline void refine(RealRoot& r, const Rational& width)
{
    if (r.exact) return;
    int shi = sgn(r.factor.eval(r.hi));
    while (r.hi - r.lo > width) {
        Rational mid = (r.lo + r.hi) / 2;
        int sm = sgn(r.factor.eval(mid));
        if (sm == 0) {
            r.exact = true;
            r.value = r.lo = r.hi = mid;
            return;
        }
        if (sm == shi) r.hi = mid;
        else r.lo = mid;
    }
}

// Real roots of a squarefree polynomial, ascending; rational roots are returned exactly.
inline std::vector<RealRoot> isolate_squarefree(const Polynomial& f, int multiplicity = 1)
{
    std::vector<RealRoot> out;
    if (f.degree() <= 0) return out;
    auto seq = sturm_sequence(f);
    Rational b = detail::cauchy_bound(f);
    std::vector<std::pair<Rational, Rational>> stack{{-b, b}};
    std::vector<std::pair<Rational, Rational>> singles;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        int n = count_roots(seq, lo, hi);
        if (n == 0) continue;
        if (n == 1) {
            singles.push_back({lo, hi});
            continue;
        }
        Rational mid = (lo + hi) / 2;
        stack.push_back({lo, mid});
        stack.push_back({mid, hi});
    }
    // Denominators of rational roots divide the leading integer coefficient L,
    // so an interval narrower than 1/L^2 contains at most one such candidate.
    auto zc = primitive_integer_coeffs(f);
    Integer L = zc.back();
    if (L < 0) L = -L;
    Rational width(1, L * L * 4);
    for (auto [lo, hi] : singles) {
        RealRoot r;
        r.factor = f;
        r.multiplicity = multiplicity;
        if (f.eval(hi) == 0) {
            r.exact = true;
            r.value = r.lo = r.hi = hi;
            out.push_back(r);
            continue;
        }
        r.lo = lo;
        r.hi = hi;
        refine(r, width);
        if (!r.exact) {
            Rational cand = detail::simplest_between(r.lo, r.hi);
            if (f.eval(cand) == 0) {
                r.exact = true;
                r.value = r.lo = r.hi = cand;
            }
        }
        refine(r, Rational(1, mpz_class(1) << 40));
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.hi < b.hi; });
    return out;
}

// All distinct real roots with multiplicities, ascending.
inline std::vector<RealRoot> real_roots(const Polynomial& p)
{
    std::vector<RealRoot> out;
    for (const auto& [f, k] : squarefree_decomposition(p)) {
        auto part = isolate_squarefree(f, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.hi < b.hi; });
    return out;
}

inline std::vector<std::pair<Rational, int>> rational_roots(const Polynomial& p)
{
    std::vector<std::pair<Rational, int>> out;
    for (const auto& r : real_roots(p))
        if (r.exact) out.push_back({r.value, r.multiplicity});
    return out;
}

} // namespace rodmat

#endif
