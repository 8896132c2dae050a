#ifndef RODMAT_LAURENT_HPP
#define RODMAT_LAURENT_HPP

#include <algorithm>
#include <vector>

#include "rational_function.hpp"

namespace rodmat {

// Truncated expansion sum_k c_k z^k at infinity, k from k_max down to k_min.
struct LaurentTail {
    int k_max = 0;
    std::vector<Rational> c; // c[i] is the coefficient of z^(k_max - i)

    bool empty() const { return c.empty(); }
    int k_min() const { return k_max - static_cast<int>(c.size()) + 1; }

    // Powers above k_max are zero; asking below the truncation is an error.
    Rational coeff(int k) const
    {
        if (c.empty() || k > k_max) return Rational(0);
        if (k < k_min()) throw Error(ErrorKind::InvalidArgument, "Laurent coefficient below truncation depth");
        return c[k_max - k];
    }
};

inline LaurentTail series_at_infinity(const RationalFunction& f, int depth)
{
    if (depth < 0) throw Error(ErrorKind::InvalidArgument, "negative depth");
    LaurentTail out;
    if (f.is_zero()) return out;
    const Polynomial& n = f.num();
    const Polynomial& d = f.den();
    out.k_max = n.degree() - d.degree();
    // In t = 1/z: f = z^(k_max) * N~(t)/D~(t) with reversed coefficient lists.
    auto rev = [](const Polynomial& p, int i) { return p[p.degree() - i]; };
    int terms = depth + 1;
    std::vector<Rational> q(terms);
    Rational d0 = d.leading();
    for (int i = 0; i < terms; ++i) {
        Rational acc = (i <= n.degree()) ? rev(n, i) : Rational(0);
        for (int j = 1; j <= std::min(i, d.degree()); ++j) acc -= rev(d, j) * q[i - j];
        q[i] = acc / d0;
    }
    out.c = std::move(q);
    return out;
}

// Product of two tails, truncated to the depth both inputs support.
inline LaurentTail multiply(const LaurentTail& a, const LaurentTail& b)
{
    LaurentTail out;
    if (a.empty() || b.empty()) return out;
    out.k_max = a.k_max + b.k_max;
    std::size_t terms = std::min(a.c.size(), b.c.size());
    out.c.assign(terms, Rational(0));
    for (std::size_t i = 0; i < terms; ++i)
        for (std::size_t j = 0; j <= i; ++j) out.c[i] += a.c[j] * b.c[i - j];
    return out;
}

} // namespace rodmat

#endif
