#ifndef RODMAT_MPOLY_HPP
#define RODMAT_MPOLY_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "polynomial.hpp"

namespace rodmat {

// Sparse multivariate polynomial over Q in a fixed number of variables.
class MPoly {
public:
    using Monomial = std::vector<int>;

    MPoly() = default;
    explicit MPoly(int nvars) : n_(nvars) {}

    static MPoly constant(int nvars, const Rational& c)
    {
        MPoly p(nvars);
        if (c != 0) p.t_[Monomial(nvars, 0)] = c;
        return p;
    }
    static MPoly var(int nvars, int i)
    {
        MPoly p(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        p.t_[m] = 1;
        return p;
    }
    static MPoly from_univariate(const Polynomial& u, int v, int nvars)
    {
        MPoly p(nvars);
        for (int k = 0; k <= u.degree(); ++k) {
            if (u[k] == 0) continue;
            Monomial m(nvars, 0);
            m[v] = k;
            p.t_[m] = u[k];
        }
        return p;
    }

    int nvars() const { return n_; }
    const std::map<Monomial, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && is_const_mono(t_.begin()->first)); }
    Rational constant_value() const
    {
        auto it = t_.find(Monomial(n_, 0));
        return it == t_.end() ? Rational(0) : it->second;
    }

    int degree_in(int v) const
    {
        int d = -1;
        for (const auto& [m, c] : t_) d = std::max(d, m[v]);
        return d;
    }

    int total_degree() const
    {
        int d = -1;
        for (const auto& [m, c] : t_) {
            int s = 0;
            for (int e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    // Coefficient of v^k as a polynomial in the remaining variables.
    MPoly coeff_in(int v, int k) const
    {
        MPoly p(n_);
        for (const auto& [m, c] : t_) {
            if (m[v] != k) continue;
            Monomial mm = m;
            mm[v] = 0;
            p.t_[mm] += c;
        }
        return p;
    }

    std::set<int> variables() const
    {
        std::set<int> s;
        for (const auto& [m, c] : t_)
            for (int i = 0; i < n_; ++i)
                if (m[i] > 0) s.insert(i);
        return s;
    }

    Polynomial to_univariate(int v) const
    {
        std::vector<Rational> c(std::max(0, degree_in(v) + 1));
        for (const auto& [m, a] : t_) {
            for (int i = 0; i < n_; ++i)
                if (i != v && m[i] != 0) throw Error(ErrorKind::InvalidArgument, "not univariate");
            c[m[v]] += a;
        }
        return Polynomial(std::move(c));
    }

    MPoly operator-() const
    {
        MPoly p = *this;
        for (auto& [m, c] : p.t_) c = -c;
        return p;
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b)
    {
        MPoly p = a;
        p.n_ = std::max(a.n_, b.n_);
        for (const auto& [m, c] : b.t_) {
            Rational& slot = p.t_[m];
            slot += c;
            if (slot == 0) p.t_.erase(m);
        }
        return p;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }
    friend MPoly operator*(const MPoly& a, const MPoly& b)
    {
        MPoly p(std::max(a.n_, b.n_));
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) {
                Monomial m(p.n_, 0);
                for (int i = 0; i < p.n_; ++i) m[i] = ma[i] + mb[i];
                p.t_[m] += ca * cb;
            }
        p.prune();
        return p;
    }
    friend MPoly operator*(const Rational& s, const MPoly& a)
    {
        if (s == 0) return MPoly(a.n_);
        MPoly p = a;
        for (auto& [m, c] : p.t_) c *= s;
        return p;
    }

    MPoly& operator+=(const MPoly& b) { return *this = *this + b; }
    MPoly& operator-=(const MPoly& b) { return *this = *this - b; }
    MPoly& operator*=(const MPoly& b) { return *this = *this * b; }

    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }
    friend bool operator<(const MPoly& a, const MPoly& b) { return a.t_ < b.t_; }

    MPoly pow(int k) const
    {
        MPoly out = constant(n_, 1);
        for (int i = 0; i < k; ++i) out *= *this;
        return out;
    }

    // Replace variable v by the polynomial e.
    MPoly substitute(int v, const MPoly& e) const
    {
        int d = degree_in(v);
        if (d <= 0) return *this;
        std::vector<MPoly> powers{constant(n_, 1)};
        for (int k = 1; k <= d; ++k) powers.push_back(powers.back() * e);
        MPoly out(n_);
        for (int k = 0; k <= d; ++k) {
            MPoly ck = coeff_in(v, k);
            if (!ck.is_zero()) out += ck * powers[k];
        }
        return out;
    }

    MPoly substitute(int v, const Rational& x) const { return substitute(v, constant(n_, x)); }

    Rational eval(const std::vector<Rational>& x) const
    {
        Rational acc = 0;
        for (const auto& [m, c] : t_) {
            Rational term = c;
            for (int i = 0; i < n_; ++i)
                for (int e = 0; e < m[i]; ++e) term *= x[i];
            acc += term;
        }
        return acc;
    }

    std::string to_string(const std::vector<std::string>& names) const
    {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational mag = rodmat::abs(c);
            os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
            first = false;
            bool cm = is_const_mono(m);
            if (mag != 1 || cm) os << mag.get_str();
            bool need_star = (mag != 1);
            for (int i = 0; i < n_; ++i) {
                if (m[i] == 0) continue;
                if (need_star) os << "*";
                os << names[i];
                if (m[i] > 1) os << "^" << m[i];
                need_star = true;
            }
        }
        return os.str();
    }

private:
    static bool is_const_mono(const Monomial& m)
    {
        for (int e : m)
            if (e) return false;
        return true;
    }
    void prune()
    {
        for (auto it = t_.begin(); it != t_.end();) {
            if (it->second == 0) it = t_.erase(it);
            else ++it;
        }
    }

    int n_ = 0;
    std::map<Monomial, Rational> t_;
};

namespace detail {

// Division-free determinant by Laplace expansion with memoization over column subsets.
inline MPoly det_memo(const std::vector<std::vector<MPoly>>& a, int row, unsigned used,
                      std::unordered_map<unsigned, MPoly>& memo, int nvars)
{
    int n = static_cast<int>(a.size());
    if (row == n) return MPoly::constant(nvars, 1);
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    MPoly acc(nvars);
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        if (used & (1u << col)) continue;
        if (!a[row][col].is_zero()) {
            MPoly minor = det_memo(a, row + 1, used | (1u << col), memo, nvars);
            if (!minor.is_zero()) {
                MPoly term = a[row][col] * minor;
                acc = sign > 0 ? acc + term : acc - term;
            }
        }
        sign = -sign;
    }
    memo[used] = acc;
    return acc;
}

} // namespace detail

inline MPoly determinant(const std::vector<std::vector<MPoly>>& a, int nvars)
{
    if (a.empty()) return MPoly::constant(nvars, 1);
    if (a.size() > 24) throw Error(ErrorKind::Unsupported, "determinant too large");
    std::unordered_map<unsigned, MPoly> memo;
    return detail::det_memo(a, 0, 0u, memo, nvars);
}

// Sylvester resultant of f and g with respect to variable v.
inline MPoly resultant(const MPoly& f, const MPoly& g, int v)
{
    int n = f.nvars() > g.nvars() ? f.nvars() : g.nvars();
    int df = f.degree_in(v), dg = g.degree_in(v);
    if (df <= 0 || dg <= 0) {
        if (df == 0) return f.pow(dg < 0 ? 0 : dg);
        if (dg == 0) return g.pow(df < 0 ? 0 : df);
        return MPoly(n);
    }
    int size = df + dg;
    std::vector<std::vector<MPoly>> s(size, std::vector<MPoly>(size, MPoly(n)));
    for (int r = 0; r < dg; ++r)
        for (int k = 0; k <= df; ++k) s[r][r + df - k] = f.coeff_in(v, k);
    for (int r = 0; r < df; ++r)
        for (int k = 0; k <= dg; ++k) s[dg + r][r + dg - k] = g.coeff_in(v, k);
    return determinant(s, n);
}

} // namespace rodmat

#endif
