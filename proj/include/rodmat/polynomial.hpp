#ifndef RODMAT_POLYNOMIAL_HPP
#define RODMAT_POLYNOMIAL_HPP

#include <complex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace rodmat {

// Dense univariate polynomial; coefficients ascending, no trailing zeros.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    Polynomial(std::initializer_list<Rational> c) : c_(c) { trim(); }

    static Polynomial constant(const Rational& a) { return Polynomial(std::vector<Rational>{a}); }
    static Polynomial monomial(const Rational& a, int k)
    {
        std::vector<Rational> c(k + 1);
        c[k] = a;
        return Polynomial(std::move(c));
    }
    static Polynomial x() { return monomial(1, 1); }
    // z - root
    static Polynomial linear(const Rational& root) { return Polynomial({Rational(-root), Rational(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational operator[](int k) const
    {
        if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
        return c_[k];
    }

    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational eval(const Rational& x) const
    {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double eval(double x) const
    {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
        return acc;
    }

    std::complex<double> eval(std::complex<double> x) const
    {
        std::complex<double> acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
        return acc;
    }

    Polynomial derivative() const
    {
        std::vector<Rational> d;
        for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
        return Polynomial(std::move(d));
    }

    Polynomial monic() const
    {
        if (is_zero()) return *this;
        Rational lc = leading();
        std::vector<Rational> c = c_;
        for (auto& a : c) a /= lc;
        return Polynomial(std::move(c));
    }

    // p(z + s)
    Polynomial shift(const Rational& s) const
    {
        Polynomial acc;
        Polynomial step({s, Rational(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * step + constant(*it);
        return acc;
    }

    // p(-z)
    Polynomial reflect() const
    {
        std::vector<Rational> c = c_;
        for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
        return Polynomial(std::move(c));
    }

    Polynomial operator-() const
    {
        std::vector<Rational> c = c_;
        for (auto& a : c) a = -a;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& p)
    {
        std::vector<Rational> c = p.c_;
        for (auto& a : c) a *= s;
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& p, const Rational& s) { return s * p; }

    Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
    Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
    Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    std::string to_string(const std::string& var = "z") const
    {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            const Rational& a = c_[k];
            if (a == 0) continue;
            Rational mag = rodmat::abs(a);
            if (first) {
                if (a < 0) os << "-";
            } else {
                os << (a < 0 ? " - " : " + ");
            }
            first = false;
            bool unit = (mag == 1);
            if (!unit || k == 0) os << mag.get_str();
            if (k > 0) {
                if (!unit) os << "*";
                os << var;
                if (k > 1) os << "^" << k;
            }
        }
        return os.str();
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

// Euclidean division: a = q*b + r with deg r < deg b.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    std::vector<Rational> r = a.coeffs();
    int db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<Rational> q(a.degree() - db + 1);
    Rational lb = b.leading();
    for (int k = a.degree(); k >= db; --k) {
        if (r[k] == 0) continue;
        Rational f = r[k] / lb;
        q[k - db] = f;
        for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b[j];
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

inline Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

// Exact quotient; throws if b does not divide a.
inline Polynomial exact_div(const Polynomial& a, const Polynomial& b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw Error(ErrorKind::InvalidArgument, "inexact polynomial division");
    return q;
}

// Monic gcd; gcd(0, 0) = 0.
inline Polynomial gcd(Polynomial a, Polynomial b)
{
    while (!b.is_zero()) {
        Polynomial r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline Polynomial pow(const Polynomial& p, int k)
{
    Polynomial out = Polynomial::constant(1);
    for (int i = 0; i < k; ++i) out *= p;
    return out;
}

inline Polynomial from_roots(const std::vector<Rational>& roots)
{
    Polynomial out = Polynomial::constant(1);
    for (const auto& r : roots) out *= Polynomial::linear(r);
    return out;
}

// Scale to integer coefficients with content 1 (sign of leading kept positive).
inline std::vector<Integer> primitive_integer_coeffs(const Polynomial& p)
{
    Integer l = 1;
    for (const auto& a : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.get_den_mpz_t());
    std::vector<Integer> z;
    Integer g = 0;
    for (const auto& a : p.coeffs()) {
        Integer v = a.get_num() * (l / a.get_den());
        z.push_back(v);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    if (g == 0) return z;
    bool neg = !z.empty() && z.back() < 0;
    for (auto& v : z) {
        v /= g;
        if (neg) v = -v;
    }
    return z;
}

} // namespace rodmat

#endif
