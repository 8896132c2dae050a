#ifndef RODMAT_RATIONAL_FUNCTION_HPP
#define RODMAT_RATIONAL_FUNCTION_HPP

#include <climits>
#include <complex>
#include <string>

#include "polynomial.hpp"

namespace rodmat {

// num/den with gcd(num, den) = 1 and den monic.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::constant(1)) {}
    RationalFunction(const Rational& c) : num_(Polynomial::constant(c)), den_(Polynomial::constant(1)) {}
    RationalFunction(long c) : RationalFunction(Rational(c)) {}
    RationalFunction(Polynomial p) : num_(std::move(p)), den_(Polynomial::constant(1)) {}
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RationalFunction z() { return RationalFunction(Polynomial::x()); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return is_polynomial() && num_.degree() <= 0; }
    Rational constant_value() const { return num_[0]; }

    // deg num - deg den; INT_MIN for the zero function
    int order_at_infinity() const { return is_zero() ? INT_MIN : num_.degree() - den_.degree(); }

    Rational eval(const Rational& x) const
    {
        Rational d = den_.eval(x);
        if (d == 0) throw Error(ErrorKind::DivisionByZero, "evaluation at a pole " + x.get_str());
        return num_.eval(x) / d;
    }
    double eval(double x) const { return num_.eval(x) / den_.eval(x); }
    std::complex<double> eval(std::complex<double> x) const { return num_.eval(x) / den_.eval(x); }

    RationalFunction derivative() const
    {
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    RationalFunction shift(const Rational& s) const { return RationalFunction(num_.shift(s), den_.shift(s)); }
    RationalFunction reflect() const { return RationalFunction(num_.reflect(), den_.reflect()); }

    RationalFunction operator-() const { return RationalFunction(-num_, den_, true); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
    {
        if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
    {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
    {
        if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    std::string to_string(const std::string& var = "z") const
    {
        if (is_polynomial()) return num_.to_string(var);
        return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
    }

private:
    RationalFunction(Polynomial num, Polynomial den, bool) : num_(std::move(num)), den_(std::move(den)) {}

    void normalize()
    {
        if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial::constant(1);
            return;
        }
        if (den_.degree() > 0) {
            Polynomial g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = exact_div(num_, g);
                den_ = exact_div(den_, g);
            }
        }
        Rational lc = den_.leading();
        if (lc != 1) {
            Rational inv = 1 / lc;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

inline RationalFunction ratfun_normalize(const Polynomial& num, const Polynomial& den)
{
    return RationalFunction(num, den);
}

} // namespace rodmat

#endif
