#ifndef RODMAT_MAT2_HPP
#define RODMAT_MAT2_HPP

#include <algorithm>
#include <cmath>

namespace rodmat {

// Real 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 symmetric(double p11, double p12, double p22) { return {p11, p12, p12, p22}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
    Mat2 inverse() const
    {
        double D = det();
        return {d / D, -b / D, -c / D, a / D};
    }
    Mat2 transpose() const { return {a, c, b, d}; }
    double max_abs() const { return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)}); }

    friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
    friend Mat2 operator*(const Mat2& x, const Mat2& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator*(double s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

} // namespace rodmat

#endif
