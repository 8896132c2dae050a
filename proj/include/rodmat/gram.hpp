#ifndef RODMAT_GRAM_HPP
#define RODMAT_GRAM_HPP

#include <cmath>
#include <string>
#include <vector>

#include "catalogue.hpp"
#include "mat2.hpp"

namespace rodmat {

struct Point {
    double u = 0, v = 0;
};

struct CoordDomain {
    std::string u_name, v_name;
    double u0 = 0, u1 = 0, v0 = 0, v1 = 0; // sampling rectangle, inside the open coordinate domain
};

struct GramSample {
    Mat2 J;
    double r = 0, z = 0;
    Point point;
};

namespace detail {

inline double num(const CatalogueEntry& e, const std::string& k)
{
    auto it = e.params.values.find(k);
    if (it != e.params.values.end()) return it->second.get_d();
    auto jt = e.derived.find(k);
    if (jt != e.derived.end()) return jt->second.get_d();
    throw Error(ErrorKind::InvalidParameters, "entry has no parameter '" + k + "'");
}

[[noreturn]] inline void out_of_domain(const CatalogueEntry& e, Point p)
{
    throw Error(ErrorKind::OutOfDomain, e.family + ": point (" + std::to_string(p.u) + ", " + std::to_string(p.v)
                                            + ") is outside the coordinate domain or on the axis");
}

inline bool is_polar(const std::string& f)
{
    return f == "schwarzschild" || f == "kerr" || f == "taub_nut" || f == "taub_bolt" || f == "kerr_taub_bolt";
}

inline bool is_cylindrical(const std::string& f)
{
    return f == "sdtn" || f == "multi_taub_nut" || f == "multi_eguchi_hanson" || f == "double_schwarzschild"
           || f == "weyl_even" || f == "weyl_odd";
}

inline double polar_horizon(const CatalogueEntry& e)
{
    if (e.family == "schwarzschild") return 2 * num(e, "m");
    double Rp = num(e, "R_plus");
    if (e.family == "kerr_taub_bolt") Rp = std::max(Rp, std::abs(num(e, "a")) + std::abs(num(e, "N")));
    return Rp;
}

// Centres and masses of the Gibbons-Hawking potential, V = c + sum m_i / rho_i.
struct GhData {
    double constant = 0;
    std::vector<double> centres, masses;
};

inline GhData gh_data(const CatalogueEntry& e)
{
    GhData g;
    if (e.family == "sdtn") {
        g.constant = 1;
        g.centres = {0};
        g.masses = {2 * num(e, "m")};
    } else if (e.family == "bazaikin") {
        double s = num(e, "sigma");
        g.centres = {-s, s};
        g.masses = {num(e, "beta"), num(e, "alpha")};
    } else {
        g.constant = e.family == "multi_taub_nut" ? 1 : 0;
        for (const auto& a : e.params.nodes) {
            g.centres.push_back(a.get_d());
            g.masses.push_back(num(e, "m"));
        }
    }
    return g;
}

inline void gh_potentials(const GhData& g, double r, double z, double& V, double& W)
{
    V = g.constant;
    W = 0;
    for (std::size_t i = 0; i < g.centres.size(); ++i) {
        double dz = z - g.centres[i];
        double rho = std::hypot(r, dz);
        V += g.masses[i] / rho;
        W += g.masses[i] * dz / rho;
    }
}

// Norm of d/dt for the static Weyl families, as a product of rod potentials.
inline double weyl_f(const std::vector<Rational>& nodes, double r, double z)
{
    std::vector<double> a;
    for (const auto& x : nodes) a.push_back(x.get_d());
    auto rho = [&](std::size_t i) { return std::hypot(r, z - a[i]); };
    double f = 1;
    std::size_t start = 0;
    if (a.size() % 2 == 1) {
        f = rho(0) + (z - a[0]);
        start = 1;
    }
    for (std::size_t i = start; i + 1 < a.size(); i += 2) {
        double b = a[i + 1] - a[i];
        double s = rho(i) + rho(i + 1);
        f *= (s - b) / (s + b);
    }
    return f;
}

inline double pd_quartic(const CatalogueEntry& e, double x)
{
    double g = num(e, "gamma"), n = num(e, "n"), eps = num(e, "epsilon"), m = num(e, "m");
    return g + 2 * n * x - eps * x * x + 2 * m * x * x * x + g * x * x * x * x;
}

inline double ct_quartic(const CatalogueEntry& e, double x)
{
    return num(e, "a0") + x * (num(e, "a1") + x * (num(e, "a2") + x * (num(e, "a3") + x * num(e, "a4"))));
}

struct CtFunctions {
    double X, Y, F, G, H;
};

inline CtFunctions ct_functions(const CatalogueEntry& e, double x, double y)
{
    double a0 = num(e, "a0"), a1 = num(e, "a1"), a3 = num(e, "a3"), a4 = num(e, "a4"), nu = num(e, "nu");
    CtFunctions c;
    c.X = ct_quartic(e, x);
    c.Y = ct_quartic(e, y);
    c.F = x * x * c.Y - y * y * c.X;
    c.H = (nu * x + y) * ((nu * x - y) * (a1 - a3 * x * y) - 2 * (1 - nu) * (a0 - a4 * x * x * y * y));
    c.G = (nu * nu * a0 + 2 * nu * a3 * y * y * y + 2 * nu * a4 * y * y * y * y - a4 * y * y * y * y) * c.X
          + (a0 - 2 * nu * a0 - 2 * nu * a1 * x - nu * nu * a4 * x * x * x * x) * c.Y;
    return c;
}

inline double shrink_lo(double lo, double hi) { return lo + 0.05 * (hi - lo); }
inline double shrink_hi(double lo, double hi) { return hi - 0.05 * (hi - lo); }

} // namespace detail

inline CoordDomain coordinate_domain(const CatalogueEntry& e)
{
    using namespace detail;
    const std::string& f = e.family;
    CoordDomain d;
    if (f == "flat_e4") return {"R1", "R2", 0.1, 3, 0.1, 3};
    if (is_polar(f)) {
        double R0 = polar_horizon(e);
        double scale = std::max({1.0, std::abs(R0)});
        return {"R", "theta", R0 + 0.05 * scale, R0 + 10 * scale, 0.05, M_PI - 0.05};
    }
    if (is_cylindrical(f)) {
        double lo = 0, hi = 0;
        if (!e.rods.node_values.empty()) {
            lo = e.rods.node_values.front();
            hi = e.rods.node_values.back();
        }
        double L = std::max(1.0, hi - lo);
        return {"r", "z", 0.05 * L, 3 * L, lo - 2 * L, hi + 2 * L};
    }
    if (f == "bazaikin") return {"rho", "theta", 0.1, 3, 0.05, M_PI - 0.05};
    if (f == "c_metric") {
        double b1 = num(e, "beta1"), b2 = num(e, "beta2"), b = num(e, "beta");
        return {"x", "y", shrink_lo(b2, b), shrink_hi(b2, b), shrink_lo(-b2, -b1), shrink_hi(-b2, -b1)};
    }
    if (f == "plebanski_demianski") {
        double p1 = num(e, "p1"), p2 = num(e, "p2"), p3 = num(e, "p3"), p4 = num(e, "p4");
        double q0 = e.params.branch == 1 ? p3 : p1, q1 = e.params.branch == 1 ? p4 : p2;
        return {"p", "q", shrink_lo(p2, p3), shrink_hi(p2, p3), shrink_lo(q0, q1), shrink_hi(q0, q1)};
    }
    if (f == "chen_teo") {
        double x1 = num(e, "x1"), x2 = num(e, "x2"), x3 = num(e, "x3");
        return {"x", "y", shrink_lo(x2, x3), shrink_hi(x2, x3), shrink_lo(x1, x2), shrink_hi(x1, x2)};
    }
    throw Error(ErrorKind::Unsupported, f + ": no coordinate domain");
}

inline GramSample evaluate_gram(const CatalogueEntry& e, Point p)
{
    using namespace detail;
    const std::string& f = e.family;
    GramSample s;
    s.point = p;
    double u = p.u, v = p.v;
    bool lorentz = e.signature == Signature::Lorentzian;
    if (f == "flat_e4") {
        if (!(u > 0 && v > 0)) out_of_domain(e, p);
        s.J = Mat2::symmetric(u * u, 0, v * v);
        s.r = u * v;
        s.z = 0.5 * (u * u - v * v);
        return s;
    }
    if (is_polar(f)) {
        double R = u, th = v;
        double st = std::sin(th), ct = std::cos(th);
        if (!(R > polar_horizon(e) && th > 0 && th < M_PI)) out_of_domain(e, p);
        double m = f == "taub_bolt" ? num(e, "m") : num(e, "m");
        s.z = (R - m) * ct;
        if (f == "schwarzschild") {
            s.J = Mat2::symmetric(1 - 2 * m / R, 0, (lorentz ? -1 : 1) * R * R * st * st);
            s.r = std::sqrt(R * (R - 2 * m)) * st;
        } else if (f == "kerr") {
            double a = num(e, "a");
            double S2 = R * R - a * a * ct * ct;
            double Delta = R * R - 2 * m * R - a * a;
            s.J = Mat2::symmetric(1 - 2 * m * R / S2, 2 * m * a * R * st * st / S2,
                                  (R * R - a * a) * st * st - 2 * m * a * a * R * st * st * st * st / S2);
            s.r = std::sqrt(Delta) * st;
        } else if (f == "taub_nut" || f == "taub_bolt") {
            double N = num(e, "N");
            double U = (R * R - 2 * m * R + N * N) / (R * R - N * N);
            s.J = Mat2::symmetric(U, 2 * N * U * ct, 4 * N * N * U * ct * ct + (R * R - N * N) * st * st);
            s.r = std::sqrt(R * R - 2 * m * R + N * N) * st;
        } else {
            double a = num(e, "a"), N = num(e, "N");
            double X = R * R - (a * ct + N) * (a * ct + N);
            double Delta = R * R - 2 * m * R + N * N - a * a;
            double PR = R * R - a * a - N * N;
            double Pt = -a * st * st + 2 * N * ct;
            s.J = Mat2::symmetric((a * a * st * st + Delta) / X, (a * PR * st * st + Delta * Pt) / X,
                                  (PR * PR * st * st + Delta * Pt * Pt) / X);
            s.r = std::sqrt(Delta) * st;
        }
        return s;
    }
    if (f == "sdtn" || f == "multi_taub_nut" || f == "multi_eguchi_hanson" || f == "bazaikin") {
        double r = u, z = v;
        if (f == "bazaikin") {
            double sg = num(e, "sigma");
            if (!(u > 0 && v > 0 && v < M_PI)) out_of_domain(e, p);
            r = sg * std::sin(v) * std::sinh(u);
            z = sg * std::cos(v) * std::cosh(u);
        } else if (!(r > 0)) {
            out_of_domain(e, p);
        }
        double V, W;
        gh_potentials(gh_data(e), r, z, V, W);
        s.J = Mat2::symmetric(1 / V, W / V, W * W / V + r * r * V);
        s.r = r;
        s.z = z;
        return s;
    }
    if (f == "double_schwarzschild" || f == "weyl_even" || f == "weyl_odd") {
        if (!(u > 0)) out_of_domain(e, p);
        double fw = weyl_f(e.params.nodes, u, v);
        s.J = Mat2::symmetric(fw, 0, (lorentz ? -1 : 1) * u * u / fw);
        s.r = u;
        s.z = v;
        return s;
    }
    if (f == "c_metric") {
        double alpha = num(e, "alpha"), A = num(e, "A");
        double b1 = num(e, "beta1"), b2 = num(e, "beta2"), b = num(e, "beta");
        double x = u, y = v;
        if (!(x > b2 && x < b && y > -b2 && y < -b1) || x + y == 0) out_of_domain(e, p);
        double G = 1 - x * x - alpha * x * x * x, F = -1 + y * y - alpha * y * y * y;
        double w = A * A * (x + y) * (x + y);
        s.J = Mat2::symmetric(F / w, 0, G / w);
        s.r = std::sqrt(F * G) / w;
        s.z = (alpha * x * y * y - alpha * x * x * y - 2 * x * y - 2) / (2 * w);
        return s;
    }
    if (f == "plebanski_demianski") {
        double g = num(e, "gamma"), n = num(e, "n"), eps = num(e, "epsilon"), m = num(e, "m");
        double P = pd_quartic(e, u), Q = pd_quartic(e, v);
        double k = 1 - u * u * v * v;
        if (!(P > 0 && Q < 0 && k > 0 && u != v)) out_of_domain(e, p);
        double sP = std::sqrt(P) / ((u - v) * std::sqrt(k)), sQ = std::sqrt(-Q) / ((u - v) * std::sqrt(k));
        double al = v * v * sP, be = -sP, la = sQ, mu = -u * u * sQ;
        s.J = Mat2::symmetric(al * al + la * la, al * be + la * mu, be * be + mu * mu);
        double d2 = (u - v) * (u - v);
        s.r = std::sqrt(-P * Q) / d2;
        s.z = (-g - n * (u + v) + eps * u * v - g * u * u * v * v - m * u * v * (u + v)) / d2;
        return s;
    }
    if (f == "chen_teo") {
        double x = u, y = v;
        auto c = ct_functions(e, x, y);
        if (!(c.X > 0 && c.Y < 0 && x != y) || c.H == 0 || c.F == 0) out_of_domain(e, p);
        double w = x - y;
        s.J = Mat2::symmetric(c.F / (w * c.H), c.G / (w * c.H),
                              c.G * c.G / (w * c.H * c.F) - c.H * c.X * c.Y / (c.F * w * w * w));
        s.r = std::sqrt(-c.X * c.Y) / (w * w);
        s.z = (2 * (num(e, "a0") + num(e, "a2") * x * y + num(e, "a4") * x * x * y * y)
               + (x + y) * (num(e, "a1") + num(e, "a3") * x * y))
              / (2 * w * w);
        return s;
    }
    throw Error(ErrorKind::Unsupported, f + ": no Gram matrix evaluator");
}

// Twist potential of the first Killing vector of the entry's basis.
inline double twist_potential(const CatalogueEntry& e, Point p)
{
    using namespace detail;
    const std::string& f = e.family;
    evaluate_gram(e, p);
    double u = p.u, v = p.v;
    if (f == "kerr") {
        double m = num(e, "m"), a = num(e, "a"), ct = std::cos(v);
        return 2 * m * a * ct / (u * u - a * a * ct * ct);
    }
    if (f == "taub_nut" || f == "taub_bolt") {
        double N = num(e, "N"), Rp = num(e, "R_plus");
        return N * (u - Rp) * (u - Rp) / (Rp * (u * u - N * N));
    }
    if (f == "kerr_taub_bolt") {
        double m = num(e, "m"), a = num(e, "a"), N = num(e, "N"), ct = std::cos(v);
        double X = u * u - (a * ct + N) * (a * ct + N);
        return -2 * (N * u - m * (a * ct + N)) / X;
    }
    if (f == "sdtn" || f == "multi_taub_nut" || f == "multi_eguchi_hanson" || f == "bazaikin")
        return evaluate_gram(e, p).J.a;
    if (f == "plebanski_demianski") {
        double g = num(e, "gamma"), n = num(e, "n"), m = num(e, "m");
        double F = -2 * g * v - 2 * n * v * v + 2 * m * u * v * v * v + 2 * g * u * u * v * v * v;
        return F / ((u - v) * (1 - u * u * v * v));
    }
    if (f == "chen_teo") {
        double a0 = num(e, "a0"), a1 = num(e, "a1"), a3 = num(e, "a3"), a4 = num(e, "a4"), nu = num(e, "nu");
        double x = u, y = v;
        auto c = ct_functions(e, x, y);
        return (a0 * y + (2 * nu - 1) * a0 * x + (a1 * nu - a4 * y * y * y) * x * x
                + (-nu * a3 * y - 2 * nu * a4 * y * y + a4 * y * y) * x * x * x)
               / c.H;
    }
    return 0;
}

// J' = f^-1 [[1, -psi], [-psi, psi^2 + s f^2]] with f the norm of the first Killing vector.
inline Mat2 ernst_potential(const CatalogueEntry& e, Point p)
{
    double f = evaluate_gram(e, p).J.a;
    double psi = twist_potential(e, p);
    double s = target_det(e.signature);
    return Mat2::symmetric(1 / f, -psi / f, (psi * psi + s * f * f) / f);
}

struct GridCheck {
    int samples = 0;
    int skipped = 0;
    double max_relative_residual = 0;
};

// |det J - (+/-) r^2| / (1 + r^2) over an n x n interior grid.
inline GridCheck grid_det_check(const CatalogueEntry& e, int n = 10)
{
    CoordDomain d = coordinate_domain(e);
    GridCheck out;
    double s = e.signature == Signature::Lorentzian ? -1 : 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Point p{d.u0 + (d.u1 - d.u0) * i / (n - 1), d.v0 + (d.v1 - d.v0) * j / (n - 1)};
            try {
                GramSample g = evaluate_gram(e, p);
                double res = std::abs(g.J.det() - s * g.r * g.r) / (1 + g.r * g.r);
                out.max_relative_residual = std::max(out.max_relative_residual, res);
                ++out.samples;
            } catch (const Error&) {
                ++out.skipped;
            }
        }
    return out;
}

} // namespace rodmat

#endif
