#ifndef RODMAT_SPLITTING_HPP
#define RODMAT_SPLITTING_HPP

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mat2.hpp"
#include "patching_matrix.hpp"

namespace rodmat {

using cplx = std::complex<double>;

inline int default_quad_points()
{
    if (const char* env = std::getenv("RODMAT_QUAD_POINTS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 256;
}

// All complex roots of a polynomial with rational coefficients (Durand-Kerner, then Newton polishing).
inline std::vector<cplx> complex_roots(const Polynomial& p)
{
    int n = p.degree();
    if (n < 1) return {};
    std::vector<cplx> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = p[k].get_d() / p.leading().get_d();
    auto eval = [&](cplx x) {
        cplx acc = 0;
        for (int k = n; k >= 0; --k) acc = acc * x + c[k];
        return acc;
    };
    auto deriv = [&](cplx x) {
        cplx acc = 0;
        for (int k = n; k >= 1; --k) acc = acc * x + double(k) * c[k];
        return acc;
    };
    double bound = 1;
    for (int k = 0; k < n; ++k) bound = std::max(bound, 1 + std::abs(c[k]));
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) z[i] = std::polar(0.5 * bound, 2 * std::numbers::pi * i / n + 0.4);
    for (int it = 0; it < 2000; ++it) {
        double change = 0;
        for (int i = 0; i < n; ++i) {
            cplx den = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            cplx step = eval(z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15 * bound) break;
    }
    for (auto& x : z)
        for (int it = 0; it < 3; ++it) {
            cplx d = deriv(x);
            if (std::abs(d) == 0) break;
            x -= eval(x) / d;
        }
    return z;
}

// F(z) on complex arguments, with the points the contour image must avoid.
struct AxisFunction {
    std::function<cplx(cplx)> eval;
    std::vector<cplx> singularities;
    bool logarithmic = false; // log of a rational function, continued along the contour
    std::string description;

    static AxisFunction rational(const RationalFunction& f)
    {
        AxisFunction F;
        F.eval = [f](cplx z) { return f.eval(z); };
        F.singularities = complex_roots(f.den());
        F.description = f.to_string();
        return F;
    }

    // log(sign * f); sign = -1 selects the rods where f < 0
    static AxisFunction log_of(const RationalFunction& f, int sign = 1)
    {
        AxisFunction F;
        F.eval = [f, sign](cplx z) { return std::log(double(sign) * f.eval(z)); };
        F.singularities = complex_roots(f.den());
        for (const auto& r : complex_roots(f.num())) F.singularities.push_back(r);
        F.logarithmic = true;
        F.description = "log(" + f.to_string() + ")";
        return F;
    }
};

// Distance from a point to the contour image {z + i s : |s| <= r}.
inline double contour_distance(cplx pole, double r, double z)
{
    double dx = pole.real() - z, y = std::abs(pole.imag());
    double dy = y <= r ? 0.0 : y - r;
    return std::hypot(dx, dy);
}

inline cplx a0_extract(const AxisFunction& F, double r, double z, int quad_points = default_quad_points())
{
    if (quad_points < 16) throw Error(ErrorKind::InvalidArgument, "quad_points must be at least 16");
    if (r < 0) throw Error(ErrorKind::InvalidArgument, "r must be non-negative");
    for (const auto& p : F.singularities) {
        if (contour_distance(p, r, z) <= (r > 0 ? 1e-2 * r : 0.0)) {
            std::ostringstream os;
            os << "contour at (r, z) = (" << r << ", " << z << ") meets the singularity " << p.real()
               << (p.imag() < 0 ? " - " : " + ") << std::abs(p.imag()) << "i";
            throw Error(ErrorKind::ContourCollision, os.str());
        }
    }
    if (r == 0) return F.eval(cplx(z, 0));
    cplx sum = 0;
    double prev_im = 0;
    for (int k = 0; k < quad_points; ++k) {
        double theta = 2 * std::numbers::pi * k / quad_points;
        cplx v = F.eval(cplx(z, -r * std::sin(theta)));
        if (F.logarithmic) {
            double im = v.imag();
            if (k > 0) im += 2 * std::numbers::pi * std::round((prev_im - im) / (2 * std::numbers::pi));
            v = cplx(v.real(), im);
            prev_im = im;
        }
        sum += v;
    }
    return sum / double(quad_points);
}

// ---- grids and fields ----

struct Grid {
    double r0 = 0, r1 = 0, z0 = 0, z1 = 0;
    int nr = 0, nz = 0;

    double hr() const { return (r1 - r0) / (nr - 1); }
    double hz() const { return (z1 - z0) / (nz - 1); }
    double r(int i) const { return r0 + i * hr(); }
    double z(int j) const { return z0 + j * hz(); }
    // the same rectangle with both spacings halved
    Grid refined() const { return {r0, r1, z0, z1, 2 * nr - 1, 2 * nz - 1}; }

    void validate() const
    {
        if (nr < 3 || nz < 3) throw Error(ErrorKind::InvalidArgument, "grid needs at least 3 points per direction");
        if (!(r0 > 0) || !(r1 > r0) || !(z1 > z0))
            throw Error(ErrorKind::InvalidArgument, "grid must satisfy 0 < r0 < r1 and z0 < z1");
    }
};

struct ScalarField {
    Grid grid;
    std::vector<double> values; // index i * nz + j

    double at(int i, int j) const { return values[i * grid.nz + j]; }
};

struct BulkField {
    Grid grid;
    Signature signature = Signature::Riemannian;
    std::string provenance;
    std::vector<Mat2> J; // index i * nz + j

    const Mat2& at(int i, int j) const { return J[i * grid.nz + j]; }
    Mat2& at(int i, int j) { return J[i * grid.nz + j]; }
    double max_det_error() const
    {
        double t = target_det(signature), e = 0;
        for (const auto& m : J) e = std::max(e, std::abs(m.det() - t));
        return e;
    }
};

inline ScalarField sample_scalar(const Grid& g, const std::function<double(double, double)>& f)
{
    g.validate();
    ScalarField s{g, std::vector<double>(g.nr * g.nz)};
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) s.values[i * g.nz + j] = f(g.r(i), g.z(j));
    return s;
}

inline ScalarField a0_field(const AxisFunction& F, const Grid& g, int quad_points = default_quad_points())
{
    return sample_scalar(g, [&](double r, double z) { return a0_extract(F, r, z, quad_points).real(); });
}

inline BulkField split_diagonal(const PatchingMatrix& P, const Grid& g, int quad_points = default_quad_points())
{
    if (!P.p12.is_zero() || P.p11.is_zero())
        throw Error(ErrorKind::WrongSplittingRoute, "diagonal splitting needs p12 = 0 and p11 != 0");
    g.validate();
    RationalFunction f = RationalFunction(1) / P.p11;
    // anchor the branch on the rod containing the grid
    int sign = f.eval(0.5 * (g.z0 + g.z1)) < 0 ? -1 : 1;
    double eps = target_det(P.signature);
    AxisFunction F = AxisFunction::log_of(f, sign);
    BulkField B{g, P.signature, "split_diagonal", std::vector<Mat2>(g.nr * g.nz)};
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double a0 = a0_extract(F, g.r(i), g.z(j), quad_points).real();
            B.at(i, j) = Mat2::symmetric(sign * std::exp(-a0), 0, eps * sign * std::exp(a0));
        }
    return B;
}

inline BulkField split_gh(const PatchingMatrix& P, const Grid& g, int quad_points = default_quad_points())
{
    if (P.p12 != RationalFunction(-1) || !P.p22.is_zero())
        throw Error(ErrorKind::WrongSplittingRoute, "Gibbons-Hawking splitting needs P = [[F, -1], [-1, 0]]");
    g.validate();
    AxisFunction F = AxisFunction::rational(P.p11);
    BulkField B{g, P.signature, "split_gh", std::vector<Mat2>(g.nr * g.nz)};
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double V = a0_extract(F, g.r(i), g.z(j), quad_points).real();
            B.at(i, j) = Mat2::symmetric(V, -1, 0);
        }
    return B;
}

// ---- residuals ----

struct ResidualReport {
    double max = 0, l2 = 0;
    double hr = 0, hz = 0;
    int points = 0;
    // filled by the convergence studies
    std::optional<double> max_fine, ratio, order;
};

// Index range of the evaluation stencil; with stride k only the nodes shared with the grid of spacing k h are used.
inline std::vector<int> stencil_nodes(int n, int margin, int stride)
{
    std::vector<int> out;
    int coarse = (n - 1) / stride + 1;
    for (int k = margin; k + margin < coarse; ++k) out.push_back(k * stride);
    return out;
}

inline ResidualReport harmonic_residual(const ScalarField& F, int stride = 1)
{
    const Grid& g = F.grid;
    if (g.nr < 3 || g.nz < 3) throw Error(ErrorKind::InvalidArgument, "grid needs at least 3 points per direction");
    double hr = g.hr(), hz = g.hz();
    ResidualReport rep;
    rep.hr = hr;
    rep.hz = hz;
    double sq = 0;
    for (int i : stencil_nodes(g.nr, 1, stride))
        for (int j : stencil_nodes(g.nz, 1, stride)) {
            double frr = (F.at(i + 1, j) - 2 * F.at(i, j) + F.at(i - 1, j)) / (hr * hr);
            double fr = (F.at(i + 1, j) - F.at(i - 1, j)) / (2 * hr);
            double fzz = (F.at(i, j + 1) - 2 * F.at(i, j) + F.at(i, j - 1)) / (hz * hz);
            double res = std::abs(frr + fr / g.r(i) + fzz);
            rep.max = std::max(rep.max, res);
            sq += res * res;
            ++rep.points;
        }
    rep.l2 = std::sqrt(sq / rep.points);
    return rep;
}

inline double frobenius(const Mat2& m) { return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d); }

inline ResidualReport yang_residual(const BulkField& B, int stride = 1)
{
    const Grid& g = B.grid;
    if (g.nr < 5 || g.nz < 5) throw Error(ErrorKind::InvalidArgument, "Yang residual needs at least 5 points per direction");
    double hr = g.hr(), hz = g.hz();
    std::vector<Mat2> inv(B.J.size());
    for (std::size_t k = 0; k < B.J.size(); ++k) {
        double d = B.J[k].det();
        if (!(std::abs(d) > 1e-12) || !std::isfinite(d)) {
            int i = static_cast<int>(k) / g.nz, j = static_cast<int>(k) % g.nz;
            std::ostringstream os;
            os << "singular J' at (r, z) = (" << g.r(i) << ", " << g.z(j) << ")";
            throw Error(ErrorKind::SingularField, os.str());
        }
        inv[k] = B.J[k].inverse();
    }
    auto idx = [&](int i, int j) { return i * g.nz + j; };
    // A_r = r J^-1 dJ/dr and A_z = J^-1 dJ/dz at interior points
    std::vector<Mat2> Ar(B.J.size()), Az(B.J.size());
    for (int i = 1; i + 1 < g.nr; ++i)
        for (int j = 1; j + 1 < g.nz; ++j) {
            Mat2 dr = (1 / (2 * hr)) * (B.at(i + 1, j) - B.at(i - 1, j));
            Mat2 dz = (1 / (2 * hz)) * (B.at(i, j + 1) - B.at(i, j - 1));
            Ar[idx(i, j)] = g.r(i) * (inv[idx(i, j)] * dr);
            Az[idx(i, j)] = inv[idx(i, j)] * dz;
        }
    ResidualReport rep;
    rep.hr = hr;
    rep.hz = hz;
    double sq = 0;
    for (int i : stencil_nodes(g.nr, 2, stride))
        for (int j : stencil_nodes(g.nz, 2, stride)) {
            Mat2 div = (1 / (2 * hr * g.r(i))) * (Ar[idx(i + 1, j)] - Ar[idx(i - 1, j)])
                       + (1 / (2 * hz)) * (Az[idx(i, j + 1)] - Az[idx(i, j - 1)]);
            double res = frobenius(div);
            rep.max = std::max(rep.max, res);
            sq += res * res;
            ++rep.points;
        }
    rep.l2 = std::sqrt(sq / rep.points);
    return rep;
}

// Residual at spacing h and h/2 on the same rectangle, compared at the nodes the two grids share;
// order = log2 of the ratio of maxima.
inline ResidualReport convergence_study(const std::function<ResidualReport(const Grid&, int)>& residual, const Grid& g)
{
    ResidualReport coarse = residual(g, 1);
    ResidualReport fine = residual(g.refined(), 2);
    coarse.max_fine = fine.max;
    if (fine.max > 0) {
        coarse.ratio = coarse.max / fine.max;
        coarse.order = std::log2(*coarse.ratio);
    }
    return coarse;
}

// ---- export ----

inline nlohmann::json to_json(const ResidualReport& r)
{
    nlohmann::json j;
    j["max"] = r.max;
    j["l2"] = r.l2;
    j["h_r"] = r.hr;
    j["h_z"] = r.hz;
    j["points"] = r.points;
    if (r.max_fine) j["max_half_spacing"] = *r.max_fine;
    if (r.ratio) j["ratio"] = *r.ratio;
    if (r.order) j["order"] = *r.order;
    return j;
}

inline nlohmann::json to_json(const BulkField& B)
{
    nlohmann::json j;
    j["provenance"] = B.provenance;
    j["signature"] = signature_name(B.signature);
    j["grid"] = {{"r0", B.grid.r0}, {"r1", B.grid.r1}, {"z0", B.grid.z0}, {"z1", B.grid.z1},
                 {"nr", B.grid.nr},  {"nz", B.grid.nz},  {"h_r", B.grid.hr()}, {"h_z", B.grid.hz()}};
    nlohmann::json pts = nlohmann::json::array();
    for (int i = 0; i < B.grid.nr; ++i)
        for (int j2 = 0; j2 < B.grid.nz; ++j2) {
            const Mat2& m = B.at(i, j2);
            pts.push_back({B.grid.r(i), B.grid.z(j2), m.a, m.b, m.c, m.d});
        }
    j["columns"] = {"r", "z", "J11", "J12", "J21", "J22"};
    j["points"] = pts;
    return j;
}

inline void write_csv(std::ostream& os, const BulkField& B)
{
    os << "r,z,J11,J12,J21,J22\n";
    os.precision(17);
    for (int i = 0; i < B.grid.nr; ++i)
        for (int j = 0; j < B.grid.nz; ++j) {
            const Mat2& m = B.at(i, j);
            os << B.grid.r(i) << ',' << B.grid.z(j) << ',' << m.a << ',' << m.b << ',' << m.c << ',' << m.d << '\n';
        }
}

} // namespace rodmat

#endif
