#ifndef RODMAT_PATCHING_MATRIX_HPP
#define RODMAT_PATCHING_MATRIX_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rational_function.hpp"

namespace rodmat {

enum class Signature { Lorentzian, Riemannian };

inline int target_det(Signature s) { return s == Signature::Lorentzian ? 1 : -1; }
inline const char* signature_name(Signature s) { return s == Signature::Lorentzian ? "lorentzian" : "riemannian"; }

// A rod of the axis; nullopt endpoints are infinite.
struct Rod {
    std::optional<Rational> lower;
    std::optional<Rational> upper;

    bool contains_node(const Rational& a) const { return (lower && *lower == a) || (upper && *upper == a); }
    friend bool operator==(const Rod& a, const Rod& b) { return a.lower == b.lower && a.upper == b.upper; }
};

struct PatchingMatrix {
    RationalFunction p11, p12, p22;
    Signature signature = Signature::Riemannian;
    std::vector<Rational> nodes; // ascending
    std::optional<Rod> rod;

    PatchingMatrix() = default;
    PatchingMatrix(RationalFunction a, RationalFunction b, RationalFunction c, Signature s,
                   std::vector<Rational> ns = {}, std::optional<Rod> r = std::nullopt)
        : p11(std::move(a)), p12(std::move(b)), p22(std::move(c)), signature(s), nodes(std::move(ns)), rod(r)
    {
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    }

    RationalFunction det() const { return p11 * p22 - p12 * p12; }

    bool has_node(const Rational& a) const { return std::find(nodes.begin(), nodes.end(), a) != nodes.end(); }

    bool same_entries(const PatchingMatrix& o) const { return p11 == o.p11 && p12 == o.p12 && p22 == o.p22; }

    friend bool operator==(const PatchingMatrix& a, const PatchingMatrix& b)
    {
        return a.same_entries(b) && a.signature == b.signature && a.nodes == b.nodes && a.rod == b.rod;
    }
};

// Constant 2x2 matrix [[c11, c12], [c21, c22]].
struct ConjugationRecord {
    Rational c11 = 1, c12 = 0, c21 = 0, c22 = 1;

    static ConjugationRecord identity() { return {}; }
    Rational det() const { return c11 * c22 - c12 * c21; }
    ConjugationRecord inverse() const
    {
        Rational d = det();
        return {c22 / d, -c12 / d, -c21 / d, c11 / d};
    }
    friend ConjugationRecord operator*(const ConjugationRecord& a, const ConjugationRecord& b)
    {
        return {a.c11 * b.c11 + a.c12 * b.c21, a.c11 * b.c12 + a.c12 * b.c22,
                a.c21 * b.c11 + a.c22 * b.c21, a.c21 * b.c12 + a.c22 * b.c22};
    }
    friend bool operator==(const ConjugationRecord& a, const ConjugationRecord& b)
    {
        return a.c11 == b.c11 && a.c12 == b.c12 && a.c21 == b.c21 && a.c22 == b.c22;
    }
};

struct DetCheck {
    bool pass = false;
    RationalFunction residual; // det P minus the target value
};

inline DetCheck det_check(const PatchingMatrix& P)
{
    DetCheck out;
    out.residual = P.det() - RationalFunction(Rational(target_det(P.signature)));
    out.pass = out.residual.is_zero();
    return out;
}

// C P C^T for a constant C; no determinant check.
inline PatchingMatrix congruence(const PatchingMatrix& P, const ConjugationRecord& C)
{
    PatchingMatrix Q = P;
    RationalFunction a(C.c11), b(C.c12), c(C.c21), d(C.c22);
    Q.p11 = a * a * P.p11 + Rational(2) * a * b * P.p12 + b * b * P.p22;
    Q.p12 = a * c * P.p11 + (a * d + b * c) * P.p12 + b * d * P.p22;
    Q.p22 = c * c * P.p11 + Rational(2) * c * d * P.p12 + d * d * P.p22;
    return Q;
}

inline PatchingMatrix conjugate(const PatchingMatrix& P, const ConjugationRecord& C)
{
    if (C.det() != 1) throw Error(ErrorKind::InvalidConjugation, "det C = " + C.det().get_str() + ", expected 1");
    return congruence(P, C);
}

// P(z - s): moves every node (and the rod) up by s.
inline PatchingMatrix translate(const PatchingMatrix& P, const Rational& s)
{
    PatchingMatrix Q = P;
    Rational neg = -s;
    Q.p11 = P.p11.shift(neg);
    Q.p12 = P.p12.shift(neg);
    Q.p22 = P.p22.shift(neg);
    for (auto& a : Q.nodes) a += s;
    if (Q.rod) {
        if (Q.rod->lower) *Q.rod->lower += s;
        if (Q.rod->upper) *Q.rod->upper += s;
    }
    return Q;
}

// P(-z) with nodes and rod mirrored.
inline PatchingMatrix reflect(const PatchingMatrix& P)
{
    PatchingMatrix Q = P;
    Q.p11 = P.p11.reflect();
    Q.p12 = P.p12.reflect();
    Q.p22 = P.p22.reflect();
    for (auto& a : Q.nodes) a = -a;
    std::sort(Q.nodes.begin(), Q.nodes.end());
    if (Q.rod) {
        Rod r;
        if (P.rod->upper) r.lower = Rational(-*P.rod->upper);
        if (P.rod->lower) r.upper = Rational(-*P.rod->lower);
        Q.rod = r;
    }
    return Q;
}

// Rod directly below (down) or above (up) a node, from the node list.
inline Rod adjacent_rod(const std::vector<Rational>& nodes, const Rational& node, bool below)
{
    Rod r;
    if (below) {
        r.upper = node;
        for (const auto& a : nodes)
            if (a < node) r.lower = a;
    } else {
        r.lower = node;
        for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
            if (*it > node) r.upper = *it;
    }
    return r;
}

} // namespace rodmat

#endif
