#ifndef RODMAT_ASYMPTOTICS_HPP
#define RODMAT_ASYMPTOTICS_HPP

#include "laurent.hpp"
#include "patching_matrix.hpp"

namespace rodmat {

enum class AsymptoticClass { AF_ALF, AE_ALE, Other };

inline const char* class_name(AsymptoticClass c)
{
    switch (c) {
    case AsymptoticClass::AF_ALF: return "AF_ALF";
    case AsymptoticClass::AE_ALE: return "AE_ALE";
    case AsymptoticClass::Other: return "Other";
    }
    return "?";
}

struct Charges {
    AsymptoticClass cls = AsymptoticClass::Other;
    // AF/ALF slots
    Rational mass_m, nut_N, angmom_L;
    // AE/ALE slots
    Rational eta_M, zeta_L;
};

namespace detail {

inline bool leads_with(const RationalFunction& f, int order, const Rational& lead)
{
    if (f.is_zero()) return false;
    return f.order_at_infinity() == order && f.num().leading() / f.den().leading() == lead;
}

inline bool decays(const RationalFunction& f) { return f.is_zero() || f.order_at_infinity() < 0; }

} // namespace detail

inline AsymptoticClass asymptotic_classify(const PatchingMatrix& P)
{
    Rational s = target_det(P.signature);
    if (detail::leads_with(P.p11, 0, 1) && detail::decays(P.p12) && detail::leads_with(P.p22, 0, s))
        return AsymptoticClass::AF_ALF;
    if (detail::leads_with(P.p11, -1, Rational(1, 2)) && detail::decays(P.p12)
        && detail::leads_with(P.p22, 1, 2 * s))
        return AsymptoticClass::AE_ALE;
    return AsymptoticClass::Other;
}

// AF/ALF: p11 ~ 1 + 2m/z, p12 ~ 2N/z - 2L/z^2, p22 ~ s(1 - 2m/z).
// AE/ALE: p11 ~ (1 - M/z)/(2z), p12 ~ -2L/z^2, p22 ~ 2s z (1 + M/z).
inline Charges extract_charges(const PatchingMatrix& P)
{
    Charges ch;
    ch.cls = asymptotic_classify(P);
    Rational s = target_det(P.signature);
    auto t11 = series_at_infinity(P.p11, 4);
    auto t12 = series_at_infinity(P.p12, 4);
    auto t22 = series_at_infinity(P.p22, 4);
    switch (ch.cls) {
    case AsymptoticClass::AF_ALF: {
        ch.mass_m = t11.coeff(-1) / 2;
        ch.nut_N = t12.coeff(-1) / 2;
        ch.angmom_L = -t12.coeff(-2) / 2;
        if (t22.coeff(-1) != -s * 2 * ch.mass_m)
            throw Error(ErrorKind::MalformedAsymptotics,
                        "mass from p11 (" + ch.mass_m.get_str() + ") disagrees with p22");
        break;
    }
    case AsymptoticClass::AE_ALE: {
        ch.eta_M = -2 * t11.coeff(-2);
        ch.zeta_L = -t12.coeff(-2) / 2;
        if (t22.coeff(0) != 2 * s * ch.eta_M)
            throw Error(ErrorKind::MalformedAsymptotics,
                        "M from p11 (" + ch.eta_M.get_str() + ") disagrees with p22");
        break;
    }
    case AsymptoticClass::Other:
        throw Error(ErrorKind::NotAsymptoticallyStandard, "P is neither AF/ALF nor AE/ALE");
    }
    return ch;
}

struct NormalizeResult {
    PatchingMatrix matrix;
    ConjugationRecord conjugation;
};

// Finds a constant det-1 C with lim C P C^T = diag(1, s).
inline NormalizeResult normalize_alf(const PatchingMatrix& P)
{
    auto limit = [](const RationalFunction& f) -> Rational {
        if (f.is_zero() || f.order_at_infinity() < 0) return Rational(0);
        if (f.order_at_infinity() > 0) throw Error(ErrorKind::CannotNormalize, "entry grows at infinity");
        return f.num().leading() / f.den().leading();
    };
    Rational l11 = limit(P.p11), l12 = limit(P.p12), l22 = limit(P.p22);
    Rational s = target_det(P.signature);
    if (l11 * l22 - l12 * l12 != s)
        throw Error(ErrorKind::CannotNormalize, "limit matrix does not have determinant " + s.get_str());
    ConjugationRecord C = ConjugationRecord::identity();
    auto apply = [&](const ConjugationRecord& step) {
        C = step * C;
        Rational a = step.c11, b = step.c12, c = step.c21, d = step.c22;
        Rational n11 = a * a * l11 + 2 * a * b * l12 + b * b * l22;
        Rational n12 = a * c * l11 + (a * d + b * c) * l12 + b * d * l22;
        Rational n22 = c * c * l11 + 2 * c * d * l12 + d * d * l22;
        l11 = n11;
        l12 = n12;
        l22 = n22;
    };
    ConjugationRecord swap{0, 1, -1, 0};
    if (l11 == 0) {
        if (l22 != 0) apply(swap);
        else apply(ConjugationRecord{1, 1 / (2 * l12), 0, 1});
    }
    if (l12 != 0) apply(ConjugationRecord{1, 0, -l12 / l11, 1});
    if (l11 < 0) {
        if (s > 0) throw Error(ErrorKind::CannotNormalize, "negative-definite limit");
        apply(swap);
    }
    auto root = rational_sqrt(l11);
    if (!root) throw Error(ErrorKind::CannotNormalize, "limit entry " + l11.get_str() + " is not a rational square");
    if (*root != 1) apply(ConjugationRecord{1 / *root, 0, 0, *root});
    NormalizeResult out;
    out.matrix = conjugate(P, C);
    out.conjugation = C;
    return out;
}

} // namespace rodmat

#endif
