#ifndef RODMAT_AUDIT_HPP
#define RODMAT_AUDIT_HPP

#include <string>
#include <vector>

#include "patching_matrix.hpp"
#include "poles.hpp"

namespace rodmat {

enum class PoleKind { OK, DoublePole, OffNodePole, ComplexPolePair };

inline const char* pole_kind_name(PoleKind k)
{
    switch (k) {
    case PoleKind::OK: return "OK";
    case PoleKind::DoublePole: return "DoublePole";
    case PoleKind::OffNodePole: return "OffNodePole";
    case PoleKind::ComplexPolePair: return "ComplexPolePair";
    }
    return "?";
}

struct PoleFinding {
    std::string entry; // "p11", "p12", "p22", or "f" for zeros of p11
    PoleKind kind = PoleKind::OK;
    bool exact_location = true;
    Rational location;  // exact pole location
    Polynomial factor;  // for poles at roots of a non-rational factor
    int order = 1;
    int real_roots = 0; // of `factor`
};

struct PoleAudit {
    std::vector<PoleFinding> findings;
    bool admissible = true;

    bool has(PoleKind k) const
    {
        for (const auto& f : findings)
            if (f.kind == k) return true;
        return false;
    }
    bool has_at(PoleKind k, const Rational& a) const
    {
        for (const auto& f : findings)
            if (f.kind == k && f.exact_location && f.location == a) return true;
        return false;
    }
};

inline PoleAudit pole_audit(const PatchingMatrix& P)
{
    PoleAudit out;
    const std::pair<const char*, const RationalFunction*> entries[] = {{"p11", &P.p11}, {"p12", &P.p12}, {"p22", &P.p22}};
    for (const auto& [name, f] : entries) {
        PoleReport rep = pole_analysis(*f);
        for (const auto& p : rep.poles) {
            PoleFinding fd;
            fd.entry = name;
            fd.location = p.location;
            fd.order = p.order;
            if (p.order > 1) fd.kind = PoleKind::DoublePole;
            else if (!P.has_node(p.location)) fd.kind = PoleKind::OffNodePole;
            out.findings.push_back(fd);
        }
        for (const auto& irr : rep.remainders) {
            PoleFinding fd;
            fd.entry = name;
            fd.exact_location = false;
            fd.factor = irr.factor;
            fd.order = irr.multiplicity;
            fd.real_roots = irr.real_roots;
            fd.kind = irr.multiplicity > 1 ? PoleKind::DoublePole : PoleKind::OffNodePole;
            out.findings.push_back(fd);
            if (irr.has_complex_roots()) {
                fd.kind = PoleKind::ComplexPolePair;
                out.findings.push_back(fd);
            }
        }
    }
    // poles of f = 1/p11 off the real axis
    if (!P.p11.is_zero()) {
        for (const auto& irr : pole_analysis(RationalFunction(P.p11.den(), P.p11.num())).remainders) {
            if (!irr.has_complex_roots()) continue;
            PoleFinding fd;
            fd.entry = "f";
            fd.exact_location = false;
            fd.factor = irr.factor;
            fd.order = irr.multiplicity;
            fd.real_roots = irr.real_roots;
            fd.kind = PoleKind::OffNodePole;
            out.findings.push_back(fd);
            fd.kind = PoleKind::ComplexPolePair;
            out.findings.push_back(fd);
        }
    }
    for (const auto& f : out.findings)
        if (f.kind != PoleKind::OK) out.admissible = false;
    return out;
}

} // namespace rodmat

#endif
