#ifndef RODMAT_POLES_HPP
#define RODMAT_POLES_HPP

#include <optional>
#include <vector>

#include "rational_function.hpp"
#include "roots.hpp"

namespace rodmat {

struct Pole {
    Rational location;
    int order = 1;
    std::optional<Rational> residue; // set for simple poles
};

// Part of the denominator without rational roots.
struct IrreducibleFactor {
    Polynomial factor; // squarefree, monic
    int multiplicity = 1;
    int real_roots = 0;
    int degree() const { return factor.degree(); }
    bool has_complex_roots() const { return real_roots < factor.degree(); }
};

struct PoleReport {
    std::vector<Pole> poles; // ascending location
    std::vector<IrreducibleFactor> remainders;
};

inline Rational residue_at_simple_pole(const RationalFunction& f, const Rational& a)
{
    return f.num().eval(a) / f.den().derivative().eval(a);
}

inline PoleReport pole_analysis(const RationalFunction& f)
{
    PoleReport rep;
    if (f.den().degree() <= 0) return rep;
    for (const auto& [part, mult] : squarefree_decomposition(f.den())) {
        Polynomial rest = part;
        for (const auto& root : isolate_squarefree(part, mult)) {
            if (!root.exact) continue;
            Pole p;
            p.location = root.value;
            p.order = mult;
            if (mult == 1) p.residue = residue_at_simple_pole(f, root.value);
            rep.poles.push_back(p);
            rest = exact_div(rest, Polynomial::linear(root.value));
        }
        if (rest.degree() > 0) {
            IrreducibleFactor irr;
            irr.factor = rest.monic();
            irr.multiplicity = mult;
            irr.real_roots = count_real_roots(rest);
            rep.remainders.push_back(irr);
        }
    }
    std::sort(rep.poles.begin(), rep.poles.end(),
              [](const Pole& a, const Pole& b) { return a.location < b.location; });
    return rep;
}

} // namespace rodmat

#endif
