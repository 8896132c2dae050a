#ifndef RODMAT_NODE_PASSING_HPP
#define RODMAT_NODE_PASSING_HPP

#include "patching_matrix.hpp"
#include "poles.hpp"

namespace rodmat {

enum class Direction { Down, Up };

struct PassResult {
    PatchingMatrix matrix;
    ConjugationRecord conjugation;
};

namespace detail {

inline Rational residue_or_zero(const RationalFunction& f, const Rational& a)
{
    Polynomial lin = Polynomial::linear(a);
    auto [q, r] = divmod(f.den(), lin);
    if (!r.is_zero()) return Rational(0);
    if ((q % lin).is_zero())
        throw Error(ErrorKind::DegenerateNode, "pole of order > 1 at z = " + a.get_str());
    return f.num().eval(a) / q.eval(a);
}

inline Rod rod_after(const PatchingMatrix& P, const Rational& node, bool below)
{
    return adjacent_rod(P.nodes, node, below);
}

inline bool into_lower_rod(const PatchingMatrix& P, const Rational& node)
{
    if (P.rod) {
        if (P.rod->lower && *P.rod->lower == node) return true;
        if (P.rod->upper && *P.rod->upper == node) return false;
    }
    return true;
}

} // namespace detail

// Crosses a node: conjugate so the residue sits in one diagonal slot, move the
// (2w)^{-1} factor to the opposite slot, conjugate back. `gauge` is the residual
// triangular freedom of that first conjugation; 0 is the canonical choice.
inline PassResult pass_node_standard(const PatchingMatrix& P, const Rational& node, Direction dir,
                                     const Rational& gauge = Rational(0))
{
    if (!P.has_node(node)) throw Error(ErrorKind::NotANode, node.get_str() + " is not a node of P");
    if (P.rod) {
        bool ok = dir == Direction::Down ? (P.rod->lower && *P.rod->lower == node)
                                         : (P.rod->upper && *P.rod->upper == node);
        if (!ok) throw Error(ErrorKind::InvalidArgument, "node " + node.get_str() + " is not the "
                                 + (dir == Direction::Down ? "lower" : "upper") + " end of the rod");
    }
    Rational r11 = detail::residue_or_zero(P.p11, node);
    Rational r12 = detail::residue_or_zero(P.p12, node);
    Rational r22 = detail::residue_or_zero(P.p22, node);
    if (r11 == 0 && r12 == 0 && r22 == 0)
        throw Error(ErrorKind::DegenerateNode, "no pole at node " + node.get_str());
    if (r11 * r22 - r12 * r12 != 0)
        throw Error(ErrorKind::DegenerateNode, "rank-2 residue at node " + node.get_str());

    // range vector v of the residue, first nonzero component 1
    Rational v1, v2;
    if (r11 != 0) {
        v1 = 1;
        v2 = r12 / r11;
    } else {
        v1 = 0;
        v2 = 1;
    }
    ConjugationRecord C;
    if (dir == Direction::Down) {
        // C v = e1
        C = v1 != 0 ? ConjugationRecord{1, 0, -v2, 1} : ConjugationRecord{0, 1, -1, 0};
        C = ConjugationRecord{1, gauge, 0, 1} * C;
    } else {
        // C v = e2
        C = v1 != 0 ? ConjugationRecord{v2, -1, 1, 0} : ConjugationRecord::identity();
        C = ConjugationRecord{1, 0, gauge, 1} * C;
    }
    PatchingMatrix Q = congruence(P, C);
    RationalFunction w(Polynomial::linear(node));
    RationalFunction four_w2 = Rational(4) * w * w;
    PatchingMatrix R = Q;
    if (dir == Direction::Down) {
        R.p11 = four_w2 * Q.p11;
        R.p22 = Q.p22 / four_w2;
    } else {
        R.p11 = Q.p11 / four_w2;
        R.p22 = four_w2 * Q.p22;
    }
    PassResult out;
    out.matrix = congruence(R, C.inverse());
    out.matrix.rod = detail::rod_after(P, node, dir == Direction::Down);
    out.conjugation = C;
    return out;
}

inline bool is_gibbons_hawking_form(const PatchingMatrix& P)
{
    return P.p22.is_zero() && P.p12 == RationalFunction(Rational(-1));
}

// Gibbons-Hawking rule: flip the sign of the partial-fraction term of p11 at the node.
inline PatchingMatrix pass_node_gh(const PatchingMatrix& P, const Rational& node)
{
    if (!is_gibbons_hawking_form(P))
        throw Error(ErrorKind::NotGibbonsHawkingForm, "expected [[V, -1], [-1, 0]]");
    if (!P.has_node(node)) throw Error(ErrorKind::NotANode, node.get_str() + " is not a node of P");
    Rational rho = detail::residue_or_zero(P.p11, node);
    if (rho == 0) throw Error(ErrorKind::DegenerateNode, "p11 has no pole at " + node.get_str());
    PatchingMatrix Q = P;
    Q.p11 = P.p11 - RationalFunction(Polynomial::constant(2 * rho), Polynomial::linear(node));
    Q.rod = detail::rod_after(P, node, detail::into_lower_rod(P, node));
    return Q;
}

} // namespace rodmat

#endif
