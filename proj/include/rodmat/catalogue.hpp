#ifndef RODMAT_CATALOGUE_HPP
#define RODMAT_CATALOGUE_HPP

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "audit.hpp"
#include "equivalence.hpp"
#include "node_passing.hpp"
#include "roots.hpp"

namespace rodmat {

// alpha K + beta L vanishes (or is null) on the rod, with (K, L) the entry's Killing basis.
struct KernelLabel {
    Rational alpha, beta;
    bool exact = true;
    double alpha_value = 0, beta_value = 0;

    static KernelLabel of(const Rational& a, const Rational& b) { return {a, b, true, a.get_d(), b.get_d()}; }
    static KernelLabel numeric(double a, double b) { return {0, 0, false, a, b}; }
};

struct RodInfo {
    std::optional<Rational> lower, upper; // exact endpoints, nullopt for infinity or when inexact
    double lower_value = -INFINITY, upper_value = INFINITY;
    KernelLabel label;
};

struct RodStructure {
    std::vector<Rational> nodes; // exact, ascending; empty for inexact structures
    std::vector<double> node_values;
    bool exact = true;
    std::vector<RodInfo> rods; // bottom to top
    AsymptoticClass asymptotic_class = AsymptoticClass::Other;
    bool gh_type = false;
    std::string killing_basis; // names of (K, L)
};

struct Params {
    std::map<std::string, Rational> values;
    std::vector<Rational> nodes;
    std::optional<Signature> signature;
    int branch = 1;

    bool has(const std::string& k) const { return values.count(k) > 0; }
    const Rational& get(const std::string& k) const
    {
        auto it = values.find(k);
        if (it == values.end()) throw Error(ErrorKind::InvalidParameters, "missing parameter '" + k + "'");
        return it->second;
    }
};

struct CatalogueEntry {
    std::string family;
    Params params;
    Signature signature = Signature::Riemannian;
    RodStructure rods;
    std::vector<PatchingMatrix> matrices; // one per rod, bottom to top; empty when out of scope
    std::map<std::string, Rational> derived; // sigma, R_plus, ...
    std::vector<Rational> node_gauges;       // per node, ascending: gauge of the downward pass there

    std::size_t rod_count() const { return rods.rods.size(); }
};

struct FamilyInfo {
    std::string name;
    std::string description;
    std::vector<std::string> params;
    bool takes_nodes = false;
    std::map<std::string, std::string> demo; // parameter -> value, "nodes" -> comma list
};

inline const std::vector<FamilyInfo>& families()
{
    static const std::vector<FamilyInfo> list = {
        {"flat_e4", "flat Euclidean 4-space, two rotations", {}, false, {}},
        {"schwarzschild", "Schwarzschild, mass m", {"m"}, false, {{"m", "3"}}},
        {"kerr", "Riemannian Kerr, sigma^2 = m^2 + a^2", {"m", "a"}, false, {{"m", "3"}, {"a", "4"}}},
        {"taub_nut", "Taub-NUT, sigma^2 = m^2 - N^2", {"m", "N"}, false, {{"m", "5"}, {"N", "4"}}},
        {"sdtn", "self-dual Taub-NUT (m = N)", {"m"}, false, {{"m", "2"}}},
        {"taub_bolt", "Taub-bolt (m = 5N/4, sigma = 3N/4)", {"N"}, false, {{"N", "4"}}},
        {"kerr_taub_bolt", "Kerr-Taub-bolt, sigma^2 = m^2 + a^2 - N^2", {"m", "a", "N"}, false,
         {{"m", "7"}, {"a", "4"}, {"N", "1"}}},
        {"multi_taub_nut", "multi-Taub-NUT, V = 1 + sum m/rho_i", {"m"}, true, {{"m", "1"}, {"nodes", "-1,1"}}},
        {"multi_eguchi_hanson", "multi-Eguchi-Hanson, V = sum m/rho_i", {"m"}, true,
         {{"m", "1"}, {"nodes", "-1,1"}}},
        {"bazaikin", "two-centre Gibbons-Hawking with unequal masses (b+a)/2, (b-a)/2 at -sigma, +sigma",
         {"a", "b", "sigma"}, false, {{"a", "1"}, {"b", "3"}, {"sigma", "1"}}},
        {"double_schwarzschild", "double Schwarzschild, massive rods [a0,a1], [a2,a3]", {}, true,
         {{"nodes", "0,1,2,3"}}},
        {"weyl_even", "static Weyl solution with an even number of nodes", {}, true, {{"nodes", "-3,-1,1,3"}}},
        {"c_metric", "Riemannian C-metric, G(x) = 1 - x^2 - alpha x^3 with roots beta1 < beta2 < 0 < beta",
         {"alpha", "A", "beta1", "beta2", "beta"}, false,
         {{"alpha", "120/343"}, {"A", "1"}, {"beta1", "-7/3"}, {"beta2", "-7/5"}, {"beta", "7/8"}}},
        {"weyl_odd", "static Weyl solution with an odd number of nodes (ALE)", {}, true, {{"nodes", "-2,0,2"}}},
        {"plebanski_demianski", "Plebanski-Demianski, P(p) = gamma + 2np - epsilon p^2 + 2mp^3 + gamma p^4",
         {"gamma", "n", "epsilon", "m"}, false,
         {{"gamma", "12"}, {"n", "-17/2"}, {"epsilon", "69"}, {"m", "16"}}},
        {"chen_teo", "Chen-Teo, X(x) = a0 + a1 x + a2 x^2 + a3 x^3 + a4 x^4", {"a0", "a1", "a2", "a3", "a4", "nu", "k"},
         false, {{"a0", "6"}, {"a1", "-1"}, {"a2", "-7"}, {"a3", "1"}, {"a4", "1"}, {"nu", "1/2"}, {"k", "1"}}},
    };
    return list;
}

inline const FamilyInfo& family_info(const std::string& name)
{
    for (const auto& f : families())
        if (f.name == name) return f;
    throw Error(ErrorKind::InvalidParameters, "unknown family '" + name + "'");
}

namespace detail {

inline RationalFunction Zf() { return RationalFunction::z(); }

inline RationalFunction rf(const Rational& c) { return RationalFunction(c); }

inline Rational exact_sigma(const Rational& sigma2, const std::string& what)
{
    if (sigma2 <= 0) throw Error(ErrorKind::InvalidParameters, what + " = " + sigma2.get_str() + " must be positive");
    auto s = rational_sqrt(sigma2);
    if (!s)
        throw Error(ErrorKind::InvalidParameters,
                    what + " = " + sigma2.get_str() + " is not a rational square; exact mode needs rational sigma");
    return *s;
}

inline void require(bool ok, const std::string& msg)
{
    if (!ok) throw Error(ErrorKind::InvalidParameters, msg);
}

inline std::vector<Rational> checked_nodes(const Params& p, std::size_t min_count)
{
    require(p.nodes.size() >= min_count, "need at least " + std::to_string(min_count) + " nodes");
    for (std::size_t i = 1; i < p.nodes.size(); ++i)
        require(p.nodes[i - 1] < p.nodes[i], "nodes must be strictly ascending");
    return p.nodes;
}

inline Rod rod_between(const std::vector<Rational>& nodes, std::size_t k)
{
    Rod r;
    if (k > 0) r.lower = nodes[k - 1];
    if (k < nodes.size()) r.upper = nodes[k];
    return r;
}

inline RodStructure exact_rods(const std::vector<Rational>& nodes, const std::vector<KernelLabel>& labels)
{
    RodStructure rs;
    rs.nodes = nodes;
    for (const auto& a : nodes) rs.node_values.push_back(a.get_d());
    for (std::size_t k = 0; k <= nodes.size(); ++k) {
        RodInfo info;
        Rod r = rod_between(nodes, k);
        info.lower = r.lower;
        info.upper = r.upper;
        if (r.lower) info.lower_value = r.lower->get_d();
        if (r.upper) info.upper_value = r.upper->get_d();
        info.label = labels.at(k);
        rs.rods.push_back(info);
    }
    return rs;
}

enum class PassRule { Standard, GibbonsHawking };

// Matrices for every rod, obtained from the top one by passing nodes downwards.
// gauges[i] is the gauge used at the i-th node counted from the top.
inline std::vector<PatchingMatrix> chain_from_top(PatchingMatrix top, PassRule rule,
                                                  const std::vector<Rational>& gauges = {})
{
    const auto nodes = top.nodes;
    top.rod = rod_between(nodes, nodes.size());
    std::vector<PatchingMatrix> out(nodes.size() + 1);
    out[nodes.size()] = top;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::size_t k = nodes.size() - i; // current rod index
        const Rational& node = nodes[k - 1];
        if (rule == PassRule::GibbonsHawking) {
            out[k - 1] = pass_node_gh(out[k], node);
        } else {
            Rational g = i < gauges.size() ? gauges[i] : Rational(0);
            out[k - 1] = pass_node_standard(out[k], node, Direction::Down, g).matrix;
        }
        out[k - 1].rod = rod_between(nodes, k - 1);
    }
    return out;
}

// The passed matrix must agree with the closed form; the closed form is kept.
inline void adopt_closed_form(std::vector<PatchingMatrix>& chain, std::size_t k, PatchingMatrix closed, bool exact)
{
    const PatchingMatrix& passed = chain.at(k);
    bool ok = exact ? passed.same_entries(closed) : conjugation_equivalent(passed, closed);
    if (!ok)
        throw std::logic_error("node passing does not reproduce the closed form on rod " + std::to_string(k));
    closed.nodes = passed.nodes;
    closed.rod = passed.rod;
    chain[k] = closed;
}

inline PatchingMatrix diag_matrix(const RationalFunction& a, const RationalFunction& d, Signature s,
                                  const std::vector<Rational>& nodes)
{
    return PatchingMatrix(a, RationalFunction(), d, s, nodes);
}

inline PatchingMatrix gh_matrix(const RationalFunction& V, Signature s, const std::vector<Rational>& nodes)
{
    return PatchingMatrix(V, rf(-1), RationalFunction(), s, nodes);
}

inline RationalFunction point_masses(const Rational& constant, const std::vector<Rational>& nodes,
                                     const std::vector<Rational>& masses)
{
    RationalFunction V = rf(constant);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        V = V + RationalFunction(Polynomial::constant(masses[i]), Polynomial::linear(nodes[i]));
    return V;
}

// Top-rod norm f for the static Weyl families (a_i 0-indexed, ascending).
inline RationalFunction weyl_top_f(const std::vector<Rational>& a)
{
    Polynomial num = Polynomial::constant(1), den = Polynomial::constant(1);
    bool odd = a.size() % 2 == 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool in_num = odd ? (i % 2 == 0) : (i % 2 == 1);
        (in_num ? num : den) = (in_num ? num : den) * Polynomial::linear(a[i]);
    }
    if (odd) num = Rational(2) * num;
    return RationalFunction(num, den);
}

inline Signature signature_or(const Params& p, Signature fallback) { return p.signature.value_or(fallback); }

inline void riemannian_only(const Params& p, const std::string& family)
{
    if (p.signature && *p.signature != Signature::Riemannian)
        throw Error(ErrorKind::InvalidParameters, family + " is available in Riemannian signature only");
}

inline void finish(CatalogueEntry& e)
{
    for (const auto& P : e.matrices) {
        if (!det_check(P).pass) throw std::logic_error(e.family + ": determinant identity fails");
        if (!pole_audit(P).admissible) throw std::logic_error(e.family + ": pole audit fails");
    }
    if (!e.matrices.empty()) {
        const PatchingMatrix& top = e.matrices.back();
        AsymptoticClass c = asymptotic_classify(top);
        if (c == AsymptoticClass::Other) {
            try {
                c = asymptotic_classify(normalize_alf(top).matrix);
            } catch (const Error&) {
            }
        }
        e.rods.asymptotic_class = c;
    }
}

inline std::vector<double> sorted_real_roots(const Polynomial& p, std::vector<std::optional<Rational>>& exact)
{
    std::vector<double> out;
    exact.clear();
    for (auto r : real_roots(p)) {
        for (int k = 0; k < r.multiplicity; ++k) {
            out.push_back(r.approx());
            exact.push_back(r.exact ? std::optional<Rational>(r.value) : std::nullopt);
        }
    }
    return out;
}

} // namespace detail

// ---- closed forms (top rod unless named otherwise) ----

inline PatchingMatrix kerr_top(const Rational& m, const Rational& a, const Rational& sigma)
{
    using detail::Zf;
    RationalFunction D = Zf() * Zf() - detail::rf(sigma * sigma);
    RationalFunction p11 = ((Zf() + m) * (Zf() + m) - detail::rf(a * a)) / D;
    RationalFunction p12 = detail::rf(-2 * m * a) / D;
    RationalFunction p22 = (detail::rf(a * a) - (Zf() - m) * (Zf() - m)) / D;
    return PatchingMatrix(p11, p12, p22, Signature::Riemannian, {-sigma, sigma});
}

inline PatchingMatrix kerr_bottom(const Rational& m, const Rational& a, const Rational& sigma)
{
    using detail::Zf;
    RationalFunction D = Zf() * Zf() - detail::rf(sigma * sigma);
    RationalFunction p11 = ((Zf() - m) * (Zf() - m) - detail::rf(a * a)) / D;
    RationalFunction p12 = detail::rf(-2 * m * a) / D;
    RationalFunction p22 = (detail::rf(a * a) - (Zf() + m) * (Zf() + m)) / D;
    return PatchingMatrix(p11, p12, p22, Signature::Riemannian, {-sigma, sigma});
}

inline PatchingMatrix taub_nut_top(const Rational& m, const Rational& N, const Rational& sigma)
{
    using detail::Zf;
    Rational Rp = m + sigma;
    RationalFunction p11 = ((Zf() + m) * (Zf() + m) - detail::rf(N * N)) / (Zf() * Zf() - detail::rf(sigma * sigma));
    RationalFunction ratio = (Zf() - sigma) / (Rp * (Zf() + sigma));
    return PatchingMatrix(p11, detail::rf(-N) * ratio, detail::rf(-2 * sigma) * ratio, Signature::Riemannian,
                          {-sigma, sigma});
}

// Top-rod Taub-NUT matrix after the constant conjugation that brings its limit to diag(1, -1).
inline PatchingMatrix taub_nut_normalized(const Rational& m, const Rational& N, const Rational& sigma)
{
    using detail::Zf;
    RationalFunction D = Zf() * Zf() - detail::rf(sigma * sigma);
    RationalFunction p11 = ((Zf() + m) * (Zf() + m) - detail::rf(N * N)) / D;
    RationalFunction p12 = detail::rf(2 * N) * Zf() / D;
    RationalFunction p22 = (detail::rf(N * N) - (Zf() - m) * (Zf() - m)) / D;
    return PatchingMatrix(p11, p12, p22, Signature::Riemannian, {-sigma, sigma});
}

inline PatchingMatrix taub_bolt_top(const Rational& sigma)
{
    using detail::Zf;
    RationalFunction p11 =
        (Zf() + Rational(3 * sigma)) * (Zf() + Rational(sigma / 3)) / (Zf() * Zf() - detail::rf(sigma * sigma));
    RationalFunction ratio = (Zf() - sigma) / (Zf() + sigma);
    return PatchingMatrix(p11, detail::rf(Rational(-1, 2)) * ratio, detail::rf(Rational(-3, 4)) * ratio,
                          Signature::Riemannian, {-sigma, sigma});
}

inline PatchingMatrix kerr_taub_bolt_top(const Rational& m, const Rational& a, const Rational& N, const Rational& sigma)
{
    using detail::Zf;
    RationalFunction D = Zf() * Zf() - detail::rf(sigma * sigma);
    RationalFunction p11 = (Zf() * Zf() + detail::rf(2 * m) * Zf() + detail::rf(m * m - (a + N) * (a + N))) / D;
    RationalFunction p12 = (detail::rf(2 * N) * Zf() - detail::rf(2 * a * m)) / D;
    RationalFunction p22 =
        (detail::rf(-1) * Zf() * Zf() + detail::rf(2 * m) * Zf() + detail::rf((a - N) * (a - N) - m * m)) / D;
    return PatchingMatrix(p11, p12, p22, Signature::Riemannian, {-sigma, sigma});
}

inline PatchingMatrix kerr_taub_bolt_bottom(const Rational& m, const Rational& a, const Rational& N,
                                            const Rational& sigma)
{
    using detail::Zf;
    RationalFunction D = Zf() * Zf() - detail::rf(sigma * sigma);
    RationalFunction p11 = (Zf() * Zf() - detail::rf(2 * m) * Zf() + detail::rf(m * m - (a - N) * (a - N))) / D;
    RationalFunction p12 = (detail::rf(2 * a * m) - detail::rf(2 * N) * Zf()) / D;
    RationalFunction p22 = (p12 * p12 - detail::rf(1)) / p11;
    return PatchingMatrix(p11, p12, p22, Signature::Riemannian, {-sigma, sigma});
}

inline PatchingMatrix schwarzschild_rod(const Rational& m, Signature s, int which)
{
    using detail::Zf;
    Rational sg = target_det(s);
    RationalFunction up = (Zf() + m) / (Zf() - m);
    RationalFunction mid = detail::rf(4) * (Zf() * Zf() - detail::rf(m * m));
    PatchingMatrix P;
    if (which > 0) P = detail::diag_matrix(up, detail::rf(sg) / up, s, {-m, m});
    else if (which == 0) P = detail::diag_matrix(mid, detail::rf(sg) / mid, s, {-m, m});
    else P = detail::diag_matrix(detail::rf(1) / up, detail::rf(sg) * up, s, {-m, m});
    return P;
}

inline PatchingMatrix tomimatsu_sato_delta2(const Rational& p, const Rational& q)
{
    using detail::Zf;
    if (p * p + q * q != 1)
        throw Error(ErrorKind::InvalidParameters, "Tomimatsu-Sato needs p^2 + q^2 = 1");
    if (p == 0) throw Error(ErrorKind::InvalidParameters, "Tomimatsu-Sato needs p != 0");
    RationalFunction w = Zf() * Zf() - detail::rf(1);
    RationalFunction Q = detail::rf(p * p) * w * w + detail::rf(4 * p) * Zf() * (Zf() - detail::rf(1)) * (Zf() - detail::rf(1))
                         + detail::rf(8 * (p + 1)) * Zf() * Zf();
    RationalFunction base = detail::rf(p * p) * w * w;
    RationalFunction p11 = Q / base;
    RationalFunction p12 = detail::rf(8 * q) * Zf() * Zf() / base;
    RationalFunction z4 = Zf() * Zf() * Zf() * Zf();
    RationalFunction p22 = (detail::rf(p * p * p * p) * w * w * w * w + detail::rf(64 * q * q) * z4) / (base * Q);
    return PatchingMatrix(p11, p12, p22, Signature::Lorentzian, {-1, 1}, Rod{Rational(1), std::nullopt});
}

// Gibbons-Hawking potential of a dipole on the axis, V(0, z) = z^-2.
inline PatchingMatrix gh_dipole()
{
    return PatchingMatrix(RationalFunction(Polynomial::constant(1), Polynomial::monomial(1, 2)), detail::rf(-1),
                          RationalFunction(), Signature::Riemannian, {0}, Rod{Rational(0), std::nullopt});
}

// ---- entries ----

namespace detail {

inline void build_flat(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    e.signature = Signature::Riemannian;
    std::vector<Rational> nodes{0};
    e.rods = exact_rods(nodes, {KernelLabel::of(1, 0), KernelLabel::of(0, 1)});
    e.rods.killing_basis = "(d/dphi1, d/dphi2)";
    RationalFunction twoz = rf(2) * Zf();
    auto chain = chain_from_top(diag_matrix(rf(1) / twoz, rf(-1) * twoz, e.signature, nodes), PassRule::Standard);
    adopt_closed_form(chain, 0, diag_matrix(rf(-1) / twoz, twoz, e.signature, nodes), false);
    e.matrices = chain;
}

inline void build_schwarzschild(CatalogueEntry& e)
{
    Rational m = e.params.get("m");
    require(m > 0, "Schwarzschild needs m > 0");
    e.signature = signature_or(e.params, Signature::Riemannian);
    std::vector<Rational> nodes{-m, m};
    e.rods = exact_rods(nodes, {KernelLabel::of(0, 1), KernelLabel::of(1, 0), KernelLabel::of(0, 1)});
    e.rods.killing_basis = "(d/dt, d/dphi)";
    auto chain = chain_from_top(schwarzschild_rod(m, e.signature, 1), PassRule::Standard);
    adopt_closed_form(chain, 1, schwarzschild_rod(m, e.signature, 0), true);
    adopt_closed_form(chain, 0, schwarzschild_rod(m, e.signature, -1), true);
    e.matrices = chain;
}

inline void build_kerr(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    Rational m = e.params.get("m"), a = e.params.get("a");
    require(m > 0, "Kerr needs m > 0");
    Rational sigma = exact_sigma(m * m + a * a, "sigma^2 = m^2 + a^2");
    Rational Rp = m + sigma;
    e.derived = {{"sigma", sigma}, {"R_plus", Rp}};
    std::vector<Rational> nodes{-sigma, sigma};
    e.rods = exact_rods(nodes, {KernelLabel::of(0, 1), KernelLabel::of(1, Rational(-a / (2 * m * Rp))),
                                KernelLabel::of(0, 1)});
    e.rods.killing_basis = "(d/dt, d/dphi)";
    Rational g = a / (2 * sigma);
    e.node_gauges = {g, -g};
    auto chain = chain_from_top(kerr_top(m, a, sigma), PassRule::Standard, {Rational(-g), g});
    adopt_closed_form(chain, 0, kerr_bottom(m, a, sigma), false);
    e.matrices = chain;
}

inline void build_taub_nut_like(CatalogueEntry& e, const Rational& m, const Rational& N, const PatchingMatrix& top)
{
    Rational sigma = e.derived.at("sigma");
    std::vector<Rational> nodes{-sigma, sigma};
    e.rods = exact_rods(nodes, {KernelLabel::of(2 * N, 1), KernelLabel::of(1, 0), KernelLabel::of(-2 * N, 1)});
    e.rods.killing_basis = "(d/dchi, d/dphi)";
    Rational g = N / (2 * sigma);
    e.node_gauges = {g, -g};
    auto chain = chain_from_top(top, PassRule::Standard, {Rational(-g), g});
    PatchingMatrix bottom = taub_nut_top(m, N, sigma);
    bottom.p11 = bottom.p11.reflect();
    bottom.p12 = bottom.p12.reflect();
    bottom.p22 = bottom.p22.reflect();
    adopt_closed_form(chain, 0, bottom, false);
    e.matrices = chain;
}

inline void build_taub_nut(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    Rational m = e.params.get("m"), N = e.params.get("N");
    require(N != 0 && m * m > N * N, "Taub-NUT needs m^2 > N^2 > 0");
    require(m > 0, "Taub-NUT needs m > 0");
    Rational sigma = exact_sigma(m * m - N * N, "sigma^2 = m^2 - N^2");
    e.derived = {{"sigma", sigma}, {"R_plus", m + sigma}};
    build_taub_nut_like(e, m, N, taub_nut_top(m, N, sigma));
}

inline void build_taub_bolt(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    Rational N = e.params.get("N");
    require(N > 0, "Taub-bolt needs N > 0");
    Rational m = 5 * N / 4, sigma = 3 * N / 4;
    e.derived = {{"m", m}, {"sigma", sigma}, {"R_plus", 2 * N}};
    PatchingMatrix top = taub_bolt_top(sigma);
    if (!top.same_entries(taub_nut_top(m, N, sigma)))
        throw std::logic_error("Taub-bolt closed form disagrees with Taub-NUT at m = 5N/4");
    build_taub_nut_like(e, m, N, top);
}

inline void build_kerr_taub_bolt(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    Rational m = e.params.get("m"), a = e.params.get("a"), N = e.params.get("N");
    require(m > 0, "Kerr-Taub-bolt needs m > 0");
    Rational sigma = exact_sigma(m * m + a * a - N * N, "sigma^2 = m^2 + a^2 - N^2");
    Rational Rp = m + sigma;
    e.derived = {{"sigma", sigma}, {"R_plus", Rp}};
    std::vector<Rational> nodes{-sigma, sigma};
    Rational PR = Rp * Rp - a * a - N * N;
    require(PR != 0, "Kerr-Taub-bolt: degenerate bolt (R_+^2 = a^2 + N^2)");
    e.rods = exact_rods(nodes, {KernelLabel::of(2 * N, 1), KernelLabel::of(1, Rational(-a / PR)),
                                KernelLabel::of(-2 * N, 1)});
    e.rods.killing_basis = "(d/dt, d/dphi)";
    Rational g = (a + N) / (2 * sigma);
    e.node_gauges = {g, -g};
    auto chain = chain_from_top(kerr_taub_bolt_top(m, a, N, sigma), PassRule::Standard, {Rational(-g), g});
    if (conjugation_equivalent(chain[0], kerr_taub_bolt_bottom(m, a, N, sigma)))
        adopt_closed_form(chain, 0, kerr_taub_bolt_bottom(m, a, N, sigma), false);
    e.matrices = chain;
}

inline void build_gh(CatalogueEntry& e, const Rational& constant, const std::vector<Rational>& nodes,
                     const std::vector<Rational>& masses)
{
    riemannian_only(e.params, e.family);
    std::vector<KernelLabel> labels(nodes.size() + 1, KernelLabel::of(0, 1));
    e.rods = exact_rods(nodes, labels);
    e.rods.gh_type = true;
    e.rods.killing_basis = "(d/dt, d/dphi)";
    e.matrices = chain_from_top(gh_matrix(point_masses(constant, nodes, masses), e.signature, nodes),
                                PassRule::GibbonsHawking);
}

inline void build_sdtn(CatalogueEntry& e)
{
    Rational m = e.params.get("m");
    require(m > 0, "self-dual Taub-NUT needs m > 0");
    build_gh(e, 1, {0}, {2 * m});
    PatchingMatrix bottom = gh_matrix(rf(1) - rf(2 * m) / Zf(), e.signature, {0});
    adopt_closed_form(e.matrices, 0, bottom, true);
}

inline void build_multi_gh(CatalogueEntry& e, const Rational& constant)
{
    Rational m = e.params.get("m");
    require(m > 0, "Gibbons-Hawking masses must be positive");
    auto nodes = checked_nodes(e.params, 1);
    build_gh(e, constant, nodes, std::vector<Rational>(nodes.size(), m));
}

inline void build_bazaikin(CatalogueEntry& e)
{
    Rational a = e.params.get("a"), b = e.params.get("b"), s = e.params.get("sigma");
    require(s > 0, "Bazaikin needs sigma > 0");
    require(b > abs(a), "Bazaikin needs b > |a| (positive masses)");
    Rational alpha = (b - a) / 2, beta = (a + b) / 2;
    e.derived = {{"alpha", alpha}, {"beta", beta}};
    build_gh(e, 0, {-s, s}, {beta, alpha});
    PatchingMatrix closed =
        gh_matrix((rf(b) * Zf() - rf(a * s)) / (Zf() * Zf() - rf(s * s)), e.signature, {-s, s});
    adopt_closed_form(e.matrices, 2, closed, true);
}

inline void build_weyl(CatalogueEntry& e, bool odd)
{
    auto nodes = checked_nodes(e.params, odd ? 1 : 2);
    require((nodes.size() % 2 == 1) == odd, odd ? "weyl_odd needs an odd number of nodes"
                                                : "weyl_even needs an even number of nodes");
    e.signature = signature_or(e.params, Signature::Riemannian);
    std::vector<KernelLabel> labels;
    for (std::size_t k = 0; k <= nodes.size(); ++k) {
        bool t_rod = odd ? (k % 2 == 0) : (k % 2 == 1);
        labels.push_back(t_rod ? KernelLabel::of(1, 0) : KernelLabel::of(0, 1));
    }
    e.rods = exact_rods(nodes, labels);
    e.rods.killing_basis = "(d/dt, d/dphi)";
    RationalFunction f = weyl_top_f(nodes);
    Rational s = target_det(e.signature);
    auto chain = chain_from_top(diag_matrix(rf(1) / f, rf(s) * f, e.signature, nodes), PassRule::Standard);
    // the bottom rod carries the inverse of the top matrix
    adopt_closed_form(chain, 0, diag_matrix(f, rf(s) / f, e.signature, nodes), true);
    e.matrices = chain;
}

inline Polynomial c_metric_G(const Rational& alpha)
{
    return Polynomial({Rational(1), Rational(0), Rational(-1), Rational(-alpha)});
}

inline void build_c_metric(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    const Params& p = e.params;
    Rational alpha = p.get("alpha"), A = p.get("A"), b1 = p.get("beta1"), b2 = p.get("beta2"), b = p.get("beta");
    require(alpha != 0 && A != 0, "C-metric needs alpha != 0 and A != 0");
    require(alpha * alpha < Rational(4, 27), "C-metric needs alpha^2 < 4/27");
    require(b1 < b2 && b2 < 0 && 0 < b, "C-metric needs beta1 < beta2 < 0 < beta");
    Polynomial G = Rational(-alpha) * from_roots({b, b1, b2});
    require(G == c_metric_G(alpha), "supplied roots do not reproduce G(x) = 1 - x^2 - alpha x^3");
    Rational mu = alpha * b1 / (2 * A * A), nu = alpha * b2 / (2 * A * A), xi = alpha * b / (2 * A * A);
    e.derived = {{"mu", mu}, {"nu", nu}, {"xi", xi}};
    e.params.nodes = {mu, nu, xi};
    build_weyl(e, true);
    e.rods.killing_basis = "(d/dt, d/dphi)";
}

// Exact node z-values and rod labels of Plebanski-Demianski; matrices are out of scope.
inline void build_plebanski_demianski(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    const Params& p = e.params;
    Rational g = p.get("gamma"), n = p.get("n"), eps = p.get("epsilon"), m = p.get("m");
    require(g > 0, "Plebanski-Demianski needs gamma > 0");
    require(p.branch == 1 || p.branch == 2, "branch must be 1 or 2");
    Polynomial P({g, Rational(2 * n), Rational(-eps), Rational(2 * m), g});
    std::vector<std::optional<Rational>> ex;
    auto roots = sorted_real_roots(P, ex);
    require(roots.size() == 4 && roots[1] < 0 && roots[2] > 0 && roots[0] < roots[1] && roots[2] < roots[3],
            "P(p) must have four distinct real roots p1 < p2 < 0 < p3 < p4");
    bool exact = std::all_of(ex.begin(), ex.end(), [](const auto& r) { return r.has_value(); });
    // node corners (p, q) in increasing z
    std::vector<std::pair<int, int>> corners = p.branch == 1
                                                   ? std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}}
                                                   : std::vector<std::pair<int, int>>{{2, 1}, {2, 0}, {1, 0}};
    RodStructure rs;
    rs.exact = exact;
    for (auto [i, j] : corners) {
        if (exact) {
            Rational s = *ex[i] + *ex[j];
            Rational z = -eps / 2 + m * s + g * s * s / 2;
            rs.nodes.push_back(z);
            rs.node_values.push_back(z.get_d());
        } else {
            double s = roots[i] + roots[j];
            rs.node_values.push_back(-eps.get_d() / 2 + m.get_d() * s + g.get_d() * s * s / 2);
        }
    }
    // rods bottom to top: branch 1 q=p3, p=p2, q=p4, p=p3; branch 2 q=p2, p=p3, q=p1, p=p2
    std::vector<std::pair<bool, int>> rods = p.branch == 1
                                                 ? std::vector<std::pair<bool, int>>{{false, 2}, {true, 1}, {false, 3}, {true, 2}}
                                                 : std::vector<std::pair<bool, int>>{{false, 1}, {true, 2}, {false, 0}, {true, 1}};
    for (std::size_t k = 0; k < rods.size(); ++k) {
        RodInfo info;
        if (k > 0) {
            info.lower_value = rs.node_values[k - 1];
            if (exact) info.lower = rs.nodes[k - 1];
        }
        if (k < 3) {
            info.upper_value = rs.node_values[k];
            if (exact) info.upper = rs.nodes[k];
        }
        auto [is_p, idx] = rods[k];
        // K = d/dtau, L = d/dphi: on P = 0 the kernel is p^2 K + L, on Q = 0 it is K + q^2 L
        if (ex[idx]) {
            Rational r2 = *ex[idx] * *ex[idx];
            info.label = is_p ? KernelLabel::of(r2, 1) : KernelLabel::of(1, r2);
        } else {
            double r2 = roots[idx] * roots[idx];
            info.label = is_p ? KernelLabel::numeric(r2, 1) : KernelLabel::numeric(1, r2);
        }
        rs.rods.push_back(info);
    }
    rs.asymptotic_class = AsymptoticClass::AE_ALE;
    rs.killing_basis = "(d/dtau, d/dphi)";
    e.rods = rs;
    for (std::size_t i = 0; i < 4; ++i) e.derived["p" + std::to_string(i + 1)] = ex[i].value_or(Rational(roots[i]));
}

inline void build_chen_teo(CatalogueEntry& e)
{
    riemannian_only(e.params, e.family);
    const Params& p = e.params;
    Rational a0 = p.get("a0"), a1 = p.get("a1"), a2 = p.get("a2"), a3 = p.get("a3"), a4 = p.get("a4");
    require(p.get("k") > 0, "Chen-Teo needs k > 0");
    require(a4 > 0, "Chen-Teo needs a4 > 0");
    Polynomial X({a0, a1, a2, a3, a4});
    std::vector<std::optional<Rational>> ex;
    auto x = sorted_real_roots(X, ex);
    require(x.size() == 4 && x[1] < 0 && x[2] > 0 && x[0] < x[1] && x[2] < x[3],
            "X(x) must have four distinct real roots x1 < x2 < 0 < x3 < x4");
    bool exact = std::all_of(ex.begin(), ex.end(), [](const auto& r) { return r.has_value(); });
    RodStructure rs;
    rs.exact = exact;
    // corners (x2, x1), (x3, x1), (x3, x2) in increasing z
    std::vector<std::pair<int, int>> corners{{1, 0}, {2, 0}, {2, 1}};
    for (auto [i, j] : corners) {
        if (exact) {
            Rational s = *ex[i] + *ex[j];
            Rational z = -(a2 + a3 * s + a4 * s * s) / 2;
            rs.nodes.push_back(z);
            rs.node_values.push_back(z.get_d());
        } else {
            double s = x[i] + x[j];
            rs.node_values.push_back(-(a2.get_d() + a3.get_d() * s + a4.get_d() * s * s) / 2);
        }
    }
    Rational nu = p.get("nu");
    // rods bottom to top: x = x2, y = x1, x = x3, y = x2; the kernel is G K - F L
    std::vector<std::pair<bool, int>> rods{{true, 1}, {false, 0}, {true, 2}, {false, 1}};
    for (std::size_t k = 0; k < 4; ++k) {
        RodInfo info;
        if (k > 0) {
            info.lower_value = rs.node_values[k - 1];
            if (exact) info.lower = rs.nodes[k - 1];
        }
        if (k < 3) {
            info.upper_value = rs.node_values[k];
            if (exact) info.upper = rs.nodes[k];
        }
        auto [on_x, idx] = rods[k];
        if (ex[idx]) {
            Rational r = *ex[idx], r2 = r * r;
            Rational g = on_x ? Rational((a0 * (1 - 2 * nu) - 2 * nu * a1 * r - nu * nu * a4 * r2 * r2) / r2)
                              : Rational(-(nu * nu * a0 + 2 * nu * a3 * r2 * r + (2 * nu - 1) * a4 * r2 * r2) / r2);
            info.label = KernelLabel::of(g, -1);
        } else {
            double r = x[idx], r2 = r * r, n = nu.get_d();
            double g = on_x ? (a0.get_d() * (1 - 2 * n) - 2 * n * a1.get_d() * r - n * n * a4.get_d() * r2 * r2) / r2
                            : -(n * n * a0.get_d() + 2 * n * a3.get_d() * r2 * r + (2 * n - 1) * a4.get_d() * r2 * r2) / r2;
            info.label = KernelLabel::numeric(g, -1);
        }
        rs.rods.push_back(info);
    }
    rs.asymptotic_class = AsymptoticClass::AF_ALF;
    rs.killing_basis = "(d/dtau, d/dphi)";
    e.rods = rs;
    for (std::size_t i = 0; i < 4; ++i) e.derived["x" + std::to_string(i + 1)] = ex[i].value_or(Rational(x[i]));
}

} // namespace detail

inline CatalogueEntry make_entry(const std::string& family, const Params& params)
{
    family_info(family);
    CatalogueEntry e;
    e.family = family;
    e.params = params;
    e.signature = params.signature.value_or(Signature::Riemannian);
    if (family == "flat_e4") detail::build_flat(e);
    else if (family == "schwarzschild") detail::build_schwarzschild(e);
    else if (family == "kerr") detail::build_kerr(e);
    else if (family == "taub_nut") detail::build_taub_nut(e);
    else if (family == "sdtn") detail::build_sdtn(e);
    else if (family == "taub_bolt") detail::build_taub_bolt(e);
    else if (family == "kerr_taub_bolt") detail::build_kerr_taub_bolt(e);
    else if (family == "multi_taub_nut") detail::build_multi_gh(e, 1);
    else if (family == "multi_eguchi_hanson") detail::build_multi_gh(e, 0);
    else if (family == "bazaikin") detail::build_bazaikin(e);
    else if (family == "double_schwarzschild") {
        detail::require(params.nodes.size() == 4, "double Schwarzschild needs 4 nodes a0 < a1 < a2 < a3");
        detail::build_weyl(e, false);
    } else if (family == "weyl_even") detail::build_weyl(e, false);
    else if (family == "c_metric") detail::build_c_metric(e);
    else if (family == "weyl_odd") detail::build_weyl(e, true);
    else if (family == "plebanski_demianski") detail::build_plebanski_demianski(e);
    else if (family == "chen_teo") detail::build_chen_teo(e);
    detail::finish(e);
    return e;
}

inline Params demo_params(const std::string& family)
{
    const FamilyInfo& f = family_info(family);
    Params p;
    for (const auto& [k, v] : f.demo) {
        if (k == "nodes") {
            std::size_t start = 0;
            while (start <= v.size()) {
                std::size_t comma = v.find(',', start);
                if (comma == std::string::npos) comma = v.size();
                p.nodes.push_back(parse_rational(v.substr(start, comma - start)));
                start = comma + 1;
            }
        } else {
            p.values[k] = parse_rational(v);
        }
    }
    return p;
}

inline const RodStructure& rod_structure(const CatalogueEntry& e) { return e.rods; }

inline Rational node_gauge(const CatalogueEntry& e, std::size_t node_index)
{
    return node_index < e.node_gauges.size() ? e.node_gauges[node_index] : Rational(0);
}

inline const PatchingMatrix& patching_matrix(const CatalogueEntry& e, std::size_t rod_index)
{
    if (rod_index >= e.rod_count())
        throw Error(ErrorKind::InvalidArgument, "rod index " + std::to_string(rod_index) + " out of range (0.."
                                                    + std::to_string(e.rod_count() - 1) + ")");
    if (e.matrices.empty())
        throw Error(ErrorKind::NotImplementedInPaper,
                    e.family + ": closed-form patching matrices are not available; only ansatz shapes are checked");
    return e.matrices[rod_index];
}

// Change of Killing basis and twist constant: C = [[1/alpha, 0], [beta z + gamma, alpha]].
inline PatchingMatrix killing_basis_change(const PatchingMatrix& P, const Rational& alpha, const Rational& beta,
                                           const Rational& gamma)
{
    if (alpha == 0) throw Error(ErrorKind::InvalidConjugation, "alpha must be nonzero");
    RationalFunction c11 = detail::rf(1 / alpha);
    RationalFunction c21 = detail::rf(beta) * detail::Zf() + detail::rf(gamma);
    RationalFunction c22 = detail::rf(alpha);
    PatchingMatrix Q = P;
    Q.p11 = c11 * c11 * P.p11;
    Q.p12 = c11 * (c21 * P.p11 + c22 * P.p12);
    Q.p22 = c21 * c21 * P.p11 + detail::rf(2) * c21 * c22 * P.p12 + c22 * c22 * P.p22;
    if (!(Q.det() == P.det())) throw std::logic_error("Killing basis change altered the determinant");
    return Q;
}

// ---- ansatz shapes for matrices without closed forms ----

struct ShapeReport {
    bool accepted = false;
    int deg_den = -1, deg_n11 = -1, deg_n12 = -1, deg_n22 = -1;
    std::string reason;
};

namespace detail {

inline ShapeReport shape_check(const PatchingMatrix& P, int d, int n11, int n12, int n22)
{
    ShapeReport r;
    Polynomial D = Polynomial::constant(1);
    for (const auto* f : {&P.p11, &P.p12, &P.p22}) D = lcm(D, f->den());
    auto lift = [&](const RationalFunction& f) { return f.num() * exact_div(D, f.den()); };
    r.deg_den = D.degree();
    r.deg_n11 = lift(P.p11).degree();
    r.deg_n12 = lift(P.p12).degree();
    r.deg_n22 = lift(P.p22).degree();
    if (r.deg_den != d || r.deg_n11 != n11 || r.deg_n12 != n12 || r.deg_n22 != n22) {
        r.reason = "degree pattern (" + std::to_string(r.deg_n11) + ", " + std::to_string(r.deg_n12) + ", "
                   + std::to_string(r.deg_n22) + ")/" + std::to_string(r.deg_den) + " differs from ("
                   + std::to_string(n11) + ", " + std::to_string(n12) + ", " + std::to_string(n22) + ")/"
                   + std::to_string(d);
        return r;
    }
    if (!P.nodes.empty()) {
        Polynomial nodes_poly = from_roots(P.nodes);
        if (!(D.monic() == nodes_poly.monic()) && P.nodes.size() == static_cast<std::size_t>(d)) {
            r.reason = "common denominator does not vanish exactly at the nodes";
            return r;
        }
    }
    r.accepted = true;
    return r;
}

} // namespace detail

// (quadratic, linear, quartic) over a cubic
inline ShapeReport check_pd_shape(const PatchingMatrix& P) { return detail::shape_check(P, 3, 2, 1, 4); }

// (cubic, linear, cubic) over the cubic node polynomial
inline ShapeReport check_ct_shape(const PatchingMatrix& P) { return detail::shape_check(P, 3, 3, 1, 3); }

} // namespace rodmat

#endif
