#ifndef RODMAT_INVERSE_HPP
#define RODMAT_INVERSE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catalogue.hpp"
#include "mpoly.hpp"

namespace rodmat {

// Known asymptotic charges; a missing charge becomes an unknown of the system.
// For AE/ALE the mass slot holds M.
struct ChargeInput {
    std::optional<Rational> m, N, L;
};

using ZPoly = std::vector<MPoly>; // coefficient of z^k at index k

struct AnsatzSystem {
    AsymptoticClass cls = AsymptoticClass::AF_ALF;
    Signature signature = Signature::Riemannian;
    int n_nodes = 0;
    std::map<std::string, Rational> charges;
    std::vector<std::string> unknowns;
    bool nodes_given = false;
    std::vector<Rational> nodes; // centred (sum zero) when given
    Rational shift = 0;          // caller's nodes are the centred ones plus shift
    ZPoly p11, p12, p22, delta;
    std::vector<MPoly> equations; // coefficient of z^k in p11 p22 - p12^2 - s delta^2, k = 0..2n
    std::vector<std::string> constraints; // contradictions found while building (e.g. L != 0 with one node)

    int nvars() const { return std::max<int>(1, static_cast<int>(unknowns.size())); }
    int index_of(const std::string& name) const
    {
        for (std::size_t i = 0; i < unknowns.size(); ++i)
            if (unknowns[i] == name) return static_cast<int>(i);
        return -1;
    }
    std::vector<std::string> var_names() const
    {
        std::vector<std::string> v = unknowns;
        if (v.empty()) v.push_back("_");
        return v;
    }
};

struct Interval {
    Rational lo, hi;

    static Interval point(const Rational& x) { return {x, x}; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Interval operator*(const Interval& a, const Interval& b)
    {
        Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
    }
    friend Interval operator*(const Rational& s, const Interval& a)
    {
        Rational x = s * a.lo, y = s * a.hi;
        return x <= y ? Interval{x, y} : Interval{y, x};
    }
};

inline Interval eval_interval(const MPoly& p, const std::vector<Interval>& x)
{
    Interval acc = Interval::point(0);
    for (const auto& [m, c] : p.terms()) {
        Interval term = Interval::point(1);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e < m[i]; ++e) term = term * x[i];
        acc = acc + c * term;
    }
    return acc;
}

struct Assignment {
    std::string name;
    enum class Kind { Exact, Interval, Expression } kind = Kind::Exact;
    Rational value;
    Interval enclosure;
    std::string expression; // in the free unknowns
    MPoly poly;             // the same expression as a polynomial

    double approx() const
    {
        if (kind == Kind::Exact) return value.get_d();
        if (kind == Kind::Interval) return Rational((enclosure.lo + enclosure.hi) / 2).get_d();
        return NAN;
    }
};

struct Solution {
    std::vector<Assignment> values;
    std::vector<std::string> free;
    std::vector<std::string> constraints; // remaining relations among free unknowns
    std::vector<MPoly> constraint_polys;
    std::optional<PatchingMatrix> matrix;
    std::string branch;
    std::string tag = "Unknown";
    bool verified = false;

    const Assignment* find(const std::string& name) const
    {
        for (const auto& a : values)
            if (a.name == name) return &a;
        return nullptr;
    }
};

struct SolutionSet {
    std::vector<Solution> solutions;
    std::optional<Polynomial> residual; // univariate polynomial the system reduced to
    std::string residual_variable;
    std::vector<RealRoot> residual_roots;
    std::vector<std::string> rejected;
};

namespace detail {

inline ZPoly zp_mul(const ZPoly& a, const ZPoly& b, int nv)
{
    if (a.empty() || b.empty()) return {};
    ZPoly out(a.size() + b.size() - 1, MPoly(nv));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

inline ZPoly zp_sub(ZPoly a, const ZPoly& b, int nv)
{
    if (a.size() < b.size()) a.resize(b.size(), MPoly(nv));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] - b[i];
    return a;
}

inline ZPoly zp_scale(const Rational& s, ZPoly a)
{
    for (auto& c : a) c = s * c;
    return a;
}

inline std::string zpoly_string(const ZPoly& p, const std::vector<std::string>& names)
{
    std::string out;
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
        if (p[k].is_zero()) continue;
        std::string c = p[k].to_string(names);
        if (!out.empty()) out += " + ";
        out += "(" + c + ")";
        if (k > 0) out += k == 1 ? "*z" : "*z^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

} // namespace detail

inline AnsatzSystem build_ansatz(AsymptoticClass cls, Signature sig, int n, const ChargeInput& charges,
                                 const std::optional<std::vector<Rational>>& nodes = std::nullopt)
{
    if (n < 1 || n > 3) throw Error(ErrorKind::Unsupported, "only 1, 2 or 3 nodes are supported");
    if (cls == AsymptoticClass::Other) throw Error(ErrorKind::InvalidArgument, "asymptotic class must be ALF or ALE");
    AnsatzSystem S;
    S.cls = cls;
    S.signature = sig;
    S.n_nodes = n;
    bool alf = cls == AsymptoticClass::AF_ALF;
    if (nodes) {
        if (static_cast<int>(nodes->size()) != n)
            throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(n) + " node positions");
        std::vector<Rational> v = *nodes;
        std::sort(v.begin(), v.end());
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] == v[i - 1]) throw Error(ErrorKind::InvalidArgument, "node positions must be distinct");
        Rational sum = 0;
        for (const auto& a : v) sum += a;
        S.shift = sum / n;
        for (auto& a : v) a -= S.shift;
        S.nodes = v;
        S.nodes_given = true;
    }

    const char* mass = alf ? "m" : "M";
    std::vector<std::pair<std::string, std::optional<Rational>>> slots;
    slots.push_back({mass, charges.m});
    if (alf) slots.push_back({"N", charges.N});
    bool has_L_slot = !(n == 1);
    if (has_L_slot) slots.push_back({"L", charges.L});
    for (const auto& [name, v] : slots) {
        if (v) S.charges[name] = *v;
        else S.unknowns.push_back(name);
    }
    if (!has_L_slot && charges.L && *charges.L != 0)
        S.constraints.push_back("a single node admits no angular momentum, but L = " + charges.L->get_str());
    if (!alf && charges.N && *charges.N != 0)
        S.constraints.push_back("AE/ALE asymptotics carry no NUT charge, but N = " + charges.N->get_str());

    static const char* letters[] = {"A", "B", "C", "D", "E"};
    int free_coeffs = alf ? (n == 1 ? 0 : n == 2 ? 2 : 5) : (n == 1 ? 1 : n == 2 ? 2 : 5);
    for (int i = 0; i < free_coeffs; ++i) S.unknowns.push_back(letters[i]);
    if (!S.nodes_given && n == 2) S.unknowns.push_back("sigma2");
    if (!S.nodes_given && n == 3) {
        S.unknowns.push_back("e2");
        S.unknowns.push_back("e3");
    }

    int nv = S.nvars();
    auto c = [&](const Rational& x) { return MPoly::constant(nv, x); };
    auto V = [&](const std::string& name) { return MPoly::var(nv, S.index_of(name)); };
    auto K = [&](const std::string& name) { return S.charges.count(name) ? c(S.charges.at(name)) : V(name); };
    Rational s = target_det(sig);

    if (alf) {
        MPoly m = K("m"), N = K("N");
        MPoly L = has_L_slot ? K("L") : c(0);
        if (n == 1) {
            S.p11 = {2 * m, c(1)};
            S.p12 = {2 * N};
            S.p22 = {(-2 * s) * m, c(s)};
        } else if (n == 2) {
            S.p11 = {V("A"), 2 * m, c(1)};
            S.p12 = {-2 * L, 2 * N};
            S.p22 = {V("B"), (-2 * s) * m, c(s)};
        } else {
            S.p11 = {V("B"), V("A"), 2 * m, c(1)};
            S.p12 = {V("C"), -2 * L, 2 * N};
            S.p22 = {V("E"), V("D"), (-2 * s) * m, c(s)};
        }
    } else {
        MPoly M = K("M");
        MPoly L = has_L_slot ? K("L") : c(0);
        if (n == 1) {
            S.p11 = {c(Rational(1, 2))};
            S.p12 = {};
            S.p22 = {V("A"), (2 * s) * M, c(2 * s)};
        } else if (n == 2) {
            S.p11 = {Rational(-1, 2) * M, c(Rational(1, 2))};
            S.p12 = {-2 * L};
            S.p22 = {(2 * s) * V("B"), (2 * s) * V("A"), (2 * s) * M, c(2 * s)};
        } else {
            S.p11 = {V("A"), Rational(-1, 2) * M, c(Rational(1, 2))};
            S.p12 = {V("B"), -2 * L};
            S.p22 = {V("E"), V("D"), V("C"), (2 * s) * M, c(2 * s)};
        }
    }

    if (n == 1) {
        S.delta = {c(0), c(1)};
    } else if (n == 2) {
        MPoly s2 = S.nodes_given ? c(S.nodes[1] * S.nodes[1]) : V("sigma2");
        S.delta = {-s2, c(0), c(1)};
    } else if (S.nodes_given) {
        Polynomial d = from_roots(S.nodes);
        for (int k = 0; k <= 3; ++k) S.delta.push_back(c(d[k]));
    } else {
        S.delta = {-V("e3"), V("e2"), c(0), c(1)};
    }

    ZPoly det = detail::zp_sub(detail::zp_mul(S.p11, S.p22, nv), detail::zp_mul(S.p12, S.p12, nv), nv);
    det = detail::zp_sub(det, detail::zp_scale(s, detail::zp_mul(S.delta, S.delta, nv)), nv);
    det.resize(2 * n + 1, MPoly(nv));
    S.equations = det;
    return S;
}

// Coordinates of P (in the caller's frame) in the unknowns of S, when P has the ansatz shape.
inline std::optional<std::vector<Rational>> ansatz_point(const AnsatzSystem& S, const PatchingMatrix& P)
{
    if (static_cast<int>(P.nodes.size()) != S.n_nodes) return std::nullopt;
    PatchingMatrix Q = S.shift != 0 ? translate(P, -S.shift) : P;
    Polynomial D = from_roots(Q.nodes);
    int nv = S.nvars();
    std::vector<std::optional<Rational>> x(nv);
    auto match = [&](const ZPoly& slots, const Polynomial& actual) {
        int top = std::max<int>(static_cast<int>(slots.size()) - 1, actual.degree());
        for (int k = 0; k <= top; ++k) {
            MPoly c = k < static_cast<int>(slots.size()) ? slots[k] : MPoly(nv);
            Rational target = actual[k];
            if (c.is_constant()) {
                if (c.constant_value() != target) return false;
                continue;
            }
            auto vars = c.variables();
            if (vars.size() != 1 || c.degree_in(*vars.begin()) != 1) return false;
            int v = *vars.begin();
            Rational value = (target - c.coeff_in(v, 0).constant_value()) / c.coeff_in(v, 1).constant_value();
            if (x[v] && *x[v] != value) return false;
            x[v] = value;
        }
        return true;
    };
    auto numerator = [&](const RationalFunction& f) -> std::optional<Polynomial> {
        auto [q, r] = divmod(f.num() * D, f.den());
        if (!r.is_zero()) return std::nullopt;
        return q;
    };
    auto n11 = numerator(Q.p11), n12 = numerator(Q.p12), n22 = numerator(Q.p22);
    if (!n11 || !n12 || !n22) return std::nullopt;
    if (!match(S.delta, D) || !match(S.p11, *n11) || !match(S.p12, *n12) || !match(S.p22, *n22)) return std::nullopt;
    std::vector<Rational> out(nv, Rational(0));
    for (int v = 0; v < static_cast<int>(S.unknowns.size()); ++v) {
        if (!x[v]) return std::nullopt;
        out[v] = *x[v];
    }
    return out;
}

inline std::vector<MPoly> determinant_equations(const AnsatzSystem& S) { return S.equations; }

namespace detail {

struct Pivot {
    int var;
    MPoly expr;
};

struct SolveState {
    std::vector<MPoly> eqs;
    std::map<int, Rational> fixed;
    std::vector<Pivot> pivots;
    std::optional<std::pair<int, RealRoot>> irrational;
};

struct RawSolution {
    std::map<int, Rational> fixed;
    std::vector<Pivot> pivots;
    std::optional<std::pair<int, RealRoot>> irrational;
    std::vector<MPoly> remaining;
};

inline std::vector<MPoly> substitute_all(const std::vector<MPoly>& eqs, int v, const MPoly& e)
{
    std::vector<MPoly> out;
    for (const auto& q : eqs) {
        MPoly r = q.substitute(v, e);
        if (!r.is_zero()) out.push_back(r);
    }
    return out;
}

class Solver {
public:
    Solver(const AnsatzSystem& S, SolutionSet& out) : S_(S), out_(out) {}

    void explore(SolveState st, int depth = 0)
    {
        if (depth > 40) throw Error(ErrorKind::Unsupported, "system too large for the elimination strategy");
        while (true) {
            std::vector<MPoly> kept;
            for (const auto& q : st.eqs) {
                if (q.is_zero()) continue;
                if (q.is_constant()) {
                    contradictions_.push_back(q.constant_value().get_str() + " = 0");
                    return;
                }
                kept.push_back(q);
            }
            st.eqs = kept;
            if (!pivot_once(st)) break;
        }
        if (st.eqs.empty()) {
            raw_.push_back({st.fixed, st.pivots, st.irrational, {}});
            return;
        }
        for (std::size_t i = 0; i < st.eqs.size(); ++i) {
            if (st.eqs[i].variables().size() != 1) continue;
            int v = *st.eqs[i].variables().begin();
            Polynomial u = st.eqs[i].to_univariate(v);
            if (!out_.residual) {
                out_.residual = u;
                out_.residual_variable = S_.var_names()[v];
                out_.residual_roots = real_roots(u);
            }
            std::vector<MPoly> others;
            for (std::size_t j = 0; j < st.eqs.size(); ++j)
                if (j != i) others.push_back(st.eqs[j]);
            for (auto root : real_roots(u)) {
                if (root.exact) {
                    SolveState next = st;
                    next.fixed[v] = root.value;
                    next.eqs = substitute_all(others, v, MPoly::constant(S_.nvars(), root.value));
                    for (auto& p : next.pivots) p.expr = p.expr.substitute(v, root.value);
                    explore(next, depth + 1);
                } else {
                    refine(root, Rational(1, mpz_class(1) << 80));
                    raw_.push_back({st.fixed, st.pivots, std::make_pair(v, root), others});
                }
            }
            if (real_roots(u).empty()) contradictions_.push_back(u.to_string() + " has no real root");
            return;
        }
        std::set<int> live;
        for (const auto& q : st.eqs)
            for (int v : q.variables()) live.insert(v);
        if (st.eqs.size() < live.size()) {
            raw_.push_back({st.fixed, st.pivots, st.irrational, st.eqs});
            return;
        }
        // eliminate a shared unknown between two equations
        for (std::size_t i = 0; i < st.eqs.size(); ++i)
            for (std::size_t j = i + 1; j < st.eqs.size(); ++j)
                for (int v : st.eqs[i].variables()) {
                    if (!st.eqs[j].variables().count(v)) continue;
                    MPoly r = resultant(st.eqs[i], st.eqs[j], v);
                    if (r.is_zero()) continue;
                    SolveState next = st;
                    next.eqs[j] = r;
                    explore(next, depth + 1);
                    return;
                }
        // underdetermined: the remaining relations stay as constraints
        raw_.push_back({st.fixed, st.pivots, st.irrational, st.eqs});
    }

    const std::vector<RawSolution>& raw() const { return raw_; }
    const std::vector<std::string>& contradictions() const { return contradictions_; }

private:
    bool pivot_once(SolveState& st)
    {
        // prefer few variables, then later ansatz coefficients over charges over node parameters
        auto rank = [&](int v) {
            std::string n = S_.var_names()[v];
            if (n == "sigma2" || n == "e2" || n == "e3") return 0;
            if (n == "m" || n == "N" || n == "L" || n == "M") return 1;
            return 2 + v;
        };
        int best_eq = -1, best_var = -1;
        std::size_t best_vars = 1000;
        for (std::size_t i = 0; i < st.eqs.size(); ++i) {
            auto vars = st.eqs[i].variables();
            for (int v : vars) {
                if (st.eqs[i].degree_in(v) != 1) continue;
                MPoly cf = st.eqs[i].coeff_in(v, 1);
                if (!cf.is_constant() || cf.is_zero()) continue;
                if (vars.size() < best_vars || (vars.size() == best_vars && rank(v) > rank(best_var))) {
                    best_vars = vars.size();
                    best_eq = static_cast<int>(i);
                    best_var = v;
                }
            }
        }
        if (best_eq < 0) return false;
        const MPoly& q = st.eqs[best_eq];
        Rational cf = q.coeff_in(best_var, 1).constant_value();
        MPoly expr = Rational(-1 / cf) * q.coeff_in(best_var, 0);
        std::vector<MPoly> rest;
        for (std::size_t j = 0; j < st.eqs.size(); ++j)
            if (static_cast<int>(j) != best_eq) rest.push_back(st.eqs[j]);
        st.eqs = substitute_all(rest, best_var, expr);
        for (auto& p : st.pivots) p.expr = p.expr.substitute(best_var, expr);
        st.pivots.push_back({best_var, expr});
        return true;
    }

    const AnsatzSystem& S_;
    SolutionSet& out_;
    std::vector<RawSolution> raw_;
    std::vector<std::string> contradictions_;
};

inline Polynomial zpoly_at(const ZPoly& p, const std::vector<Rational>& x)
{
    std::vector<Rational> c;
    for (const auto& m : p) c.push_back(m.eval(x));
    return Polynomial(c);
}

inline std::string classify_tag_for_branch(const AnsatzSystem& S, const std::vector<Rational>& x)
{
    if (S.n_nodes != 2) return {};
    auto val = [&](const std::string& name) {
        int i = S.index_of(name);
        return i >= 0 ? x[i] : S.charges.at(name);
    };
    Rational s = target_det(S.signature);
    if (S.cls == AsymptoticClass::AF_ALF) {
        Rational m = val("m"), N = val("N");
        return m * m == N * N ? "m^2 = N^2" : "m^2 != N^2";
    }
    Rational M = val("M"), L = val("L");
    Rational s2 = S.nodes_given ? S.nodes[1] * S.nodes[1] : val("sigma2");
    (void)s;
    if (s2 == M * M - 2 * L && s2 == M * M + 2 * L) return "sigma^2 = M^2 +- 2L";
    if (s2 == M * M - 2 * L) return "sigma^2 = M^2 - 2L";
    if (s2 == M * M + 2 * L) return "sigma^2 = M^2 + 2L";
    return {};
}

} // namespace detail

// ---- classification against the catalogue ----

namespace detail {

inline PatchingMatrix kerr_lorentzian_top(const Rational& m, const Rational& a, const Rational& sigma)
{
    RationalFunction D = Zf() * Zf() - rf(sigma * sigma);
    RationalFunction p11 = ((Zf() + m) * (Zf() + m) + rf(a * a)) / D;
    RationalFunction p12 = rf(-2 * m * a) / D;
    RationalFunction p22 = ((Zf() - m) * (Zf() - m) + rf(a * a)) / D;
    return PatchingMatrix(p11, p12, p22, Signature::Lorentzian, {-sigma, sigma});
}

inline std::optional<Rational> node_sigma(const PatchingMatrix& P)
{
    if (P.nodes.size() != 2 || P.nodes[0] != -P.nodes[1]) return std::nullopt;
    return P.nodes[1];
}

inline bool gh_equivalent(const PatchingMatrix& P)
{
    for (int sign : {-1, 1}) {
        ConjugationRecord C{1, 0, Rational(sign), 1};
        if (is_gibbons_hawking_form(congruence(P, C))) return true;
    }
    return is_gibbons_hawking_form(P);
}

} // namespace detail

inline std::string classify_solution(const PatchingMatrix& input)
{
    PatchingMatrix P = input;
    // classify in the centred frame
    if (!P.nodes.empty()) {
        Rational sum = 0;
        for (const auto& a : P.nodes) sum += a;
        Rational mean = sum / static_cast<long>(P.nodes.size());
        if (mean != 0) P = translate(P, -mean);
    }
    std::size_t n = P.nodes.size();
    if (detail::gh_equivalent(P)) return n == 1 ? "SDTN" : "multi-centre-GH";
    AsymptoticClass cls = asymptotic_classify(P);
    PatchingMatrix Pn = P;
    if (cls == AsymptoticClass::Other) {
        try {
            Pn = normalize_alf(P).matrix;
            cls = asymptotic_classify(Pn);
        } catch (const Error&) {
            return "Unknown";
        }
    }
    Charges ch;
    try {
        ch = extract_charges(Pn);
    } catch (const Error&) {
        return "Unknown";
    }
    auto sigma = detail::node_sigma(P);
    if (cls == AsymptoticClass::AF_ALF && n == 2 && sigma && ch.mass_m != 0) {
        Rational m = ch.mass_m, N = ch.nut_N, a = ch.angmom_L / m;
        if (P.signature == Signature::Riemannian) {
            if (N == 0 && m * m + a * a == *sigma * *sigma && conjugation_equivalent(Pn, kerr_top(m, a, *sigma)))
                return "Kerr";
            if (m * m + a * a - N * N == *sigma * *sigma
                && conjugation_equivalent(Pn, kerr_taub_bolt_top(m, a, N, *sigma)))
                return "Kerr-Taub-bolt";
        } else if (N == 0 && m * m - a * a == *sigma * *sigma
                   && conjugation_equivalent(Pn, detail::kerr_lorentzian_top(m, a, *sigma))) {
            return "Kerr";
        }
    }
    if (cls == AsymptoticClass::AE_ALE && n == 1 && P.signature == Signature::Riemannian) {
        PatchingMatrix flat(RationalFunction(1) / (Rational(2) * RationalFunction::z()), RationalFunction(),
                            Rational(-2) * RationalFunction::z(), Signature::Riemannian, {0});
        if (conjugation_equivalent(P, flat)) return "Flat-E4";
    }
    if (cls == AsymptoticClass::AE_ALE && n == 2 && sigma && P.signature == Signature::Riemannian) {
        // Bazaikin with b = 2, transformed by (alpha, beta, gamma) = (2, 1, a sigma / 2)
        Rational M = ch.eta_M, s = *sigma;
        Rational b = 2, a = b * M / s;
        PatchingMatrix ba = detail::gh_matrix((detail::rf(b) * detail::Zf() - detail::rf(a * s))
                                                  / (detail::Zf() * detail::Zf() - detail::rf(s * s)),
                                              Signature::Riemannian, {-s, s});
        PatchingMatrix target = killing_basis_change(ba, 2, 1, a * s / 2);
        PatchingMatrix flipped = congruence(P, ConjugationRecord{1, 0, 0, -1});
        if (conjugation_equivalent(P, target) || conjugation_equivalent(flipped, target))
            return "Bazaikin/Eguchi-Hanson";
    }
    return "Unknown";
}

inline bool solution_contains(const Solution& sol, const std::vector<Rational>& x)
{
    for (std::size_t v = 0; v < sol.values.size(); ++v) {
        const Assignment& a = sol.values[v];
        if (a.kind == Assignment::Kind::Exact && a.value != x[v]) return false;
        if (a.kind == Assignment::Kind::Interval && (x[v] < a.enclosure.lo || x[v] > a.enclosure.hi)) return false;
        if (a.kind == Assignment::Kind::Expression && a.poly.eval(x) != x[v]) return false;
    }
    for (const auto& g : sol.constraint_polys)
        if (g.eval(x) != 0) return false;
    return true;
}

inline SolutionSet solve_system(const AnsatzSystem& S)
{
    if (!S.constraints.empty()) throw Error(ErrorKind::NoSolution, S.constraints.front());
    SolutionSet out;
    detail::Solver solver(S, out);
    detail::SolveState init;
    init.eqs = S.equations;
    solver.explore(init);
    int nv = S.nvars();
    auto names = S.var_names();
    std::set<std::vector<Rational>> seen;

    for (const auto& raw : solver.raw()) {
        Solution sol;
        std::set<int> assigned;
        for (const auto& [v, x] : raw.fixed) assigned.insert(v);
        for (const auto& p : raw.pivots) assigned.insert(p.var);
        if (raw.irrational) assigned.insert(raw.irrational->first);
        std::set<int> free;
        for (int v = 0; v < static_cast<int>(S.unknowns.size()); ++v)
            if (!assigned.count(v)) free.insert(v);

        if (raw.irrational) {
            // interval enclosures for every unknown
            std::vector<Interval> box(nv, Interval::point(0));
            for (const auto& [v, x] : raw.fixed) box[v] = Interval::point(x);
            const RealRoot& r = raw.irrational->second;
            box[raw.irrational->first] = {r.lo, r.hi};
            bool ok = free.empty() && raw.remaining.empty();
            for (auto it = raw.pivots.rbegin(); it != raw.pivots.rend(); ++it) {
                box[it->var] = eval_interval(it->expr, box);
            }
            for (const auto& q : S.equations) ok = ok && eval_interval(q, box).contains_zero();
            for (int v = 0; v < static_cast<int>(S.unknowns.size()); ++v) {
                Assignment a;
                a.name = S.unknowns[v];
                a.kind = Assignment::Kind::Interval;
                a.enclosure = box[v];
                if (box[v].lo == box[v].hi) {
                    a.kind = Assignment::Kind::Exact;
                    a.value = box[v].lo;
                }
                sol.values.push_back(a);
            }
            sol.verified = ok;
            if (S.n_nodes == 2 && !S.nodes_given && box[S.index_of("sigma2")].hi <= 0) {
                out.rejected.push_back("sigma^2 <= 0");
                continue;
            }
            out.solutions.push_back(sol);
            continue;
        }

        // exact or parametric: resolve pivot expressions in reverse order
        std::map<int, MPoly> expr;
        for (const auto& [v, x] : raw.fixed) expr[v] = MPoly::constant(nv, x);
        for (auto it = raw.pivots.rbegin(); it != raw.pivots.rend(); ++it) {
            MPoly e = it->expr;
            for (const auto& [v, ev] : expr) e = e.substitute(v, ev);
            expr[it->var] = e;
        }
        bool exact = free.empty() && raw.remaining.empty();
        std::vector<Rational> x(nv, Rational(0));
        for (int v = 0; v < static_cast<int>(S.unknowns.size()); ++v) {
            Assignment a;
            a.name = S.unknowns[v];
            if (free.count(v)) {
                a.kind = Assignment::Kind::Expression;
                a.expression = a.name;
                a.poly = MPoly::var(nv, v);
            } else if (expr[v].is_constant()) {
                a.value = expr[v].constant_value();
                x[v] = a.value;
            } else {
                exact = false;
                a.kind = Assignment::Kind::Expression;
                a.expression = expr[v].to_string(names);
                a.poly = expr[v];
            }
            sol.values.push_back(a);
        }
        for (int v : free) sol.free.push_back(S.unknowns[v]);
        for (const auto& q : raw.remaining) {
            sol.constraints.push_back(q.to_string(names) + " = 0");
            sol.constraint_polys.push_back(q);
        }

        if (exact) {
            if (!seen.insert(x).second) continue;
            int si = S.index_of("sigma2");
            if (si >= 0 && x[si] <= 0) {
                out.rejected.push_back("sigma^2 = " + x[si].get_str() + " is not positive");
                continue;
            }
            sol.verified = true;
            for (const auto& q : S.equations) sol.verified = sol.verified && q.eval(x) == 0;
            sol.branch = detail::classify_tag_for_branch(S, x);
            // assemble P
            Polynomial D = detail::zpoly_at(S.delta, x);
            std::vector<Rational> nodes;
            if (S.n_nodes == 1) nodes = {0};
            else if (S.n_nodes == 2) {
                if (auto r = rational_sqrt(-D[0])) nodes = {-*r, *r};
            } else {
                auto rr = rational_roots(D);
                if (rr.size() == 3) for (auto& [r, k] : rr) nodes.push_back(r);
            }
            PatchingMatrix P(RationalFunction(detail::zpoly_at(S.p11, x), D),
                             RationalFunction(detail::zpoly_at(S.p12, x), D),
                             RationalFunction(detail::zpoly_at(S.p22, x), D), S.signature, nodes);
            if (!nodes.empty()) P.rod = Rod{nodes.back(), std::nullopt};
            if (S.shift != 0) P = translate(P, S.shift);
            sol.verified = sol.verified && det_check(P).pass;
            sol.matrix = P;
            sol.tag = classify_solution(P);
        } else {
            // parametric: each original equation must reduce to zero or to a multiple of a remaining constraint
            bool ok = true;
            for (const auto& q : S.equations) {
                MPoly r = q;
                for (const auto& [v, e] : expr) r = r.substitute(v, e);
                bool covered = r.is_zero();
                for (const auto& g : raw.remaining) {
                    if (covered || g.terms().empty() || r.terms().size() != g.terms().size()) continue;
                    Rational ratio = r.terms().begin()->second / g.terms().begin()->second;
                    covered = r == ratio * g;
                }
                ok = ok && covered;
            }
            sol.verified = ok;
            if (S.cls == AsymptoticClass::AF_ALF && S.n_nodes == 2) {
                std::vector<Rational> probe(nv, Rational(0));
                auto m = S.charges.count("m") ? S.charges.at("m") : Rational(0);
                auto N = S.charges.count("N") ? S.charges.at("N") : Rational(0);
                if (m * m == N * N) {
                    sol.branch = "m^2 = N^2";
                    sol.tag = "multi-centre-GH";
                }
                (void)probe;
            }
        }
        out.solutions.push_back(sol);
    }

    // identify solutions related by reversing the orientation of the second Killing vector (p12 -> -p12)
    std::vector<Solution> kept;
    for (const auto& s : out.solutions) {
        bool dup = false;
        if (s.matrix) {
            for (const auto& k : kept) {
                if (!k.matrix) continue;
                if (k.matrix->p11 == s.matrix->p11 && k.matrix->p22 == s.matrix->p22 && k.matrix->p12 == -s.matrix->p12)
                    dup = true;
            }
        }
        if (!dup) kept.push_back(s);
    }
    // keep the representative with non-negative leading off-diagonal coefficient
    for (auto& k : kept) {
        if (!k.matrix) continue;
        for (const auto& s : out.solutions) {
            if (!s.matrix || &s == &k) continue;
            if (k.matrix->p12 == -s.matrix->p12 && k.matrix->p11 == s.matrix->p11 && !k.matrix->p12.is_zero()
                && k.matrix->p12.num().leading() < 0)
                k = s;
        }
    }
    out.solutions = kept;
    if (out.solutions.empty()) {
        std::string why = solver.contradictions().empty() ? "no admissible solution"
                                                           : "contradiction: " + solver.contradictions().front();
        if (!out.rejected.empty()) why += "; rejected: " + out.rejected.front();
        throw Error(ErrorKind::NoSolution, why);
    }
    return out;
}

} // namespace rodmat

#endif
