#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include "rodmat/catalogue.hpp"
#include "rodmat/inverse.hpp"
#include "rodmat/splitting.hpp"

using namespace rodmat;

namespace {

RationalFunction Z() { return RationalFunction::z(); }
RationalFunction F(const Polynomial& n, const Polynomial& d = Polynomial::constant(1)) { return RationalFunction(n, d); }

Params with(std::map<std::string, Rational> v, std::optional<Signature> sig = std::nullopt)
{
    Params p;
    p.values = std::move(v);
    p.signature = sig;
    return p;
}

PatchingMatrix top(const std::string& family, const Params& p) { return make_entry(family, p).matrices.back(); }

struct Check {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

Check determinant_identities()
{
    Check c;
    int matrices = 0;
    std::set<std::string> fams;
    for (const auto& info : families()) {
        CatalogueEntry e = make_entry(info.name, demo_params(info.name));
        for (const auto& P : e.matrices) {
            Rational target = P.signature == Signature::Riemannian ? -1 : 1;
            c.require(P.det() == RationalFunction(target), info.name + ": det P is not " + target.get_str());
            c.require(det_check(P).pass, info.name + ": det_check failed");
            ++matrices;
            fams.insert(info.name);
        }
    }
    c.require(matrices >= 12, "only " + std::to_string(matrices) + " matrices");
    c.require(fams.size() >= 9, "only " + std::to_string(fams.size()) + " families");
    if (c.ok) c.detail = std::to_string(matrices) + " matrices across " + std::to_string(fams.size()) + " families";
    return c;
}

Check node_passing()
{
    Check c;
    Rational m = 3;
    Polynomial zp = Polynomial::linear(-m), zm = Polynomial::linear(m); // z + m, z - m
    PatchingMatrix plus(F(zp, zm), RationalFunction(), F(zm, zp), Signature::Lorentzian, {-m, m}, Rod{m, std::nullopt});
    PatchingMatrix zero = pass_node_standard(plus, m, Direction::Down).matrix;
    RationalFunction four = F(Rational(4) * zp * zm);
    c.require(zero.p11 == four && zero.p12.is_zero() && zero.p22 == RationalFunction(1) / four, "P0 mismatch");
    PatchingMatrix minus = pass_node_standard(zero, -m, Direction::Down).matrix;
    c.require(minus.p11 == F(zm, zp) && minus.p12.is_zero() && minus.p22 == F(zp, zm), "P- mismatch");

    CatalogueEntry d = make_entry("double_schwarzschild", demo_params("double_schwarzschild"));
    PatchingMatrix P = d.matrices.back();
    for (auto it = d.rods.nodes.rbegin(); it != d.rods.nodes.rend(); ++it) {
        P = pass_node_standard(P, *it, Direction::Down).matrix;
        c.require(det_check(P).pass, "determinant lost mid-cycle");
    }
    c.require(conjugation_equivalent(P, d.matrices.front()), "descending cycle does not reach the bottom rod");
    for (const auto& a : d.rods.nodes) P = pass_node_standard(P, a, Direction::Up).matrix;
    c.require(conjugation_equivalent(P, d.matrices.back()), "full cycle does not close");
    if (c.ok) c.detail = "P+ -> P0 -> P- exact; 4-node cycle closes";
    return c;
}

Check charges()
{
    Check c;
    auto same = [](const Charges& q, Rational m, Rational N, Rational L) { return q.mass_m == m && q.nut_N == N && q.angmom_L == L; };
    Charges kerr = extract_charges(top("kerr", with({{"m", 3}, {"a", 4}})));
    c.require(same(kerr, 3, 0, 12), "Kerr (3,4)");
    PatchingMatrix tn = normalize_alf(top("taub_nut", with({{"m", 5}, {"N", 4}}))).matrix;
    c.require(same(extract_charges(tn), 5, 4, 0), "normalized Taub-NUT (5,4)");
    Charges sd = extract_charges(normalize_alf(top("sdtn", with({{"m", 2}}))).matrix);
    c.require(sd.nut_N == 2 && sd.mass_m == 2, "SDTN m = 2");
    if (c.ok) c.detail = "(3,0,12), (5,4,0), N = m = 2";
    return c;
}

const Assignment* exact(const Solution& s, const std::string& name)
{
    const Assignment* a = s.find(name);
    return a && a->kind == Assignment::Kind::Exact ? a : nullptr;
}

Check inverse()
{
    Check c;
    const auto AF = AsymptoticClass::AF_ALF, AE = AsymptoticClass::AE_ALE;
    const auto R = Signature::Riemannian;

    SolutionSet one = solve_system(build_ansatz(AF, R, 1, {Rational(2), std::nullopt, std::nullopt}));
    c.require(one.solutions.size() == 1, "(i) expected one solution");
    if (one.solutions.size() == 1) {
        const auto& s = one.solutions[0];
        c.require(s.matrix && conjugation_equivalent(*s.matrix, top("sdtn", with({{"m", 2}}))), "(i) not SDTN");
    }

    SolutionSet kerr = solve_system(build_ansatz(AF, R, 2, {Rational(3), Rational(0), Rational(12)}));
    c.require(kerr.solutions.size() == 1, "(ii) expected one solution");
    if (kerr.solutions.size() == 1) {
        const auto& s = kerr.solutions[0];
        const Assignment* s2 = exact(s, "sigma2");
        c.require(s.tag == "Kerr" && s2 && s2->value == 25 && s.matrix && s.matrix->nodes == std::vector<Rational>{-5, 5},
                  "(ii) not Kerr with sigma 5");
    }

    SolutionSet eh = solve_system(build_ansatz(AE, R, 2, {Rational(0), std::nullopt, Rational(-1, 2)}));
    c.require(eh.solutions.size() == 1, "(iii) expected one solution");
    if (eh.solutions.size() == 1) {
        const auto& s = eh.solutions[0];
        const Assignment *s2 = exact(s, "sigma2"), *A = exact(s, "A"), *B = exact(s, "B");
        c.require(s2 && s2->value == 1 && A && A->value == -2 && B && B->value == 0, "(iii) wrong sigma, A, B");
        c.require(s.matrix && s.matrix->det() == RationalFunction(-1), "(iii) det is not -1");
    }

    SolutionSet q = solve_system(build_ansatz(AE, R, 3, {Rational(1, 3), std::nullopt, Rational(2)},
                                              std::vector<Rational>{-3, 1, 2}));
    c.require(q.residual && q.residual_variable == "A" && q.residual->degree() == 4, "(iv) no quartic in A");
    if (q.residual) {
        for (const auto& r : q.residual_roots) {
            if (r.exact) {
                c.require(q.residual->eval(r.value) == 0, "(iv) rational root is not a root");
            } else {
                int sl = sgn(q.residual->eval(r.lo)), sh = sgn(q.residual->eval(r.hi));
                c.require(r.lo < r.hi && sl * sh < 0 && r.hi - r.lo < Rational(1, 1 << 30), "(iv) root not isolated");
            }
        }
        c.require(q.residual_roots.size() == static_cast<std::size_t>(count_real_roots(*q.residual)),
                  "(iv) root count disagrees with Sturm count");
    }
    c.require(!q.solutions.empty(), "(iv) no solutions");
    for (const auto& s : q.solutions) c.require(s.verified, "(iv) unverified solution");
    if (c.ok)
        c.detail = "SDTN; Kerr sigma = 5; EH sigma = 1, A = -2, B = 0; quartic with " +
                   std::to_string(q.residual_roots.size()) + " isolated roots";
    return c;
}

double relerr(double got, double want) { return std::abs(got - want) / std::abs(want); }

Check splitting()
{
    Check c;
    std::mt19937 rng(20261014);
    std::uniform_real_distribution<double> ur(0.05, 3.0), uz(0.25, 4.0);
    AxisFunction inv = AxisFunction::rational(RationalFunction(1) / Z());
    double w1 = 0;
    for (int k = 0; k < 20; ++k) {
        double r = ur(rng), z = uz(rng);
        w1 = std::max(w1, relerr(a0_extract(inv, r, z, 256).real(), 1 / std::hypot(r, z)));
    }
    c.require(w1 <= 1e-10, "1/z: relative error " + std::to_string(w1));

    Grid g{0.2, 2.0, 1.5, 4.0, 16, 16};
    BulkField mtn = split_gh(top("multi_taub_nut", demo_params("multi_taub_nut")), g);
    double w2 = 0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double r = g.r(i), z = g.z(j);
            w2 = std::max(w2, relerr(mtn.at(i, j).a, 1 + 1 / std::hypot(r, z - 1) + 1 / std::hypot(r, z + 1)));
        }
    c.require(w2 <= 1e-8, "mTN: relative error " + std::to_string(w2));

    BulkField sch = split_diagonal(top("schwarzschild", with({{"m", 1}}, Signature::Lorentzian)), g);
    double w3 = 0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double r = g.r(i), z = g.z(j);
            double r0 = std::hypot(r, z + 1), r1 = std::hypot(r, z - 1);
            w3 = std::max(w3, relerr(1 / sch.at(i, j).a, (r0 + r1 - 2) / (r0 + r1 + 2)));
        }
    c.require(w3 <= 1e-8, "Schwarzschild: relative error " + std::to_string(w3));
    char buf[160];
    std::snprintf(buf, sizeof buf, "max rel err 1/z %.1e, mTN %.1e, Schwarzschild %.1e", w1, w2, w3);
    if (c.ok) c.detail = buf;
    return c;
}

Check yang_convergence()
{
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    Grid g{0.3, 1.5, 1.5, 3.0, 64, 64};
    PatchingMatrix sch = top("schwarzschild", with({{"m", 1}}, Signature::Lorentzian));
    PatchingMatrix mtn = top("multi_taub_nut", demo_params("multi_taub_nut"));
    ResidualReport a = convergence_study([&](const Grid& gg, int k) { return yang_residual(split_diagonal(sch, gg), k); }, g);
    ResidualReport b = convergence_study([&](const Grid& gg, int k) { return yang_residual(split_gh(mtn, gg), k); }, g);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto in_band = [](const ResidualReport& r) { return r.ratio && *r.ratio >= 3.5 && *r.ratio <= 4.5; };
    char buf[160];
    std::snprintf(buf, sizeof buf, "ratios Schwarzschild %.3f, mTN %.3f in %.1f s", a.ratio.value_or(0),
                  b.ratio.value_or(0), secs);
    c.require(in_band(a) && in_band(b), buf);
    c.require(secs <= 120, buf);
    if (c.ok) c.detail = buf;
    return c;
}

Check pathologies()
{
    Check c;
    PoleAudit ts = pole_audit(tomimatsu_sato_delta2(Rational(3, 5), Rational(4, 5)));
    c.require(!ts.admissible && ts.has_at(PoleKind::DoublePole, 1) && ts.has(PoleKind::OffNodePole),
              "Tomimatsu-Sato not rejected as expected");
    PoleAudit dip = pole_audit(gh_dipole());
    c.require(!dip.admissible && dip.has_at(PoleKind::DoublePole, 0), "dipole not rejected as expected");
    PoleAudit kerr = pole_audit(top("kerr", with({{"m", 3}, {"a", 4}})));
    c.require(kerr.admissible, "Kerr rejected");
    if (c.ok) c.detail = "TS: DoublePole at 1 + OffNodePole; dipole: DoublePole at 0";
    return c;
}

Check shapes()
{
    Check c;
    std::vector<Rational> nodes{-1, 0, 1};
    Polynomial D = from_roots(nodes);
    auto over = [&](const Polynomial& n) { return RationalFunction(n, D); };
    Polynomial q2({1, 0, 1}), l1({0, 1}), q4({-1, 0, 3, 0, 1}), c3({1, 0, 0, 1}), c3b({1, 0, 1, 1});
    PatchingMatrix pd(over(q2), over(l1), over(q4), Signature::Riemannian, nodes);
    PatchingMatrix ct(over(c3), over(l1), over(c3b), Signature::Riemannian, nodes);
    c.require(check_pd_shape(pd).accepted && !check_ct_shape(pd).accepted, "PD pattern");
    c.require(check_ct_shape(ct).accepted && !check_pd_shape(ct).accepted, "CT pattern");
    PatchingMatrix quad_den(RationalFunction(q2, from_roots({-1, 1})), over(l1), over(q4), Signature::Riemannian, nodes);
    c.require(!check_pd_shape(quad_den).accepted, "PD accepted a quadratic denominator");
    PatchingMatrix cubic12(over(c3), over(c3), over(c3b), Signature::Riemannian, nodes);
    c.require(!check_ct_shape(cubic12).accepted, "CT accepted a cubic off-diagonal");
    if (c.ok) c.detail = "(2,1,4)/3 and (3,1,3)/3 accepted; off-pattern rejected";
    return c;
}

} // namespace

int main()
{
    std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"determinant identities", determinant_identities},
        {"node passing", node_passing},
        {"charge extraction", charges},
        {"inverse problem", inverse},
        {"splitting correctness", splitting},
        {"Yang residual convergence", yang_convergence},
        {"pathology detection", pathologies},
        {"ansatz shape validation", shapes},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Check c;
        try {
            c = criteria[k].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += !c.ok;
        std::cout << (c.ok ? "PASS" : "FAIL") << " " << k + 1 << " " << criteria[k].first << ": " << c.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
