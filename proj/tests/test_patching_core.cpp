#include <gtest/gtest.h>

#include "rodmat/asymptotics.hpp"
#include "rodmat/audit.hpp"
#include "rodmat/equivalence.hpp"
#include "rodmat/node_passing.hpp"
#include "rodmat/serialize.hpp"

using namespace rodmat;

namespace {

Polynomial P(std::initializer_list<Rational> c) { return Polynomial(std::vector<Rational>(c)); }
RationalFunction F(Polynomial n, Polynomial d = Polynomial::constant(1)) { return RationalFunction(n, d); }

PatchingMatrix kerr34()
{
    Polynomial den = P({-25, 0, 1});
    return PatchingMatrix(F(P({-7, 6, 1}), den), F(P({-24}), den), F(P({7, 6, -1}), den), Signature::Riemannian,
                          {-5, 5}, Rod{Rational(5), std::nullopt});
}

PatchingMatrix flat_top()
{
    return PatchingMatrix(F(P({1}), P({0, 2})), RationalFunction(), F(P({0, -2})), Signature::Riemannian, {0},
                          Rod{Rational(0), std::nullopt});
}

// Lorentzian Schwarzschild, m as given
PatchingMatrix schw_top(const Rational& m)
{
    return PatchingMatrix(F(P({m, 1}), P({-m, 1})), RationalFunction(), F(P({-m, 1}), P({m, 1})),
                          Signature::Lorentzian, {-m, m}, Rod{m, std::nullopt});
}

PatchingMatrix gh(const RationalFunction& V, std::vector<Rational> nodes, std::optional<Rod> rod,
                  Signature s = Signature::Riemannian)
{
    return PatchingMatrix(V, RationalFunction(Rational(-1)), RationalFunction(), s, std::move(nodes), rod);
}

RationalFunction pole(const Rational& c, const Rational& a) { return F(P({c}), Polynomial::linear(a)); }

} // namespace

TEST(DetCheck, Examples)
{
    EXPECT_TRUE(det_check(kerr34()).pass);
    EXPECT_TRUE(det_check(flat_top()).pass);
    PatchingMatrix broken(F(P({1}), P({0, 1})), RationalFunction(), F(P({1, 1})), Signature::Riemannian);
    auto r = det_check(broken);
    EXPECT_FALSE(r.pass);
    // (z+1)/z - (-1)
    EXPECT_EQ(r.residual, F(P({1, 2}), P({0, 1})));
}

TEST(Conjugate, Examples)
{
    auto Q = conjugate(kerr34(), ConjugationRecord{1, 0, Rational(1, 2), 1});
    EXPECT_EQ(Q.p22, F(P({15, -3}), P({20, 4})));
    EXPECT_TRUE(det_check(Q).pass);
    EXPECT_EQ(conjugate(kerr34(), ConjugationRecord::identity()), kerr34());

    Rational m = 2;
    auto sdtn = gh(RationalFunction(Rational(1)) + pole(2 * m, 0), {0}, std::nullopt);
    auto T = conjugate(sdtn, ConjugationRecord{1, 0, 1, 1});
    EXPECT_EQ(T.p11, F(P({2 * m, 1}), P({0, 1})));
    EXPECT_EQ(T.p12, F(P({2 * m}), P({0, 1})));
    EXPECT_EQ(T.p22, F(P({2 * m, -1}), P({0, 1})));

    EXPECT_THROW(conjugate(kerr34(), ConjugationRecord{2, 0, 0, 1}), Error);
}

TEST(Conjugate, LowerTriangularKeepsMass)
{
    for (Rational g : {Rational(1, 2), Rational(-3), Rational(7, 5)}) {
        auto Q = kerr34();
        Q.p12 = Q.p12; // same
        auto C = conjugate(Q, ConjugationRecord{1, 0, g, 1});
        EXPECT_EQ(series_at_infinity(C.p11, 2).coeff(-1), series_at_infinity(Q.p11, 2).coeff(-1));
    }
}

TEST(PassNode, SchwarzschildChain)
{
    Rational m = 3;
    auto top = schw_top(m);
    auto mid = pass_node_standard(top, m, Direction::Down).matrix;
    Polynomial zz = P({-m * m, 0, 1});
    EXPECT_EQ(mid.p11, F(Rational(4) * zz));
    EXPECT_TRUE(mid.p12.is_zero());
    EXPECT_EQ(mid.p22, F(P({1}), Rational(4) * zz));
    EXPECT_EQ(*mid.rod->lower, -m);
    EXPECT_EQ(*mid.rod->upper, m);
    auto bot = pass_node_standard(mid, -m, Direction::Down).matrix;
    EXPECT_EQ(bot.p11, F(P({-m, 1}), P({m, 1})));
    EXPECT_EQ(bot.p22, F(P({m, 1}), P({-m, 1})));
    EXPECT_FALSE(bot.rod->lower.has_value());
    EXPECT_TRUE(det_check(mid).pass);
    EXPECT_TRUE(det_check(bot).pass);
    EXPECT_TRUE(pole_audit(mid).admissible);
}

TEST(PassNode, FlatSpace)
{
    auto res = pass_node_standard(flat_top(), 0, Direction::Down);
    EXPECT_EQ(res.matrix.p11, F(P({0, 2})));
    EXPECT_EQ(res.matrix.p22, F(P({-1}), P({0, 2})));
    // the closed-form bottom matrix diag(-1/(2z), 2z) is the swap of this one
    PatchingMatrix bottom(F(P({-1}), P({0, 2})), RationalFunction(), F(P({0, 2})), Signature::Riemannian, {0});
    auto C = find_conjugation(res.matrix, bottom);
    ASSERT_TRUE(C.has_value());
    EXPECT_EQ(C->det(), 1);
}

TEST(PassNode, DownThenUpReturns)
{
    for (const auto& top : {kerr34(), schw_top(2), flat_top()}) {
        Rational a = *top.rod->lower;
        auto down = pass_node_standard(top, a, Direction::Down);
        // passing back with the matching gauge undoes the step exactly
        auto up = pass_node_standard(down.matrix, a, Direction::Up, down.conjugation.c21).matrix;
        EXPECT_TRUE(up.same_entries(top));
        EXPECT_TRUE(det_check(up).pass);
    }
}

TEST(PassNode, KerrChainWithSymmetricGauge)
{
    Rational gauge(2, 5); // a / (2 sigma)
    auto mid = pass_node_standard(kerr34(), 5, Direction::Down, -gauge).matrix;
    auto bot = pass_node_standard(mid, -5, Direction::Down, gauge).matrix;
    PatchingMatrix k8 = reflect(kerr34());
    EXPECT_TRUE(bot.same_entries(k8));
    EXPECT_TRUE(pole_audit(mid).admissible);
}

TEST(PassNode, Errors)
{
    EXPECT_THROW(pass_node_standard(kerr34(), 1, Direction::Down), Error);
    // rank-2 residue
    PatchingMatrix bad(pole(1, 0), RationalFunction(), pole(-1, 0), Signature::Riemannian, {0});
    try {
        pass_node_standard(bad, 0, Direction::Down);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateNode);
    }
}

TEST(PassNodeGH, Examples)
{
    auto V = RationalFunction(Rational(1)) + pole(1, 1) + pole(1, -1);
    auto top = gh(V, {-1, 1}, Rod{Rational(1), std::nullopt});
    auto mid = pass_node_gh(top, 1);
    EXPECT_EQ(mid.p11, RationalFunction(Rational(1)) + pole(-1, 1) + pole(1, -1));
    EXPECT_EQ(*mid.rod->upper, 1);

    Rational m = 2;
    auto sdtn = gh(RationalFunction(Rational(1)) + pole(2 * m, 0), {0}, Rod{Rational(0), std::nullopt});
    EXPECT_EQ(pass_node_gh(sdtn, 0).p11, RationalFunction(Rational(1)) + pole(-2 * m, 0));

    auto meh = gh(pole(1, 0), {0}, std::nullopt);
    EXPECT_EQ(pass_node_gh(meh, 0).p11, pole(-1, 0));

    try {
        pass_node_gh(kerr34(), 5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotGibbonsHawkingForm);
    }
}

TEST(PoleAudit, Examples)
{
    EXPECT_TRUE(pole_audit(kerr34()).admissible);
    auto dip = gh(F(P({1}), P({0, 0, 1})), {0}, std::nullopt);
    auto rep = pole_audit(dip);
    EXPECT_FALSE(rep.admissible);
    EXPECT_TRUE(rep.has_at(PoleKind::DoublePole, 0));
    auto off = kerr34();
    off.nodes = {5};
    auto rep2 = pole_audit(off);
    EXPECT_TRUE(rep2.has_at(PoleKind::OffNodePole, -5));
}

TEST(PoleAudit, PreservedByOperations)
{
    auto K = kerr34();
    EXPECT_TRUE(pole_audit(conjugate(K, ConjugationRecord{1, 3, 0, 1})).admissible);
    EXPECT_TRUE(pole_audit(pass_node_standard(K, 5, Direction::Down).matrix).admissible);
}

TEST(Asymptotics, Classify)
{
    EXPECT_EQ(asymptotic_classify(kerr34()), AsymptoticClass::AF_ALF);
    EXPECT_EQ(asymptotic_classify(flat_top()), AsymptoticClass::AE_ALE);
    // Taub-NUT in its first gauge (m, N) = (5, 4), sigma = 3, R+ = 8
    Polynomial zz = P({-9, 0, 1});
    PatchingMatrix tn(F(P({9, 10, 1}), zz), F(P({12, -4}), P({24, 8})), F(P({18, -6}), P({24, 8})),
                      Signature::Riemannian, {-3, 3});
    EXPECT_TRUE(det_check(tn).pass);
    EXPECT_EQ(asymptotic_classify(tn), AsymptoticClass::Other);
    auto norm = normalize_alf(tn);
    EXPECT_EQ(norm.conjugation, (ConjugationRecord{1, 0, Rational(1, 2), 1}));
    EXPECT_EQ(asymptotic_classify(norm.matrix), AsymptoticClass::AF_ALF);
    // normalized form [[ (z+5)^2 - 16, 8z ], [8z, -(z-5)^2 + 16]] / (z^2 - 9)
    EXPECT_EQ(norm.matrix.p11, F(P({9, 10, 1}), zz));
    EXPECT_EQ(norm.matrix.p12, F(P({0, 8}), zz));
    EXPECT_EQ(norm.matrix.p22, F(P({-9, 10, -1}), zz));
    auto ch = extract_charges(norm.matrix);
    EXPECT_EQ(ch.mass_m, 5);
    EXPECT_EQ(ch.nut_N, 4);
    EXPECT_EQ(ch.angmom_L, 0);
    try {
        extract_charges(tn);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAsymptoticallyStandard);
    }
}

TEST(Asymptotics, Charges)
{
    auto ch = extract_charges(kerr34());
    EXPECT_EQ(ch.mass_m, 3);
    EXPECT_EQ(ch.nut_N, 0);
    EXPECT_EQ(ch.angmom_L, 12);

    Rational m = 2;
    auto sdtn = gh(RationalFunction(Rational(1)) + pole(2 * m, 0), {0}, std::nullopt);
    auto canon = conjugate(sdtn, ConjugationRecord{1, 0, 1, 1});
    auto c2 = extract_charges(canon);
    EXPECT_EQ(c2.mass_m, 2);
    EXPECT_EQ(c2.nut_N, 2);

    auto broken = kerr34();
    broken.p22 = broken.p22 + pole(1, 5);
    broken.signature = Signature::Riemannian;
    try {
        extract_charges(broken);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MalformedAsymptotics);
    }

    // ALE two-node solution with (M, L) = (0, -1/2)
    Polynomial zz = P({-1, 0, 1});
    PatchingMatrix ale(F(P({0, Rational(1, 2)}), zz), F(P({1}), zz), F(P({0, 4, 0, -2}), zz), Signature::Riemannian,
                       {-1, 1});
    EXPECT_TRUE(det_check(ale).pass);
    auto c3 = extract_charges(ale);
    EXPECT_EQ(c3.cls, AsymptoticClass::AE_ALE);
    EXPECT_EQ(c3.eta_M, 0);
    EXPECT_EQ(c3.zeta_L, Rational(-1, 2));
}

TEST(Normalize, Examples)
{
    EXPECT_EQ(normalize_alf(kerr34()).conjugation, ConjugationRecord::identity());
    PatchingMatrix d(RationalFunction(Rational(4)), RationalFunction(), RationalFunction(Rational(-1, 4)),
                     Signature::Riemannian);
    auto r = normalize_alf(d);
    EXPECT_EQ(r.conjugation, (ConjugationRecord{Rational(1, 2), 0, 0, 2}));
    EXPECT_THROW(normalize_alf(flat_top()), Error);
    PatchingMatrix irr(RationalFunction(Rational(2)), RationalFunction(), RationalFunction(Rational(-1, 2)),
                       Signature::Riemannian);
    EXPECT_THROW(normalize_alf(irr), Error);
}

TEST(FindConjugation, Examples)
{
    EXPECT_EQ(*find_conjugation(kerr34(), kerr34()), ConjugationRecord::identity());
    Polynomial zz = P({-25, 0, 1});
    // normalized Taub-NUT with the same sigma: (m, N) = (13/... ) use m^2 - N^2 = 25 with (m, N) = (13, 12)
    PatchingMatrix tn(F(P({25, 26, 1}), zz), F(P({0, 24}), zz), F(P({-25, 26, -1}), zz), Signature::Riemannian,
                      {-5, 5});
    ASSERT_TRUE(det_check(tn).pass);
    EXPECT_FALSE(find_conjugation(kerr34(), tn).has_value());

    auto K = kerr34();
    ConjugationRecord C{2, 1, 3, 2};
    auto Q = conjugate(K, C);
    auto found = find_conjugation(K, Q);
    ASSERT_TRUE(found.has_value());
    EXPECT_TRUE(conjugate(K, *found).same_entries(Q));

    PatchingMatrix L = K;
    L.signature = Signature::Lorentzian;
    EXPECT_FALSE(find_conjugation(K, L).has_value());
}

TEST(Translate, ShiftsNodes)
{
    auto K = translate(kerr34(), 2);
    EXPECT_EQ(K.nodes, (std::vector<Rational>{-3, 7}));
    EXPECT_TRUE(det_check(K).pass);
    EXPECT_TRUE(pole_audit(K).admissible);
    EXPECT_EQ(translate(K, -2), kerr34());
}

TEST(Json, RoundTrip)
{
    auto K = kerr34();
    K.p12 = K.p12 * RationalFunction(Rational(1, 3));
    json j = to_json(K);
    auto back = patching_matrix_from_json(j);
    EXPECT_EQ(back, K);
    EXPECT_EQ(to_json(back).dump(), j.dump());
    EXPECT_EQ(j["entries"]["p11"]["num"][0], "-7");
    json bad = j;
    bad["entries"]["p12"]["den"] = json::array({"0"});
    try {
        patching_matrix_from_json(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
        EXPECT_NE(std::string(e.what()).find("/entries/p12/den"), std::string::npos);
    }
}
