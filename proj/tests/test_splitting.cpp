#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rodmat/catalogue.hpp"
#include "rodmat/splitting.hpp"

using namespace rodmat;

namespace {

RationalFunction Z() { return RationalFunction::z(); }

PatchingMatrix top(const std::string& family, Params p) { return make_entry(family, p).matrices.back(); }

Params with(std::map<std::string, Rational> v, std::vector<Rational> nodes = {},
            std::optional<Signature> sig = std::nullopt)
{
    Params p;
    p.values = std::move(v);
    p.nodes = std::move(nodes);
    p.signature = sig;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST(A0, ElementaryFunctions)
{
    AxisFunction id = AxisFunction::rational(Z());
    AxisFunction sq = AxisFunction::rational(Z() * Z());
    AxisFunction inv = AxisFunction::rational(RationalFunction(1) / Z());
    for (double r : {0.3, 1.0, 2.5})
        for (double z : {-1.0, 0.5, 4.0}) {
            EXPECT_NEAR(a0_extract(id, r, z, 64).real(), z, 1e-13);
            EXPECT_NEAR(a0_extract(sq, r, z, 64).real(), z * z - r * r / 2, 1e-12);
        }
    EXPECT_NEAR(a0_extract(inv, 3, 4, 256).real(), 0.2, 1e-13);
    EXPECT_NEAR(a0_extract(inv, 3, 4, 256).imag(), 0.0, 1e-13);
    EXPECT_NEAR(a0_extract(inv, 3, -4, 256).real(), -0.2, 1e-13);
}

TEST(A0, QuadratureConvergesAndAxisLimit)
{
    RationalFunction f = (Z() + Rational(2)) / ((Z() - Rational(1)) * (Z() * Z() + RationalFunction(4)));
    AxisFunction F = AxisFunction::rational(f);
    double a = a0_extract(F, 0.7, 2.5, 256).real();
    double b = a0_extract(F, 0.7, 2.5, 512).real();
    EXPECT_LT(std::abs(a - b), 1e-12);
    for (double z : {1.5, 3.0, 6.0}) EXPECT_NEAR(a0_extract(F, 1e-4, z, 64).real(), f.eval(z), 1e-6);
    EXPECT_EQ(a0_extract(F, 0, 3.0).real(), f.eval(3.0));

    AxisFunction L = AxisFunction::log_of(Rational(2) * Z());
    EXPECT_NEAR(a0_extract(L, 1e-4, 2.0, 64).real(), std::log(4.0), 1e-6);
}

TEST(A0, ContourCollisionAndArguments)
{
    AxisFunction inv = AxisFunction::rational(RationalFunction(1) / (Z() - Rational(1)));
    try {
        a0_extract(inv, 0.5, 1.0, 64);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ContourCollision);
        EXPECT_NE(std::string(e.what()).find("singularity 1"), std::string::npos);
    }
    // complex pole pair +-2i is crossed by the segment z = 0, |s| <= 3
    AxisFunction c = AxisFunction::rational(RationalFunction(1) / (Z() * Z() + RationalFunction(4)));
    EXPECT_THROW(a0_extract(c, 3, 0, 64), Error);
    EXPECT_NO_THROW(a0_extract(c, 1, 0, 64));
    EXPECT_THROW(a0_extract(inv, 1, 3, 8), Error);
    EXPECT_THROW(a0_extract(inv, -1, 3, 64), Error);
}

TEST(A0, ComplexRoots)
{
    auto r = complex_roots(Polynomial({Rational(4), Rational(0), Rational(1)}));
    ASSERT_EQ(r.size(), 2u);
    for (const auto& x : r) {
        EXPECT_NEAR(x.real(), 0, 1e-12);
        EXPECT_NEAR(std::abs(x.imag()), 2, 1e-12);
    }
    EXPECT_TRUE(complex_roots(Polynomial::constant(3)).empty());
}

TEST(SplitDiagonal, LorentzianSchwarzschild)
{
    PatchingMatrix P = top("schwarzschild", with({{"m", 1}}, {}, Signature::Lorentzian));
    Grid g{0.2, 2.0, 1.5, 4.0, 12, 12};
    BulkField B = split_diagonal(P, g);
    EXPECT_LT(B.max_det_error(), 1e-9);
    double worst = 0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double r = g.r(i), z = g.z(j);
            double r0 = std::hypot(r, z + 1), r1 = std::hypot(r, z - 1);
            double f = (r0 + r1 - 2) / (r0 + r1 + 2);
            double got = 1 / B.at(i, j).a;
            worst = std::max(worst, std::abs(got - f) / std::abs(f));
        }
    EXPECT_LT(worst, 1e-8);
}

TEST(SplitDiagonal, FlatAndDoubleSchwarzschild)
{
    PatchingMatrix flat = top("flat_e4", Params{});
    Grid g{0.1, 2.0, 0.5, 3.0, 10, 10};
    BulkField B = split_diagonal(flat, g);
    EXPECT_LT(B.max_det_error(), 1e-9);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double r = g.r(i), z = g.z(j);
            EXPECT_LT(rel(B.at(i, j).d, -(std::hypot(r, z) + z)), 1e-10);
        }

    PatchingMatrix ds = top("double_schwarzschild", demo_params("double_schwarzschild"));
    Grid near_axis{1e-4, 2e-4, 3.5, 6.0, 3, 6};
    BulkField D = split_diagonal(ds, near_axis);
    for (int j = 0; j < near_axis.nz; ++j) {
        double z = near_axis.z(j);
        double f = (z - 1) * (z - 3) / (z * (z - 2));
        EXPECT_NEAR(1 / D.at(0, j).a, f, 1e-6);
    }

    EXPECT_THROW(split_diagonal(top("kerr", demo_params("kerr")), g), Error);
}

TEST(SplitGH, MultiTaubNutAndSelfDual)
{
    PatchingMatrix mtn = top("multi_taub_nut", demo_params("multi_taub_nut"));
    Grid g{0.2, 2.0, 1.5, 4.0, 12, 12};
    BulkField B = split_gh(mtn, g);
    EXPECT_LT(B.max_det_error(), 1e-9);
    double worst = 0;
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j) {
            double r = g.r(i), z = g.z(j);
            double V = 1 + 1 / std::hypot(r, z - 1) + 1 / std::hypot(r, z + 1);
            worst = std::max(worst, rel(B.at(i, j).a, V));
        }
    EXPECT_LT(worst, 1e-8);

    PatchingMatrix sd(RationalFunction(1) + Rational(2) / Z(), RationalFunction(-1), RationalFunction(),
                      Signature::Riemannian, {0});
    BulkField S = split_gh(sd, g);
    for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nz; ++j)
            EXPECT_LT(rel(S.at(i, j).a, 1 + 2 / std::hypot(g.r(i), g.z(j))), 1e-10);

    BulkField C = split_gh(top("sdtn", demo_params("sdtn")), g);
    EXPECT_LT(rel(C.at(3, 3).a, 1 + 4 / std::hypot(g.r(3), g.z(3))), 1e-10);

    EXPECT_THROW(split_gh(top("schwarzschild", demo_params("schwarzschild")), g), Error);
}

TEST(SplitGH, DipoleRejectedUpstream)
{
    EXPECT_FALSE(pole_audit(gh_dipole()).admissible);
    EXPECT_TRUE(pole_audit(gh_dipole()).has(PoleKind::DoublePole));
}

TEST(Residual, Harmonic)
{
    Grid g{0.5, 2.0, -1.0, 1.0, 16, 16};
    ScalarField q = sample_scalar(g, [](double r, double z) { return z * z - r * r / 2; });
    EXPECT_LT(harmonic_residual(q).max, 1e-9);

    ScalarField c = sample_scalar(g, [](double, double z) { return z * z * z; });
    ResidualReport rc = harmonic_residual(c);
    EXPECT_NEAR(rc.max, 6 * (1.0 - g.hz()), 1e-6);

    Grid h{0.5, 2.0, 0.5, 2.0, 17, 17};
    auto point = [](const Grid& gg, int stride) {
        return harmonic_residual(sample_scalar(gg, [](double r, double z) { return 1 / std::hypot(r, z); }), stride);
    };
    ResidualReport conv = convergence_study(point, h);
    ASSERT_TRUE(conv.order);
    EXPECT_NEAR(*conv.order, 2.0, 0.25);

    // the a0 field of a catalogue axis function
    PatchingMatrix mtn = top("multi_taub_nut", demo_params("multi_taub_nut"));
    auto a0res = [&](const Grid& gg, int stride) {
        return harmonic_residual(a0_field(AxisFunction::rational(mtn.p11), gg), stride);
    };
    ResidualReport ar = convergence_study(a0res, Grid{0.3, 1.5, 1.5, 3.0, 17, 17});
    EXPECT_NEAR(*ar.order, 2.0, 0.25);
}

TEST(Residual, YangConvergence)
{
    PatchingMatrix schw = top("schwarzschild", with({{"m", 1}}, {}, Signature::Lorentzian));
    Grid g{0.3, 1.5, 1.5, 3.0, 64, 64};
    ResidualReport s = convergence_study([&](const Grid& gg, int k) { return yang_residual(split_diagonal(schw, gg), k); }, g);
    ASSERT_TRUE(s.ratio);
    EXPECT_GT(*s.ratio, 3.5);
    EXPECT_LT(*s.ratio, 4.5);

    PatchingMatrix mtn = top("multi_taub_nut", demo_params("multi_taub_nut"));
    ResidualReport m = convergence_study([&](const Grid& gg, int k) { return yang_residual(split_gh(mtn, gg), k); }, g);
    EXPECT_GT(*m.ratio, 3.5);
    EXPECT_LT(*m.ratio, 4.5);
}

TEST(Residual, CorruptedAndSingularFields)
{
    PatchingMatrix schw = top("schwarzschild", with({{"m", 1}}, {}, Signature::Lorentzian));
    Grid g{0.3, 1.5, 1.5, 3.0, 33, 33};
    BulkField B = split_diagonal(schw, g);
    double clean = yang_residual(B).max;
    B.at(16, 16).a += 1e-3;
    double bad = yang_residual(B).max;
    EXPECT_GT(bad, 10 * clean);
    BulkField Bf = split_diagonal(schw, g.refined());
    Bf.at(32, 32).a += 1e-3;
    EXPECT_GT(yang_residual(Bf).max, bad);

    BulkField S = B;
    S.at(5, 5) = Mat2{0, 0, 0, 0};
    try {
        yang_residual(S);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularField);
    }
}

TEST(Export, CsvAndJson)
{
    PatchingMatrix flat = top("flat_e4", Params{});
    BulkField B = split_diagonal(flat, Grid{0.5, 1.0, 1.0, 2.0, 3, 3});
    std::ostringstream os;
    write_csv(os, B);
    std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,z,J11,J12,J21,J22");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
    auto j = to_json(B);
    EXPECT_EQ(j["points"].size(), 9u);
    EXPECT_EQ(j["provenance"], "split_diagonal");
    auto r = to_json(yang_residual(split_diagonal(flat, Grid{0.5, 1.0, 1.0, 2.0, 6, 6})));
    EXPECT_TRUE(r.contains("max"));
}

TEST(Quadrature, EnvironmentOverride)
{
    setenv("RODMAT_QUAD_POINTS", "32", 1);
    EXPECT_EQ(default_quad_points(), 32);
    unsetenv("RODMAT_QUAD_POINTS");
    EXPECT_EQ(default_quad_points(), 256);
}
