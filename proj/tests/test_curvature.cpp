#include <catch2/catch_amalgamated.hpp>

#include <nullrig/curvature.hpp>

using namespace nullrig;

namespace {

CurvatureContext cone_cc(const RiggingSpec& rig, const AlphaField& af, const Vec& u) {
    static SurfaceChart chart = light_cone_chart(2);
    return CurvatureContext(AlphaContext(chart, rig, af, u));
}

double max_abs4(const Tensor4& r, int n) {
    double worst = 0.0;
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) worst = std::max(worst, std::fabs(r[d][a][b][c]));
    return worst;
}

void check_common_relations(const CurvatureContext& cc) {
    CHECK(riemann_antisymmetry_residual(cc.riem_alpha, cc.n) < 1e-9);
    CHECK(bianchi_first_residual(cc.riem_alpha, cc.n) < 1e-8);

    GaussCodazziResiduals gc = gauss_codazzi_residuals(cc);
    CHECK(gc.gauss_screen < 1e-6);
    CHECK(gc.radical_pairing < 1e-6);
    CHECK(gc.codazzi_screen < 1e-6);
    CHECK(gc.codazzi_radical < 1e-6);
    CHECK(gc.rotation < 1e-6);

    RicciResiduals ric = ricci_relation_residuals(cc);
    CHECK(ric.screen < 1e-7);
    CHECK(ric.radical < 1e-7);
    CHECK(ric.mixed < 1e-7);

    SectionalResiduals sec = sectional_relation_residuals(cc);
    CHECK(sec.radical < 1e-6);
    if (sec.screen_evaluated) CHECK(sec.screen < 1e-6);

    CHECK(scalar_relation_residual(cc) < 1e-6);
}

}  // namespace

TEST_CASE("alpha 1 on the cone gives a flat associated metric") {
    CurvatureContext cc = cone_cc(RiggingSpec::generic_ucc(), AlphaField::constant(1.0), {1.0, 0.0});

    CHECK(max_abs4(cc.riem_alpha, 2) < 1e-10);
    CHECK(std::fabs(cc.scalar_alpha) < 1e-10);

    check_common_relations(cc);
    CHECK(curvature_relation_residual(cc) < 1e-8);
    CHECK(christoffel_oracle_residual(cc.ax) < 1e-6);
    CHECK(riemann_oracle_residual(cc) < 1e-4);
}

TEST_CASE("special rigging with canonical alpha is curvature-free on the cone") {
    CurvatureContext cc = cone_cc(RiggingSpec::special(), AlphaField::parse("2*x0^2"), {1.0, 0.0});

    CHECK(max_abs4(cc.riem_alpha, 2) < 1e-10);
    check_common_relations(cc);
    CHECK(curvature_relation_residual(cc) < 1e-8);
    CHECK(christoffel_oracle_residual(cc.ax) < 1e-6);
    CHECK(riemann_oracle_residual(cc) < 1e-4);
}

TEST_CASE("covariant derivative anchors for the special rigging at (1,0)") {
    CurvatureContext cc = cone_cc(RiggingSpec::special(), AlphaField::parse("2*x0^2"), {1.0, 0.0});

    CHECK(std::fabs(cc.ax.pt.Gamma_ind[0][1][1].value() - 0.5) < 1e-12);

    Vec e2 = {0.0, 1.0};
    CHECK(std::fabs(nabla_b_on(cc, cc.xicv, e2, e2)) < 1e-12);
    CHECK(std::fabs(nabla_b_on(cc, e2, cc.xicv, e2) - 1.0) < 1e-12);
    CHECK(std::fabs(nabla_c_screen_on(cc, cc.xicv, e2, e2) - 1.0) < 1e-12);
    CHECK(std::fabs(nabla_c_screen_on(cc, e2, cc.xicv, e2) - 0.5) < 1e-12);
}

TEST_CASE("special rigging with alpha 1 reaches the hyperbolic regime") {
    CurvatureContext cc = cone_cc(RiggingSpec::special(), AlphaField::constant(1.0), {1.0, 0.0});

    // curved now: scalar -2, radical Ricci -1, radial plane curvature +1
    CHECK(std::fabs(cc.scalar_alpha + 2.0) < 1e-8);
    CHECK(std::fabs(cc.ric_pair(cc.xicv, cc.xicv) + 1.0) < 1e-8);
    const Vec& E = cc.ax.pt.screen.coords[0];
    CHECK(std::fabs(sectional_alpha(cc, cc.xicv, E) - 1.0) < 1e-8);

    RicciResiduals ric = ricci_relation_residuals(cc);
    CHECK(ric.screen < 1e-7);
    CHECK(ric.radical < 1e-7);
    CHECK(ric.mixed < 1e-7);
    CHECK(scalar_relation_residual(cc) < 1e-6);
    SectionalResiduals sec = sectional_relation_residuals(cc);
    CHECK(sec.radical < 1e-6);

    CHECK(christoffel_oracle_residual(cc.ax) < 1e-6);
    CHECK(riemann_oracle_residual(cc) < 1e-4);
}

TEST_CASE("screen planes of the three dimensional cone") {
    SurfaceChart chart = light_cone_chart(3);
    Vec u = {1.0, 0.4, -0.3};
    CurvatureContext cc(
        AlphaContext(chart, RiggingSpec::generic_ucc(), AlphaField::constant(1.0), u));

    check_common_relations(cc);
    CHECK(curvature_relation_residual(cc) < 1e-6);

    SectionalResiduals sec = sectional_relation_residuals(cc);
    CHECK(sec.screen_evaluated);

    double r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    const auto& sc = cc.ax.pt.screen.coords;
    CHECK(std::fabs(sectional_alpha(cc, sc[0], sc[1]) + 1.0 / (2.0 * r2)) < 1e-8);
}

TEST_CASE("totally geodesic hyperplane carries no curvature at all") {
    SurfaceChart chart = hyperplane_chart(3, 2, {0.0, 1.0, 0.0});
    CurvatureContext cc(
        AlphaContext(chart, RiggingSpec::special(), AlphaField::parse("2*x0^2"), {0.7, 1.3, -0.4}));

    CHECK(max_abs4(cc.riem_alpha, 3) < 1e-10);
    CHECK(max_abs4(cc.riem_ind, 3) < 1e-10);
    check_common_relations(cc);
    CHECK(curvature_relation_residual(cc) < 1e-8);
    CHECK(christoffel_oracle_residual(cc.ax) < 1e-6);
    CHECK(riemann_oracle_residual(cc) < 1e-4);
}

TEST_CASE("relations hold across sampled cone points") {
    SurfaceChart chart = light_cone_chart(2);
    std::vector<Vec> pts = sample(chart, 15, 17);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec& u = pts[i];
        CAPTURE(u[0], u[1]);
        CurvatureContext ucc = cone_cc(RiggingSpec::generic_ucc(), AlphaField::constant(1.0), u);
        check_common_relations(ucc);
        CHECK(curvature_relation_residual(ucc) < 1e-6);

        CurvatureContext spec = cone_cc(RiggingSpec::special(), AlphaField::parse("2*x0^2"), u);
        check_common_relations(spec);
        CHECK(curvature_relation_residual(spec) < 1e-6);

        if (i < 5) {
            CHECK(christoffel_oracle_residual(ucc.ax) < 1e-6);
            CHECK(riemann_oracle_residual(ucc) < 1e-4);
            CHECK(christoffel_oracle_residual(spec.ax) < 1e-6);
            CHECK(riemann_oracle_residual(spec) < 1e-4);
        }
    }
}

TEST_CASE("planes spanned by parallel vectors are rejected") {
    CurvatureContext cc = cone_cc(RiggingSpec::special(), AlphaField::parse("2*x0^2"), {1.0, 0.0});
    CHECK_THROWS_AS(sectional_alpha(cc, cc.xicv, cc.xicv), DegeneratePlane);
}
