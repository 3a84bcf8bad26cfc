// Acceptance gate: one pass/fail line per criterion, tolerances pinned here.
// Usage: acceptance <path-to-cli> <path-to-configs-dir>

#include <nullrig/curvature.hpp>
#include <nullrig/runner.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace nullrig;

namespace {

struct Gate {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(const std::string& what, double value, double tol) {
        if (!(std::fabs(value) <= tol)) {
            ok = false;
            std::ostringstream os;
            os << what << ": |" << value << "| > " << tol;
            notes.push_back(os.str());
        }
    }
    void expect_true(const std::string& what, bool cond) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void expect_gt(const std::string& what, double value, double bound) {
        if (!(value > bound)) {
            ok = false;
            std::ostringstream os;
            os << what << ": " << value << " <= " << bound;
            notes.push_back(os.str());
        }
    }
};

double max_abs(const Mat& m) {
    double worst = 0.0;
    for (const Vec& row : m)
        for (double v : row) worst = std::max(worst, std::fabs(v));
    return worst;
}

double max_abs(const Vec& v) {
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::fabs(x));
    return worst;
}

// quadratic vector fields with coefficients drawn from [-1, 1]
struct PolyField {
    // per component: c0 + c1 u1 + c2 u2 + c3 u1^2 + c4 u1 u2 + c5 u2^2
    std::vector<std::array<double, 6>> c;

    static PolyField random(SplitMix64& rng, int n) {
        PolyField f;
        f.c.resize(std::size_t(n));
        for (auto& row : f.c)
            for (double& v : row) v = rng.uniform(-1, 1);
        return f;
    }
    double comp(int a, const Vec& u) const {
        const auto& k = c[std::size_t(a)];
        return k[0] + k[1] * u[0] + k[2] * u[1] + k[3] * u[0] * u[0] + k[4] * u[0] * u[1] +
               k[5] * u[1] * u[1];
    }
    double dcomp(int a, int d, const Vec& u) const {
        const auto& k = c[std::size_t(a)];
        if (d == 0) return k[1] + 2.0 * k[3] * u[0] + k[4] * u[1];
        return k[2] + k[4] * u[0] + 2.0 * k[5] * u[1];
    }
};

void criterion_1(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    RiggingSpec rig = RiggingSpec::generic_ucc();
    for (const Vec& u : sample(chart, 50, 2026)) {
        g.expect("null condition", null_residual(chart, u), 1e-10);
        g.expect("gradient identity", gradient_identity_residual(chart, u), 1e-10);
        PointContext pt(chart, rig, u);
        g.expect("normal is null", inner(pt.sig, pt.values(pt.nrm), pt.values(pt.nrm)), 1e-10);
        Mat frame = tangent_frame(chart, u);
        for (const Vec& e : frame) g.expect("frame tangency", tangency_defect(chart, u, e), 1e-10);
        g.expect("xi tangency", tangency_defect(chart, u, pt.values(pt.xi)), 1e-10);
        g.expect("normal vs frame", [&] {
            double worst = 0.0;
            for (const Vec& e : frame)
                worst = std::max(worst, std::fabs(inner(pt.sig, pt.values(pt.nrm), e)));
            return worst;
        }(), 1e-10);
    }
}

void criterion_2(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    RiggingSpec rig = RiggingSpec::generic_ucc();
    AlphaField one = AlphaField::constant(1.0);
    SplitMix64 rng(77);

    for (const Vec& u : sample(chart, 25, 2026)) {
        PointContext pt(chart, rig, u);
        g.expect("tau vanishes", max_abs(pt.values(pt.tau)), 1e-12);

        Mat diff = pt.values(pt.AN);
        Mat as = pt.values(pt.Astar);
        for (int a = 0; a < pt.n; ++a)
            for (int b = 0; b < pt.n; ++b) diff[a][b] -= as[a][b];
        g.expect("A_N equals A*", max_abs(diff), 1e-10);

        for (const Vec& e : pt.screen.coords) {
            double s = 0.0;
            for (int a = 0; a < pt.n; ++a) s += pt.Fp[a].value() * e[a];
            g.expect("screen annihilates dF", s, 1e-10);
        }
        g.expect("eta is closed", max_abs(pt.d_eta()), 1e-12);

        AlphaContext ax(pt, one);
        g.expect("coincidence at alpha = 1", coincidence_residual(ax), 1e-9);

        // divergence of quadratic fields: connection trace against the
        // volume-density route d_c log sqrt|det g_1| = (1/2) g_1^{ab} d_c (g_1)_{ab}
        for (int trial = 0; trial < 20; ++trial) {
            PolyField X = PolyField::random(rng, pt.n);
            double via_trace = 0.0, via_density = 0.0;
            for (int a = 0; a < pt.n; ++a) {
                via_trace += X.dcomp(a, a, u);
                via_density += X.dcomp(a, a, u);
            }
            for (int c = 0; c < pt.n; ++c) {
                double tr = 0.0, dlog = 0.0;
                for (int a = 0; a < pt.n; ++a) {
                    tr += ax.Gamma_alpha[a][a][c].value();
                    for (int b = 0; b < pt.n; ++b)
                        dlog += 0.5 * ax.g_alpha_inv[a][b] * ax.g_alpha[a][b].grad(c);
                }
                via_trace += tr * X.comp(c, u);
                via_density += dlog * X.comp(c, u);
            }
            g.expect("divergence identity", via_trace - via_density, 1e-8);
        }
    }
}

void criterion_3(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    RiggingSpec rig = RiggingSpec::generic_ucc();
    AlphaField one = AlphaField::constant(1.0);
    for (const Vec& u : sample(chart, 25, 2026)) {
        AlphaContext ax(chart, rig, one, u);
        g.expect("delta shape operator vanishes", max_abs(shape_operator_delta(ax)), 1e-9);
    }
}

void criterion_4(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    RiggingSpec rig = RiggingSpec::special();
    AlphaField af = AlphaField::parse("2*x0^2");

    for (const Vec& u : sample(chart, 25, 2026)) {
        AlphaContext ax(chart, rig, af, u);
        const PointContext& pt = ax.pt;

        Vec tech = pt.values(pt.tau);
        Vec etav = pt.values(pt.eta);
        for (int a = 0; a < pt.n; ++a) tech[a] -= etav[a];
        g.expect("tau equals eta", max_abs(tech), 1e-10);

        Mat as = pt.values(pt.Astar);
        Mat an = pt.values(pt.AN);
        for (int a = 0; a < pt.n; ++a)
            for (int b = 0; b < pt.n; ++b) as[a][b] -= ax.aval * an[a][b];
        g.expect("A* = 2 x0^2 A_N", max_abs(as), 1e-9);

        double txi = pt.tau_on(pt.values(pt.xic));
        g.expect("2a tau(xi) + da(xi) = 0", 2.0 * ax.aval * txi + ax.dalpha_xi, 1e-8);
        g.expect("coincidence", coincidence_residual(ax), 1e-9);

        // the twist cancels the graph term exactly: g_a = eps + F' F'
        Jet3 F = chart.F_jet(u, 1);
        for (int a = 0; a < pt.n; ++a)
            for (int b = 0; b < pt.n; ++b) {
                double exact = F.grad(a) * F.grad(b);
                if (a == b) exact += chart.eps_u(a);
                g.expect("g_a closed form", ax.g_alpha_val[a][b] - exact, 1e-14);
            }
    }

    AlphaContext anchor(chart, rig, af, {1.0, 0.0});
    g.expect("anchor g_a[0][0]", anchor.g_alpha_val[0][0] - 2.0, 1e-14);
    g.expect("anchor g_a[0][1]", anchor.g_alpha_val[0][1], 1e-14);
    g.expect("anchor g_a[1][1]", anchor.g_alpha_val[1][1] - 1.0, 1e-14);
}

void criterion_5(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    struct Case {
        RiggingSpec rig;
        AlphaField af;
    };
    std::vector<Case> matched = {
        {RiggingSpec::generic_ucc(), AlphaField::constant(1.0)},
        {RiggingSpec::special(), AlphaField::parse("2*x0^2")},
    };
    for (const Case& cs : matched)
        for (const Vec& u : sample(chart, 20, 2026)) {
            AlphaContext ax(chart, cs.rig, cs.af, u);
            g.expect("connections coincide", induced_vs_levicivita(ax), 1e-8);
        }

    AlphaField two = AlphaField::constant(2.0);
    double worst_gap = 0.0;
    for (const Vec& u : sample(chart, 20, 2026)) {
        AlphaContext ax(chart, RiggingSpec::generic_ucc(), two, u);
        double expected = 2.0 * max_abs(ax.pt.values(ax.pt.B));
        g.expect("control residual is 2 max|B|", coincidence_residual(ax) - expected, 1e-9);
        worst_gap = std::max(worst_gap, induced_vs_levicivita(ax));
    }
    g.expect_gt("control connections disagree", worst_gap, 1e-3);
}

void criterion_6(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    auto x0 = x0_only();
    std::vector<ExprPtr> phis = {
        parse_expression("x0", x0),
        parse_expression("2", x0),
        parse_expression("x0*x0", x0),
    };
    struct Base {
        RiggingSpec rig;
        AlphaField af;
    };
    std::vector<Base> bases = {
        {RiggingSpec::generic_ucc(), AlphaField::constant(1.0)},
        {RiggingSpec::special(), AlphaField::parse("2*x0^2")},
    };
    for (const Base& base : bases)
        for (const ExprPtr& phi : phis)
            for (const Vec& u : sample(chart, 12, 2026))
                g.expect("rescaled coincidence", rescaled_coincidence(chart, base.rig, base.af, phi, u),
                         1e-8);
}

void criterion_7(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    RiggingSpec rig = RiggingSpec::generic_ucc();
    AlphaField one = AlphaField::constant(1.0);

    for (const Vec& u : sample(chart, 15, 2026)) {
        CurvatureContext cc(AlphaContext(chart, rig, one, u));
        g.expect("ambient curvature relation", curvature_relation_residual(cc), 1e-6);
        GaussCodazziResiduals gc = gauss_codazzi_residuals(cc);
        g.expect("gauss screen part", gc.gauss_screen, 1e-6);
        g.expect("gauss radical pairing", gc.radical_pairing, 1e-6);
        g.expect("codazzi screen part", gc.codazzi_screen, 1e-6);
        g.expect("codazzi radical part", gc.codazzi_radical, 1e-6);
        g.expect("rotation of tau", gc.rotation, 1e-6);
        RicciResiduals rr = ricci_relation_residuals(cc);
        g.expect("ricci screen", rr.screen, 1e-7);
        g.expect("ricci radical", rr.radical, 1e-7);
        g.expect("ricci mixed", rr.mixed, 1e-7);
        SectionalResiduals sr = sectional_relation_residuals(cc);
        g.expect("sectional radical", sr.radical, 1e-6);
        g.expect("scalar relation", scalar_relation_residual(cc), 1e-6);
    }

    SurfaceChart cone3 = light_cone_chart(3);
    for (const Vec& u : sample(cone3, 8, 2026)) {
        CurvatureContext cc(AlphaContext(cone3, rig, one, u));
        SectionalResiduals sr = sectional_relation_residuals(cc);
        g.expect_true("screen plane available", sr.screen_evaluated);
        g.expect("sectional screen", sr.screen, 1e-6);
        g.expect("sectional radical (n = 3)", sr.radical, 1e-6);
    }

    CurvatureContext anchor(AlphaContext(chart, rig, one, {1.0, 0.0}));
    double h_ref = -1.0 / (2.0 * std::sqrt(2.0));
    g.expect("anchor H", anchor.ax.pt.H - h_ref, 1e-7);
    g.expect("anchor H*", anchor.ax.pt.Hstar - h_ref, 1e-7);
    double tr2 = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int e = 0; e < 2; ++e) tr2 += anchor.Asv[a][e] * anchor.Asv[e][a];
    g.expect("anchor tr(A*^2)", tr2 - 0.5, 1e-7);
    g.expect("anchor scalar curvature", anchor.scalar_alpha, 1e-7);
}

void criterion_8(Gate& g) {
    SurfaceChart chart = light_cone_chart(2);
    RiggingSpec rig = RiggingSpec::generic_ucc();
    AlphaField plus = AlphaField::constant(1.0);
    AlphaField minus = AlphaField::constant(-1.0);

    for (const Vec& u : sample(chart, 20, 2026)) {
        AlphaContext ap(chart, rig, plus, u);
        AlphaContext am(chart, rig, minus, u);
        g.expect_true("index q - 1 for positive alpha", metric_index(ap) == chart.sig().q - 1);
        g.expect_true("index q for negative alpha", metric_index(am) == chart.sig().q);
        g.expect("gauss map magnitude (+)", gauss_map_magnitude_defect(ap), 1e-10);
        g.expect("gauss map magnitude (-)", gauss_map_magnitude_defect(am), 1e-10);
        g.expect("weingarten symmetry", ap.pt.weingarten_symmetry_defect(), 1e-9);

        LiePair lp = lie_xi_g_alpha(ap);
        double worst = 0.0;
        for (int a = 0; a < ap.pt.n; ++a)
            for (int b = 0; b < ap.pt.n; ++b)
                worst = std::max(worst, std::fabs(lp.lie[a][b] - lp.formula[a][b]));
        g.expect("lie derivative of g_a", worst, 1e-7);
        DivergenceResult dv = div_g_alpha_xi(ap);
        g.expect("divergence of xi", dv.computed - dv.formula, 1e-7);
    }
}

void criterion_9(Gate& g) {
    auto vars2 = chart_vars(2);
    std::vector<ExprPtr> family = {
        parse_expression("sqrt(2)*u1 + 0*u2", vars2),
        parse_expression("(2*u1 + u2)/sqrt(3)", vars2),
        parse_expression("sqrt(u1^2+u2^2)", vars2),
        parse_expression("sqrt((u1-0.4)^2+(u2+0.3)^2)", vars2),
        parse_expression("sqrt((u1+1.1)^2+(u2-0.7)^2)", vars2),
    };
    SplitMix64 rng(2026);
    int done = 0;
    while (done < 100) {
        std::size_t which = std::size_t(rng.next() % family.size());
        Vec p = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        auto far = [&](double cx, double cy) {
            double dx = p[0] - cx, dy = p[1] - cy;
            return dx * dx + dy * dy > 0.25;
        };
        if (!far(0, 0) || !far(0.4, -0.3) || !far(-1.1, 0.7)) continue;
        ++done;
        const ExprPtr& f = family[which];
        FdOracle oracle([f](const Vec& q) { return f->value(q); });
        Jet3 j = f->jet(p);
        for (int a = 0; a < 2; ++a) {
            g.expect("gradient vs oracle", j.grad(a) - oracle.gradient(p, a), 1e-6);
            for (int b = a; b < 2; ++b) {
                g.expect("hessian vs oracle", j.hess(a, b) - oracle.hessian(p, a, b), 1e-5);
                for (int c = b; c < 2; ++c)
                    g.expect("third order vs oracle", j.third(a, b, c) - oracle.third(p, a, b, c),
                             1e-3);
            }
        }
    }

    // Christoffel symbols of the rigged metric against the value-only route
    SurfaceChart chart = light_cone_chart(2);
    std::vector<Vec> probes = {{1.1, 0.6}, {-0.9, 1.3}};
    for (const Vec& u : probes) {
        AlphaContext ucc(chart, RiggingSpec::generic_ucc(), AlphaField::constant(1.0), u);
        g.expect("christoffel oracle (canonical)", christoffel_oracle_residual(ucc), 1e-6);
        AlphaContext sp(chart, RiggingSpec::special(), AlphaField::parse("2*x0^2"), u);
        g.expect("christoffel oracle (special)", christoffel_oracle_residual(sp), 1e-6);
    }

    // halving the step must shrink the plain central-difference error by
    // about the second-order factor
    ExprPtr f = family[2];
    FdOracle plain([f](const Vec& q) { return f->value(q); }, FdConfig{1e-2, 1e-2, false});
    Vec p = {1.1, 0.6};
    Jet3 j = f->jet(p);
    for (int a = 0; a < 2; ++a) {
        double e1 = std::fabs(plain.gradient_plain(p, a, 1e-2) - j.grad(a));
        double e2 = std::fabs(plain.gradient_plain(p, a, 5e-3) - j.grad(a));
        g.expect_gt("gradient halving gain", e1 / e2, 3.5);
    }
    double h1 = std::fabs(plain.hessian_plain(p, 0, 1, 1e-2) - j.hess(0, 1));
    double h2 = std::fabs(plain.hessian_plain(p, 0, 1, 5e-3) - j.hess(0, 1));
    g.expect_gt("hessian halving gain", h1 / h2, 3.5);
}

int spawn(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_10(Gate& g, const std::string& cli, const std::string& configs) {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path();
    fs::path out1 = tmp / "nullrig_accept_1.json";
    fs::path out2 = tmp / "nullrig_accept_2.json";

    std::string base = "\"" + cli + "\" run --config \"" + configs + "/lightcone_ucc.json\"";
    int r1 = spawn(base + " --out \"" + out1.string() + "\" > /dev/null 2>&1");
    int r2 = spawn(base + " --out \"" + out2.string() + "\" > /dev/null 2>&1");
    g.expect_true("flagship run exits 0 (first)", r1 == 0);
    g.expect_true("flagship run exits 0 (second)", r2 == 0);

    std::string d1 = slurp(out1);
    std::string d2 = slurp(out2);
    g.expect_true("reports are byte-identical", !d1.empty() && d1 == d2);
    fs::remove(out1);
    fs::remove(out2);

    int neg = spawn("\"" + cli + "\" run --config \"" + configs +
                    "/lightcone_ucc_alpha2.json\" > /dev/null 2>&1");
    g.expect_true("mismatched alpha exits 1", neg == 1);

    int bad = spawn("\"" + cli + "\" run --config \"" + configs +
                    "/nonnull_parabola.json\" > /dev/null 2>&1");
    g.expect_true("non-null graph exits 2", bad == 2);

    int missing = spawn("\"" + cli + "\" run --config \"" + configs +
                        "/does_not_exist.json\" > /dev/null 2>&1");
    g.expect_true("missing config exits 2", missing == 2);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <cli-binary> <configs-dir>\n", argv[0]);
        return 2;
    }
    std::string cli = argv[1];
    std::string configs = argv[2];

    struct Criterion {
        const char* label;
        std::function<void(Gate&)> run;
    };
    std::vector<Criterion> criteria = {
        {"light cone graphs are null with tangent frames", criterion_1},
        {"canonical rigging invariants and divergence identity", criterion_2},
        {"gauss map of the canonical pair is totally geodesic", criterion_3},
        {"special rigging matches its closed forms", criterion_4},
        {"coincidence forces the connections to agree, control separates them", criterion_5},
        {"rescaling the rigging transports the coincidence", criterion_6},
        {"curvature relations hold with frozen anchors", criterion_7},
        {"rigged metrics have the stated index and flow identities", criterion_8},
        {"jets agree with the finite-difference oracle", criterion_9},
        {"cli reports are deterministic with faithful exit codes",
         [&](Gate& g) { criterion_10(g, cli, configs); }},
    };

    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Gate g;
        try {
            criteria[i].run(g);
        } catch (const std::exception& e) {
            g.ok = false;
            g.notes.push_back(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %zu/10 %s\n", g.ok ? "PASS" : "FAIL", i + 1, criteria[i].label);
        if (g.ok) {
            ++passed;
        } else {
            std::size_t show = std::min<std::size_t>(g.notes.size(), 5);
            for (std::size_t k = 0; k < show; ++k)
                std::printf("       %s\n", g.notes[k].c_str());
            if (g.notes.size() > show)
                std::printf("       ... and %zu more\n", g.notes.size() - show);
        }
    }
    std::printf("%d/10 criteria passed\n", passed);
    return passed == 10 ? 0 : 1;
}
