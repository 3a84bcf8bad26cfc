#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvature.hpp"

namespace nullrig {

using json = nlohmann::ordered_json;

struct RunConfig {
    int n = 2;
    int q = 1;
    std::string f_text;
    std::vector<BallExclusion> exclusions;
    json rigging;  // normalized {"kind", ["phi", "base"]}
    std::string alpha_text = "1";
    int points = 50;
    std::uint64_t seed = 2026;
    std::vector<std::string> suites = {"structure", "coincidence", "curvature"};
    double tol_scale = 1.0;
};

inline RiggingSpec rigging_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("rigging needs a string field 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "generic_ucc") return RiggingSpec::generic_ucc();
    if (kind == "special") return RiggingSpec::special();
    if (kind == "scaled") {
        if (!j.contains("phi") || !j.at("phi").is_string())
            throw ConfigError("scaled rigging needs a string field 'phi'");
        if (!j.contains("base"))
            throw ConfigError("scaled rigging needs a field 'base'");
        ExprPtr phi = parse_expression(j.at("phi").get<std::string>(), x0_only());
        return RiggingSpec::scaled(phi, rigging_from_json(j.at("base")));
    }
    throw ConfigError("unknown rigging kind '" + kind + "'");
}

inline json normalize_rigging_json(const json& j) {
    json out;
    out["kind"] = j.at("kind").get<std::string>();
    if (out["kind"] == "scaled") {
        out["phi"] = j.at("phi").get<std::string>();
        out["base"] = normalize_rigging_json(j.at("base"));
    }
    return out;
}

inline RunConfig parse_run_config(const json& j) {
    RunConfig cfg;
    try {
        if (!j.is_object() || !j.contains("chart")) throw ConfigError("config needs a 'chart' object");
        const json& ch = j.at("chart");
        cfg.n = ch.at("n").get<int>();
        cfg.q = ch.at("q").get<int>();
        cfg.f_text = ch.at("F").get<std::string>();
        if (ch.contains("exclude")) {
            for (const json& e : ch.at("exclude")) {
                const json& b = e.at("ball");
                BallExclusion ex;
                ex.center = b.at("center").get<Vec>();
                ex.r = b.at("r").get<double>();
                if (int(ex.center.size()) != cfg.n)
                    throw ConfigError("exclusion ball center has wrong dimension");
                cfg.exclusions.push_back(std::move(ex));
            }
        }
        cfg.rigging = j.contains("rigging") ? normalize_rigging_json(j.at("rigging"))
                                            : json{{"kind", "generic_ucc"}};
        if (j.contains("alpha")) cfg.alpha_text = j.at("alpha").get<std::string>();
        if (j.contains("points")) cfg.points = j.at("points").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("suites")) cfg.suites = j.at("suites").get<std::vector<std::string>>();
        if (j.contains("tol_scale")) cfg.tol_scale = j.at("tol_scale").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }

    if (cfg.n < 2) throw ConfigError("chart dimension n must be at least 2");
    if (cfg.q < 1 || cfg.q > cfg.n)
        throw ConfigError("signature count q must satisfy 1 <= q <= n");
    if (cfg.points < 1) throw ConfigError("points must be positive");
    if (!(cfg.tol_scale > 0.0)) throw ConfigError("tol_scale must be positive");
    if (cfg.suites.empty()) throw ConfigError("suites must not be empty");
    std::vector<std::string> expanded;
    for (const auto& s : cfg.suites) {
        if (s == "all") {
            expanded = {"structure", "coincidence", "curvature"};
            break;
        }
        if (s != "structure" && s != "coincidence" && s != "curvature")
            throw ConfigError("unknown suite '" + s + "'");
        expanded.push_back(s);
    }
    cfg.suites = std::move(expanded);

    // parse early so syntax errors surface before any sampling happens
    parse_expression(cfg.f_text, chart_vars(cfg.n));
    parse_expression(cfg.alpha_text, x0_only());
    rigging_from_json(cfg.rigging);
    return cfg;
}

inline json canonical_config_json(const RunConfig& cfg) {
    json ch;
    ch["n"] = cfg.n;
    ch["q"] = cfg.q;
    ch["F"] = cfg.f_text;
    json ex = json::array();
    for (const auto& b : cfg.exclusions) {
        json ball;
        ball["center"] = b.center;
        ball["r"] = b.r;
        ex.push_back(json{{"ball", ball}});
    }
    ch["exclude"] = ex;

    json out;
    out["chart"] = ch;
    out["rigging"] = cfg.rigging;
    out["alpha"] = cfg.alpha_text;
    out["points"] = cfg.points;
    out["seed"] = cfg.seed;
    out["suites"] = cfg.suites;
    out["tol_scale"] = cfg.tol_scale;
    return out;
}

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

struct CheckDef {
    const char* id;
    const char* paper_ref;
    double tol;
};

inline const std::vector<CheckDef>& structure_checks() {
    static const std::vector<CheckDef> defs = {
        {"null_condition", "eps^a (F'_a)^2 = 1", 1e-10},
        {"gradient_identity", "eps^a F'_a F''_{a b} = 0", 1e-10},
        {"normal_null", "gbar(n, n) = 0", 1e-10},
        {"frame_orthogonality", "gbar(n, e_b) = 0", 1e-10},
        {"rig_normalization", "gbar(N, xi) = 1", 1e-10},
        {"rig_null", "gbar(N, N) = 0", 1e-10},
        {"eta_normalization", "eta(xi) = 1", 1e-10},
        {"eta_screen", "eta(E_k) = 0", 1e-10},
        {"screen_orthonormality",
         "gbar(E_j, E_k) = sign_j delta_jk, gbar(E_k, N) = gbar(E_k, xi) = 0", 1e-8},
        {"deta", "d eta = 0", 1e-12},
        {"tau_screen", "tau(E_k) = 0", 1e-9},
        {"b_symmetry", "B(X, Y) = B(Y, X)", 1e-10},
        {"b_radical", "B(xi, X) = 0", 1e-10},
        {"astar_radical", "A* xi = 0", 1e-10},
        {"astar_g_symmetry", "g(A* X, Y) = g(X, A* Y)", 1e-9},
        {"b_astar_consistency", "B(X, Y) = g(A* X, Y)", 1e-9},
        {"gauss_decomposition", "Dbar_X Y = D_X Y + B(X, Y) N", 1e-9},
        {"weingarten_defect",
         "g(A_N X, Y) - g(X, A_N Y) = tau(X)eta(Y) - tau(Y)eta(X) - deta(X, Y)", 1e-9},
        {"level_set_screen", "dF(E_k) = 0", 1e-10},
    };
    return defs;
}

inline const std::vector<CheckDef>& coincidence_checks() {
    static const std::vector<CheckDef> defs = {
        {"metric_index", "index(g_a) = q - 1 if a > 0 else q", 0.5},
        {"gauss_map_orthogonality", "gbar_a(delta_a, TM) = 0", 1e-10},
        {"gauss_map_magnitude", "gbar_a(delta_a, delta_a) = -sign(a)", 1e-10},
        {"rigged_metric_duality", "g_1(xi, X) = eta(X)", 1e-10},
        {"lie_rigged_metric", "(L_xi g_a)(X,Y) = -2B(X,Y) + eta(X)eta(Y) da(xi)", 1e-8},
        {"divergence_rigged", "div(xi) = da(xi)/(2|a|) - n H*", 1e-7},
        {"coincidence_conditions", "A* = a A_N and 2a tau(xi) + da(xi) = 0", 1e-9},
        {"coincidence_residual",
         "2B - 2a C + 2a tau(X)eta(Y) + eta(X)eta(Y) da(xi) = 0", 1e-9},
        {"connection_relation",
         "Gamma_a = Gamma - (1/2)eta(X)eta(Y) grad_a(a) + [2B - 2aC + 2a tau(X)eta(Y) + "
         "da(X)eta(Y) + da(Y)eta(X)]/(2a) xi",
         1e-7},
        {"shape_operator_gauss",
         "A_delta E_k = 0, A_delta xi = -sign(a)/(2 sqrt|a|)[2tau(xi) + eta(grad_a(a)) + da(N)] xi",
         1e-9},
        {"induced_vs_levicivita", "coincidence => Gamma = Gamma(g_a)", 1e-8},
    };
    return defs;
}

inline const std::vector<CheckDef>& curvature_checks() {
    static const std::vector<CheckDef> defs = {
        {"christoffel_oracle", "Gamma(g_a) jets = Gamma(g_a) finite differences", 1e-6},
        {"riemann_oracle", "R_a jets = R_a nested finite differences", 1e-4},
        {"riemann_antisymmetry", "R_a(X,Y)Z = -R_a(Y,X)Z", 1e-9},
        {"bianchi_first", "R_a(X,Y)Z + R_a(Y,Z)X + R_a(Z,X)Y = 0", 1e-8},
        {"metric_compatibility", "nabla^a g_a = 0", 1e-7},
        {"curvature_relation",
         "R_a(X,Y)Z = R(X,Y)Z - Phi(Y,Z)A*X + Phi(X,Z)A*Y + [dtau(X,Y)eta(Z) + braces]xi", 1e-6},
        {"gc_gauss_screen", "gbar(R(X,Y)Z, PW) = B(Y,Z)C(X,PW) - B(X,Z)C(Y,PW)", 1e-6},
        {"gc_radical_pairing", "gbar(R(X,Y)Z, N) = 0", 1e-6},
        {"gc_codazzi_screen",
         "(nabla_X C)(Y,PZ) - (nabla_Y C)(X,PZ) = C(Y,PZ)tau(X) - C(X,PZ)tau(Y)", 1e-6},
        {"gc_codazzi_radical",
         "(nabla_X B)(Y,Z) - (nabla_Y B)(X,Z) = B(X,Z)tau(Y) - B(Y,Z)tau(X)", 1e-6},
        {"gc_rotation", "C(Y, A*X) - C(X, A*Y) = dtau(X, Y)", 1e-6},
        {"ricci_screen",
         "Ric_a(X,Y) = (1/a)g(A*X,A*Y) - g(A*X,A_N Y) - g(A_N X,A*Y) + nB(H - H*/a) + nC H* - "
         "(1/a)[tau(xi) + da(xi)/(2a)]B",
         1e-7},
        {"ricci_radical", "Ric_a(xi,xi) = -n[tau(xi) + da(xi)/(2a)]H*", 1e-7},
        {"ricci_mixed", "Ric_a(xi,X) = dtau(xi,X) + n g(A_N xi, X) H*", 1e-7},
        {"sectional_radical", "K_a(xi,X) = [tau(xi) + da(xi)/(2a)] B(X,X)/(a g(X,X))", 1e-6},
        {"sectional_screen",
         "K_a(X,Y) = [B(X,X)B(Y,Y) - B(X,Y)^2]/(a g(X,X)g(Y,Y)) + [2B(X,Y)C(X,Y) - "
         "B(X,X)C(Y,Y) - B(Y,Y)C(X,X)]/(g(X,X)g(Y,Y))",
         1e-6},
        {"scalar_relation",
         "s_a = (1/a)tr(A*^2) - 2 tr(A* A_N) + n^2(2H - H*/a)H* - (2n/a)[tau(xi) + "
         "da(xi)/(2a)]H*",
         1e-6},
    };
    return defs;
}

inline const std::vector<CheckDef>& checks_for_suite(const std::string& name) {
    if (name == "structure") return structure_checks();
    if (name == "coincidence") return coincidence_checks();
    if (name == "curvature") return curvature_checks();
    throw ConfigError("unknown suite '" + name + "'");
}

struct PointCheck {
    double residual = 0.0;
    bool skipped = false;
    std::string reason;
};

namespace detail {

template <class F>
PointCheck guarded(F&& f) {
    try {
        return PointCheck{f(), false, ""};
    } catch (const std::exception& e) {
        return PointCheck{1e300, false, e.what()};
    }
}

inline PointCheck skip(const std::string& reason) { return PointCheck{0.0, true, reason}; }

}  // namespace detail

inline std::vector<PointCheck> evaluate_structure(const PointContext& pt) {
    using detail::guarded;
    const SurfaceChart& chart = pt.chart();
    const int n = pt.n;
    Vec nrmv = pt.values(pt.nrm);
    Vec Nv = pt.values(pt.N);
    Vec xiv = pt.values(pt.xi);
    Vec xicv = pt.values(pt.xic);
    Mat framev(n, Vec(n + 1));
    for (int b = 0; b < n; ++b)
        for (int i = 0; i <= n; ++i) framev[b][i] = pt.frame[b][i].value();

    std::vector<PointCheck> out;
    out.push_back(guarded([&] { return null_residual(chart, pt.p); }));
    out.push_back(guarded([&] { return gradient_identity_residual(chart, pt.p); }));
    out.push_back(guarded([&] { return std::fabs(inner(pt.sig, nrmv, nrmv)); }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (int b = 0; b < n; ++b)
            worst = std::max(worst, std::fabs(inner(pt.sig, nrmv, framev[b])));
        return worst;
    }));
    out.push_back(guarded([&] { return std::fabs(inner(pt.sig, Nv, xiv) - 1.0); }));
    out.push_back(guarded([&] { return std::fabs(inner(pt.sig, Nv, Nv)); }));
    out.push_back(guarded([&] { return std::fabs(pt.eta_on(xicv) - 1.0); }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (const auto& e : pt.screen.coords) worst = std::max(worst, std::fabs(pt.eta_on(e)));
        return worst;
    }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (std::size_t k = 0; k < pt.screen.ambient.size(); ++k) {
            worst = std::max(worst, std::fabs(inner(pt.sig, pt.screen.ambient[k], Nv)));
            worst = std::max(worst, std::fabs(inner(pt.sig, pt.screen.ambient[k], xiv)));
            for (std::size_t l = 0; l < pt.screen.ambient.size(); ++l) {
                double expect = (k == l) ? pt.screen.sign[k] : 0.0;
                worst = std::max(worst, std::fabs(inner(pt.sig, pt.screen.ambient[k],
                                                        pt.screen.ambient[l]) -
                                                  expect));
            }
        }
        return worst;
    }));
    out.push_back(guarded([&] { return max_abs(pt.d_eta()); }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (const auto& e : pt.screen.coords) worst = std::max(worst, std::fabs(pt.tau_on(e)));
        return worst;
    }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                worst = std::max(worst, std::fabs(pt.B[a][b].value() - pt.B[b][a].value()));
        return worst;
    }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            double s = 0.0;
            for (int b = 0; b < n; ++b) s += pt.B[a][b].value() * xicv[b];
            worst = std::max(worst, std::fabs(s));
        }
        return worst;
    }));
    out.push_back(guarded([&] { return max_abs(pt.apply(pt.Astar, xicv)); }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double sab = 0.0, sba = 0.0;
                for (int e = 0; e < n; ++e) {
                    sab += pt.Astar[e][a].value() * pt.g[e][b].value();
                    sba += pt.Astar[e][b].value() * pt.g[e][a].value();
                }
                worst = std::max(worst, std::fabs(sab - sba));
            }
        return worst;
    }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int e = 0; e < n; ++e) s += pt.Astar[e][a].value() * pt.g[e][b].value();
                worst = std::max(worst, std::fabs(pt.B[a][b].value() - s));
            }
        return worst;
    }));
    out.push_back(guarded([&] { return pt.gauss_decomposition_residual(); }));
    out.push_back(guarded([&] { return pt.weingarten_symmetry_defect(); }));
    out.push_back(guarded([&] {
        double worst = 0.0;
        for (const auto& e : pt.screen.coords) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) s += pt.Fp[a].value() * e[a];
            worst = std::max(worst, std::fabs(s));
        }
        return worst;
    }));
    return out;
}

inline std::vector<PointCheck> evaluate_coincidence(const AlphaContext& ax, bool alpha_is_one,
                                                    double tol_scale) {
    using detail::guarded;
    using detail::skip;
    std::vector<PointCheck> out;
    out.push_back(guarded([&] {
        int expected = ax.aval > 0.0 ? ax.pt.sig.q - 1 : ax.pt.sig.q;
        return std::fabs(double(metric_index(ax) - expected));
    }));
    out.push_back(guarded([&] { return gauss_map_orthogonality(ax); }));
    out.push_back(guarded([&] { return gauss_map_magnitude_defect(ax); }));
    if (alpha_is_one)
        out.push_back(guarded([&] { return rigged_metric_duality_residual(ax); }));
    else
        out.push_back(skip("stated for alpha = 1"));
    out.push_back(guarded([&] {
        LiePair lp = lie_xi_g_alpha(ax);
        double worst = 0.0;
        for (int a = 0; a < ax.pt.n; ++a)
            for (int b = 0; b < ax.pt.n; ++b)
                worst = std::max(worst, std::fabs(lp.lie[a][b] - lp.formula[a][b]));
        return worst;
    }));
    out.push_back(guarded([&] {
        DivergenceResult dv = div_g_alpha_xi(ax);
        return std::fabs(dv.computed - dv.formula);
    }));
    PointCheck conditions = guarded([&] { return coincidence_conditions_residual(ax); });
    out.push_back(conditions);
    out.push_back(guarded([&] { return coincidence_residual(ax); }));
    out.push_back(guarded([&] { return connection_relation_residual(ax); }));

    double conformal_defect = 0.0;
    for (int a = 0; a < ax.pt.n; ++a)
        for (int b = 0; b < ax.pt.n; ++b)
            conformal_defect =
                std::max(conformal_defect, std::fabs(ax.pt.AN[a][b].value() -
                                                     ax.pt.Astar[a][b].value() / ax.aval));
    if (conformal_defect > 1e-6)
        out.push_back(skip("screen shape operators not conformal with factor 1/alpha"));
    else
        out.push_back(guarded([&] {
            DeltaEigen ev = shape_operator_gauss_eigen(ax);
            return std::max(ev.screen_residual, ev.xi_residual);
        }));

    double cond_tol = coincidence_checks()[6].tol * tol_scale;
    if (conditions.skipped || conditions.residual > cond_tol)
        out.push_back(skip("coincidence conditions fail at this point"));
    else
        out.push_back(guarded([&] { return induced_vs_levicivita(ax); }));
    return out;
}

inline std::vector<PointCheck> evaluate_curvature(const CurvatureContext& cc) {
    using detail::guarded;
    using detail::skip;
    std::vector<PointCheck> out;
    out.push_back(guarded([&] { return christoffel_oracle_residual(cc.ax); }));
    out.push_back(guarded([&] { return riemann_oracle_residual(cc); }));
    out.push_back(guarded([&] { return riemann_antisymmetry_residual(cc.riem_alpha, cc.n); }));
    out.push_back(guarded([&] { return bianchi_first_residual(cc.riem_alpha, cc.n); }));
    out.push_back(guarded([&] { return metric_compatibility_residual(cc.ax); }));
    out.push_back(guarded([&] { return curvature_relation_residual(cc); }));

    GaussCodazziResiduals gc;
    PointCheck gc_probe = guarded([&] {
        gc = gauss_codazzi_residuals(cc);
        return gc.gauss_screen;
    });
    out.push_back(gc_probe);
    if (gc_probe.reason.empty()) {
        out.push_back(PointCheck{gc.radical_pairing, false, ""});
        out.push_back(PointCheck{gc.codazzi_screen, false, ""});
        out.push_back(PointCheck{gc.codazzi_radical, false, ""});
        out.push_back(PointCheck{gc.rotation, false, ""});
    } else {
        for (int i = 0; i < 4; ++i) out.push_back(gc_probe);
    }

    RicciResiduals ric;
    PointCheck ric_probe = guarded([&] {
        ric = ricci_relation_residuals(cc);
        return ric.screen;
    });
    out.push_back(ric_probe);
    if (ric_probe.reason.empty()) {
        out.push_back(PointCheck{ric.radical, false, ""});
        out.push_back(PointCheck{ric.mixed, false, ""});
    } else {
        out.push_back(ric_probe);
        out.push_back(ric_probe);
    }

    SectionalResiduals sec;
    PointCheck sec_probe = guarded([&] {
        sec = sectional_relation_residuals(cc);
        return sec.radical;
    });
    out.push_back(sec_probe);
    if (!sec_probe.reason.empty())
        out.push_back(sec_probe);
    else if (!sec.screen_evaluated)
        out.push_back(skip("needs two screen directions"));
    else
        out.push_back(PointCheck{sec.screen, false, ""});

    out.push_back(guarded([&] { return scalar_relation_residual(cc); }));
    return out;
}

struct CheckReport {
    std::string id;
    std::string paper_ref;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tol = 0.0;
    bool pass = true;
    bool skipped = false;
    std::string reason;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckReport> checks;
};

struct PointRow {
    Vec u;
    std::vector<std::vector<PointCheck>> per_suite;  // aligned with cfg.suites
};

struct RunReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<SuiteReport> suites;
    std::vector<PointRow> rows;
    std::vector<std::string> suite_names;
    double tol_scale = 1.0;
    bool all_pass = true;
};

inline int worker_count(int njobs) {
    unsigned hw = std::thread::hardware_concurrency();
    int workers = hw == 0 ? 1 : int(hw);
    if (const char* env = std::getenv("NULLRIG_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) workers = std::min<long>(workers, v);
    }
    return std::max(1, std::min(workers, njobs));
}

class Runner {
public:
    explicit Runner(RunConfig cfg)
        : cfg_(std::move(cfg)),
          chart_(cfg_.n, cfg_.q, parse_expression(cfg_.f_text, chart_vars(cfg_.n)),
                 cfg_.exclusions),
          rig_(rigging_from_json(cfg_.rigging)),
          alpha_{parse_expression(cfg_.alpha_text, x0_only())} {}

    const RunConfig& config() const { return cfg_; }

    RunReport run() {
        std::vector<Vec> pts = sample(chart_, cfg_.points, cfg_.seed);

        bool alpha_is_one = true;
        int sign_seen = 0;
        for (const Vec& u : pts) {
            double f = chart_.F_jet(u, 0).value();
            double av = 0.0;
            try {
                av = alpha_.expr->value({f});
            } catch (const std::exception& e) {
                throw ConfigError(std::string("alpha cannot be evaluated on the surface: ") +
                                  e.what());
            }
            if (av == 0.0)
                throw ConfigError("alpha vanishes at a sampled point, x0 = " + std::to_string(f));
            int s = av > 0.0 ? 1 : -1;
            if (sign_seen == 0) sign_seen = s;
            if (s != sign_seen)
                throw ConfigError("alpha changes sign across the sampled points");
            if (std::fabs(av - 1.0) > 1e-12) alpha_is_one = false;
        }

        RunReport rep;
        rep.seed = cfg_.seed;
        rep.suite_names = cfg_.suites;
        rep.tol_scale = cfg_.tol_scale;
        rep.config_hash = fnv1a_hex(canonical_config_json(cfg_).dump());
        rep.rows.resize(pts.size());

        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= pts.size()) return;
                rep.rows[i] = evaluate_point(pts[i], alpha_is_one);
            }
        };
        int workers = worker_count(int(pts.size()));
        if (workers <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }

        for (std::size_t si = 0; si < cfg_.suites.size(); ++si) {
            const auto& defs = checks_for_suite(cfg_.suites[si]);
            SuiteReport suite;
            suite.name = cfg_.suites[si];
            for (std::size_t ci = 0; ci < defs.size(); ++ci) {
                CheckReport cr;
                cr.id = defs[ci].id;
                cr.paper_ref = defs[ci].paper_ref;
                cr.tol = defs[ci].tol * cfg_.tol_scale;
                double sum = 0.0;
                int counted = 0;
                std::string first_reason;
                for (const auto& row : rep.rows) {
                    const PointCheck& pc = row.per_suite[si][ci];
                    if (pc.skipped) {
                        if (first_reason.empty()) first_reason = pc.reason;
                        continue;
                    }
                    cr.max_residual = std::max(cr.max_residual, pc.residual);
                    sum += pc.residual;
                    ++counted;
                }
                if (counted == 0) {
                    cr.skipped = true;
                    cr.reason = first_reason.empty() ? "not evaluated" : first_reason;
                    cr.pass = true;
                } else {
                    cr.mean_residual = sum / counted;
                    cr.pass = cr.max_residual <= cr.tol;
                }
                if (!cr.skipped && !cr.pass) rep.all_pass = false;
                suite.checks.push_back(std::move(cr));
            }
            rep.suites.push_back(std::move(suite));
        }
        return rep;
    }

private:
    RunConfig cfg_;
    SurfaceChart chart_;
    RiggingSpec rig_;
    AlphaField alpha_;

    PointRow evaluate_point(const Vec& u, bool alpha_is_one) const {
        PointRow row;
        row.u = u;
        row.per_suite.resize(cfg_.suites.size());

        try {
            AlphaContext ax(chart_, rig_, alpha_, u);
            for (std::size_t si = 0; si < cfg_.suites.size(); ++si) {
                const std::string& s = cfg_.suites[si];
                if (s == "structure") row.per_suite[si] = evaluate_structure(ax.pt);
                else if (s == "coincidence")
                    row.per_suite[si] = evaluate_coincidence(ax, alpha_is_one, cfg_.tol_scale);
                else if (s == "curvature")
                    row.per_suite[si] = evaluate_curvature(CurvatureContext(ax));
            }
        } catch (const std::exception& e) {
            for (std::size_t si = 0; si < cfg_.suites.size(); ++si) {
                const auto& defs = checks_for_suite(cfg_.suites[si]);
                row.per_suite[si].assign(defs.size(), PointCheck{1e300, false, e.what()});
            }
        }
        return row;
    }
};

inline json report_to_json(const RunReport& rep) {
    json out;
    out["config_hash"] = rep.config_hash;
    out["seed"] = rep.seed;
    json suites = json::array();
    for (const auto& s : rep.suites) {
        json js;
        js["name"] = s.name;
        json checks = json::array();
        for (const auto& c : s.checks) {
            json jc;
            jc["id"] = c.id;
            jc["paper_ref"] = c.paper_ref;
            jc["max_residual"] = c.max_residual;
            jc["mean_residual"] = c.mean_residual;
            jc["tol"] = c.tol;
            jc["pass"] = c.pass;
            jc["skipped"] = c.skipped;
            if (c.skipped) jc["reason"] = c.reason;
            checks.push_back(std::move(jc));
        }
        js["checks"] = std::move(checks);
        suites.push_back(std::move(js));
    }
    out["suites"] = std::move(suites);
    return out;
}

inline std::string report_to_csv(const RunReport& rep) {
    std::ostringstream os;
    os.precision(17);
    int n = rep.rows.empty() ? 0 : int(rep.rows[0].u.size());
    os << "point_index";
    for (int a = 1; a <= n; ++a) os << ",u" << a;
    os << ",suite,check_id,residual,tol,pass,skipped,reason\n";
    for (std::size_t pi = 0; pi < rep.rows.size(); ++pi) {
        const PointRow& row = rep.rows[pi];
        for (std::size_t si = 0; si < rep.suite_names.size(); ++si) {
            const auto& defs = checks_for_suite(rep.suite_names[si]);
            for (std::size_t ci = 0; ci < defs.size(); ++ci) {
                const PointCheck& pc = row.per_suite[si][ci];
                double tol = defs[ci].tol * rep.tol_scale;
                bool pass = pc.skipped || pc.residual <= tol;
                os << pi;
                for (int a = 0; a < n; ++a) os << ',' << row.u[a];
                os << ',' << rep.suite_names[si] << ',' << defs[ci].id << ',' << pc.residual
                   << ',' << tol << ',' << (pass ? "true" : "false") << ','
                   << (pc.skipped ? "true" : "false") << ',';
                std::string reason = pc.skipped ? pc.reason : "";
                for (char ch : reason) os << (ch == ',' ? ';' : ch);
                os << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace nullrig
