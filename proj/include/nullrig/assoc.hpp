#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rigging.hpp"

namespace nullrig {

struct AlphaField {
    ExprPtr expr;  // function of x0, nonzero with constant sign on the chart

    static AlphaField parse(const std::string& text) {
        return AlphaField{parse_expression(text, x0_only())};
    }
    static AlphaField constant(double v) { return AlphaField{Expr::constant(v)}; }
};

// A rigged point together with one choice of alpha: the associated metric
// g + alpha eta(x)eta as jets, its Levi-Civita connection, the gradient of
// alpha, and the twisted-space Gauss map.
class AlphaContext {
public:
    AlphaContext(const SurfaceChart& chart, const RiggingSpec& rig, const AlphaField& af, Vec point)
        : pt(chart, rig, std::move(point)) {
        build(af);
    }

    AlphaContext(PointContext base, const AlphaField& af) : pt(std::move(base)) { build(af); }

    PointContext pt;
    AlphaField field;

    Jet3 alpha;  // restricted to the graph, order 3
    double aval = 0.0;
    double asign = 1.0;
    double aprime = 0.0;  // d(alpha)/d(x0) at the point

    JMat g_alpha;  // order 2
    Mat g_alpha_val;
    Mat g_alpha_inv;
    std::vector<JMat> Gamma_alpha;  // [c][a][b], order 1

    Vec dalpha;           // coordinate components of d(alpha) on the surface
    double dalpha_xi = 0.0;
    Vec dalpha_sharp;     // g_alpha-gradient, coordinates
    Vec delta;            // Gauss map, ambient values
    double dalpha_N = 0.0;
    double dalpha_delta = 0.0;

private:
    void build(const AlphaField& af) {
        const int n = pt.n;
        field = af;

        Jet3 a1 = af.expr->jet({pt.jF.value()}, 3);
        alpha = jet_compose_chain(a1.value(), a1.grad(0), a1.hess(0, 0), a1.third(0, 0, 0), pt.jF);
        aval = alpha.value();
        aprime = a1.grad(0);
        asign = aval >= 0.0 ? 1.0 : -1.0;

        g_alpha.assign(n, JVec(n, Jet3::constant(n, 0.0, 2)));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                Jet3 s = pt.g[a][b] + alpha * pt.eta[a] * pt.eta[b];
                g_alpha[a][b] = s;
                g_alpha[b][a] = s;
            }

        g_alpha_val = pt.values(g_alpha);
        if (std::fabs(det(g_alpha_val)) < degeneracy_tol(g_alpha_val))
            throw DegenerateAssocMetric("associated metric is degenerate at " + point_str(pt.p.data(), n));
        g_alpha_inv = inverse(g_alpha_val);

        Gamma_alpha.assign(n, JMat(n, JVec(n, Jet3::constant(n, 0.0, 1))));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                JVec rhs;
                rhs.reserve(n);
                for (int d = 0; d < n; ++d) {
                    Jet3 t = g_alpha[d][b].derivative(a) + g_alpha[d][a].derivative(b) -
                             g_alpha[a][b].derivative(d);
                    rhs.push_back(0.5 * t);
                }
                JVec sol = solve_linear(g_alpha, rhs);
                for (int c = 0; c < n; ++c) {
                    Gamma_alpha[c][a][b] = sol[c];
                    Gamma_alpha[c][b][a] = sol[c];
                }
            }

        dalpha.assign(n, 0.0);
        for (int a = 0; a < n; ++a) dalpha[a] = alpha.grad(a);
        Vec xicv = pt.values(pt.xic);
        dalpha_xi = dot(dalpha, xicv);
        dalpha_sharp = solve_linear(g_alpha_val, dalpha);

        double s = std::sqrt(std::fabs(aval));
        delta.assign(n + 1, 0.0);
        for (int i = 0; i <= n; ++i)
            delta[i] = s * pt.N[i].value() - (asign / s) * pt.xi[i].value();

        dalpha_N = aprime * pt.N[0].value();
        dalpha_delta = aprime * delta[0];
    }
};

inline Mat g_alpha_at(const AlphaContext& ax) { return ax.g_alpha_val; }

inline Vec gauss_map(const AlphaContext& ax) { return ax.delta; }

// number of negative directions of the associated metric
inline int metric_index(const AlphaContext& ax) {
    Vec ev = sym_eigenvalues(ax.g_alpha_val);
    int neg = 0;
    for (double e : ev)
        if (e < 0) ++neg;
    return neg;
}

// pairing under the twisted ambient metric gbar + alpha etabar(x)etabar
inline double twisted_pair(const AlphaContext& ax, const Vec& X, const Vec& Y) {
    Vec Nv = ax.pt.values(ax.pt.N);
    return inner(ax.pt.sig, X, Y) +
           ax.aval * inner(ax.pt.sig, Nv, X) * inner(ax.pt.sig, Nv, Y);
}

inline double gauss_map_orthogonality(const AlphaContext& ax) {
    double worst = 0.0;
    for (int b = 0; b < ax.pt.n; ++b) {
        Vec eb(ax.pt.n + 1);
        for (int i = 0; i <= ax.pt.n; ++i) eb[i] = ax.pt.frame[b][i].value();
        worst = std::max(worst, std::fabs(twisted_pair(ax, ax.delta, eb)));
    }
    return worst;
}

inline double gauss_map_magnitude_defect(const AlphaContext& ax) {
    return std::fabs(twisted_pair(ax, ax.delta, ax.delta) + ax.asign);
}

// operator of the Gauss map immersion into the twisted space, assembled from
// the closed-form expression in the surface data
inline Mat shape_operator_delta(const AlphaContext& ax) {
    const int n = ax.pt.n;
    double s = std::sqrt(std::fabs(ax.aval));
    Vec xicv = ax.pt.values(ax.pt.xic);
    Mat A(n, Vec(n, 0.0));
    for (int b = 0; b < n; ++b) {
        double etab = ax.pt.eta[b].value();
        double taub = ax.pt.tau[b].value();
        for (int a = 0; a < n; ++a) {
            double v = ax.aval * ax.pt.AN[a][b].value() - ax.pt.Astar[a][b].value() -
                       taub * xicv[a] - (ax.dalpha[b] / (2.0 * ax.aval)) * xicv[a] -
                       (etab / (2.0 * s)) * (s * ax.dalpha_sharp[a] + ax.dalpha_delta * xicv[a]);
            A[a][b] = (ax.asign / s) * v;
        }
    }
    return A;
}

inline double leaf_constancy_defect(const PointContext& pt, const Vec& dalpha) {
    double worst = 0.0;
    for (const auto& ec : pt.screen.coords) worst = std::max(worst, std::fabs(dot(dalpha, ec)));
    return worst;
}

inline void require_leaf_constant(const PointContext& pt, const Vec& dalpha, double tol = 1e-8) {
    double defect = leaf_constancy_defect(pt, dalpha);
    if (defect > tol)
        throw AlphaNotLeafConstant("d(alpha) does not vanish on the screen at " +
                                   point_str(pt.p.data(), pt.n) + " (defect " + std::to_string(defect) + ")");
}

// Eigenstructure of the Gauss map shape operator when the screen operators
// are conformally related with factor 1/alpha and alpha is constant along
// the screen leaves: the screen is killed and the rigged direction carries
// the single nonzero eigenvalue.
struct DeltaEigen {
    double lambda = 0.0;
    double screen_residual = 0.0;
    double xi_residual = 0.0;
};

inline DeltaEigen shape_operator_gauss_eigen(const AlphaContext& ax) {
    require_leaf_constant(ax.pt, ax.dalpha);
    const int n = ax.pt.n;
    double s = std::sqrt(std::fabs(ax.aval));
    Vec xicv = ax.pt.values(ax.pt.xic);

    DeltaEigen out;
    double tau_xi = ax.pt.tau_on(xicv);
    double eta_dsharp = ax.pt.eta_on(ax.dalpha_sharp);
    out.lambda = -(ax.asign / (2.0 * s)) * (2.0 * tau_xi + eta_dsharp + ax.dalpha_N);

    Mat A = shape_operator_delta(ax);
    for (const auto& ec : ax.pt.screen.coords)
        out.screen_residual = std::max(out.screen_residual, max_abs(matvec(A, ec)));
    Vec axi = matvec(A, xicv);
    for (int a = 0; a < n; ++a)
        out.xi_residual = std::max(out.xi_residual, std::fabs(axi[a] - out.lambda * xicv[a]));
    return out;
}

// max |2B - 2 alpha C + 2 alpha tau(x)eta + eta(x)eta d(alpha)(xi)|: zero
// exactly when the induced connection is the Levi-Civita connection of the
// associated metric
inline double coincidence_residual(const AlphaContext& ax) {
    const int n = ax.pt.n;
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double v = 2.0 * ax.pt.B[a][b].value() - 2.0 * ax.aval * ax.pt.C[a][b].value() +
                       2.0 * ax.aval * ax.pt.tau[a].value() * ax.pt.eta[b].value() +
                       ax.pt.eta[a].value() * ax.pt.eta[b].value() * ax.dalpha_xi;
            worst = std::max(worst, std::fabs(v));
        }
    return worst;
}

// the two displayed conditions equivalent to the coincidence
inline double coincidence_conditions_residual(const AlphaContext& ax) {
    const int n = ax.pt.n;
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            worst = std::max(worst, std::fabs(ax.pt.Astar[a][b].value() -
                                              ax.aval * ax.pt.AN[a][b].value()));
    double tau_xi = ax.pt.tau_on(ax.pt.values(ax.pt.xic));
    worst = std::max(worst, std::fabs(2.0 * ax.aval * tau_xi + ax.dalpha_xi));
    return worst;
}

// residual of the closed-rigging relation between the two connections
inline double connection_relation_residual(const AlphaContext& ax) {
    const int n = ax.pt.n;
    Vec xicv = ax.pt.values(ax.pt.xic);
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double etaa = ax.pt.eta[a].value();
            double etab = ax.pt.eta[b].value();
            double bracket = 2.0 * ax.pt.B[a][b].value() - 2.0 * ax.aval * ax.pt.C[a][b].value() +
                             2.0 * ax.aval * ax.pt.tau[a].value() * etab +
                             ax.dalpha[a] * etab + ax.dalpha[b] * etaa;
            for (int c = 0; c < n; ++c) {
                double rhs = ax.pt.Gamma_ind[c][a][b].value() -
                             0.5 * etaa * etab * ax.dalpha_sharp[c] +
                             bracket / (2.0 * ax.aval) * xicv[c];
                worst = std::max(worst, std::fabs(ax.Gamma_alpha[c][a][b].value() - rhs));
            }
        }
    return worst;
}

inline double induced_vs_levicivita(const AlphaContext& ax) {
    const int n = ax.pt.n;
    double worst = 0.0;
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                worst = std::max(worst, std::fabs(ax.Gamma_alpha[c][a][b].value() -
                                                  ax.pt.Gamma_ind[c][a][b].value()));
    return worst;
}

inline double metric_compatibility_residual(const AlphaContext& ax) {
    const int n = ax.pt.n;
    double worst = 0.0;
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double v = ax.g_alpha[a][b].grad(c);
                for (int e = 0; e < n; ++e)
                    v -= ax.Gamma_alpha[e][c][a].value() * ax.g_alpha_val[e][b] +
                         ax.Gamma_alpha[e][c][b].value() * ax.g_alpha_val[a][e];
                worst = std::max(worst, std::fabs(v));
            }
    return worst;
}

// g_alpha(xi, X) = alpha eta(X): the rigged direction is metrically dual to
// alpha times the rigged one-form
inline double rigged_metric_duality_residual(const AlphaContext& ax) {
    const int n = ax.pt.n;
    Vec xicv = ax.pt.values(ax.pt.xic);
    double worst = 0.0;
    for (int b = 0; b < n; ++b) {
        double v = -ax.aval * ax.pt.eta[b].value();
        for (int a = 0; a < n; ++a) v += ax.g_alpha_val[a][b] * xicv[a];
        worst = std::max(worst, std::fabs(v));
    }
    return worst;
}

struct LiePair {
    Mat lie;      // jet transport of g_alpha along the rigged direction
    Mat formula;  // -2B + eta(x)eta d(alpha)(xi)
};

inline LiePair lie_xi_g_alpha(const AlphaContext& ax) {
    const int n = ax.pt.n;
    Vec xicv = ax.pt.values(ax.pt.xic);
    LiePair out;
    out.lie.assign(n, Vec(n, 0.0));
    out.formula.assign(n, Vec(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double v = 0.0;
            for (int c = 0; c < n; ++c)
                v += xicv[c] * ax.g_alpha[a][b].grad(c) +
                     ax.g_alpha_val[c][b] * ax.pt.xic[c].grad(a) +
                     ax.g_alpha_val[a][c] * ax.pt.xic[c].grad(b);
            out.lie[a][b] = v;
            out.formula[a][b] = -2.0 * ax.pt.B[a][b].value() +
                                ax.pt.eta[a].value() * ax.pt.eta[b].value() * ax.dalpha_xi;
        }
    return out;
}

struct DivergenceResult {
    double computed = 0.0;        // trace of the g_alpha-covariant derivative of xi
    double formula = 0.0;         // d(alpha)(xi)/(2|alpha|) - n H*
    double formula_signed = 0.0;  // d(alpha)(xi)/(2 alpha) - n H*
};

inline DivergenceResult div_g_alpha_xi(const AlphaContext& ax) {
    const int n = ax.pt.n;
    Vec xicv = ax.pt.values(ax.pt.xic);
    DivergenceResult out;
    for (int a = 0; a < n; ++a) {
        out.computed += ax.pt.xic[a].grad(a);
        for (int c = 0; c < n; ++c) out.computed += ax.Gamma_alpha[a][a][c].value() * xicv[c];
    }
    out.formula = ax.dalpha_xi / (2.0 * std::fabs(ax.aval)) - n * ax.pt.Hstar;
    out.formula_signed = ax.dalpha_xi / (2.0 * ax.aval) - n * ax.pt.Hstar;
    return out;
}

// coincidence survives rescaling the rigging by phi when alpha is divided by
// phi squared
inline double rescaled_coincidence(const SurfaceChart& chart, const RiggingSpec& rig,
                                   const AlphaField& af, const ExprPtr& phi, const Vec& p) {
    RiggingSpec scaled = RiggingSpec::scaled(phi, rig);
    AlphaField af2{Expr::div(af.expr, Expr::pow(phi, 2))};
    AlphaContext ax(chart, scaled, af2, p);
    return coincidence_residual(ax);
}

// rigged one-form values from the closed-form expressions, bypassing the
// frame decomposition
inline Vec eta_values_for(const SurfaceChart& chart, const RiggingSpec& rig, double F,
                          const Vec& Fp) {
    const int n = chart.n();
    switch (rig.kind) {
        case RiggingSpec::Kind::GenericUCC: {
            Vec eta(n);
            for (int b = 0; b < n; ++b) eta[b] = std::sqrt(2.0) * Fp[b];
            return eta;
        }
        case RiggingSpec::Kind::Special: {
            if (std::fabs(F) < 1e-12)
                throw RiggingUndefined("special rigging needs x0 != 0, got x0 = " + std::to_string(F));
            Vec eta(n);
            for (int b = 0; b < n; ++b) eta[b] = -Fp[b] / F;
            return eta;
        }
        case RiggingSpec::Kind::Scaled: {
            if (!rig.phi || !rig.base) throw ConfigError("scaled rigging needs a factor and a base");
            Vec eta = eta_values_for(chart, *rig.base, F, Fp);
            double phiv = rig.phi->value({F});
            if (std::fabs(phiv) < 1e-12) throw RiggingUndefined("rescaling factor vanishes");
            for (double& e : eta) e *= phiv;
            return eta;
        }
    }
    throw ConfigError("unknown rigging kind");
}

// associated metric entries from first derivatives of the graph alone, for
// use as the ground data of finite-difference probes
inline Mat g_alpha_values_at(const SurfaceChart& chart, const RiggingSpec& rig,
                             const AlphaField& af, const Vec& u) {
    const int n = chart.n();
    Jet3 jF = chart.F_jet(u, 1);
    double F = jF.value();
    Vec Fp(n);
    for (int a = 0; a < n; ++a) Fp[a] = jF.grad(a);
    Vec eta = eta_values_for(chart, rig, F, Fp);
    double av = af.expr->value({F});
    Mat g(n, Vec(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            g[a][b] = -Fp[a] * Fp[b] + av * eta[a] * eta[b];
            if (a == b) g[a][b] += chart.eps_u(a);
        }
    return g;
}

}  // namespace nullrig
