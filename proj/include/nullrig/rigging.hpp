#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "monge.hpp"

namespace nullrig {

using JVec = std::vector<Jet3>;
using JMat = Matrix<Jet3>;

struct RiggingSpec {
    enum class Kind { GenericUCC, Special, Scaled };

    Kind kind = Kind::GenericUCC;
    ExprPtr phi;                        // Scaled: factor as a function of x0
    std::shared_ptr<RiggingSpec> base;  // Scaled: rigging being rescaled

    static RiggingSpec generic_ucc() { return {}; }
    static RiggingSpec special() { return {Kind::Special, nullptr, nullptr}; }
    static RiggingSpec scaled(ExprPtr phi, RiggingSpec base) {
        return {Kind::Scaled, std::move(phi), std::make_shared<RiggingSpec>(std::move(base))};
    }
};

// signature-aware Gram-Schmidt over the candidate pool, always pivoting on
// the largest remaining squared length so null directions drop out last
struct ScreenFrame {
    Mat ambient;  // rows
    Mat coords;   // rows, chart coordinates
    Vec sign;     // +1 spacelike, -1 timelike
};

inline ScreenFrame screen_frame_from_candidates(const Signature& sig, Mat pool, int want,
                                                double pivot_tol = 1e-8) {
    ScreenFrame out;
    std::vector<bool> used(pool.size(), false);
    while (int(out.ambient.size()) < want) {
        int best = -1;
        double best_mag = pivot_tol;
        Vec best_w;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            Vec w = pool[i];
            for (std::size_t k = 0; k < out.ambient.size(); ++k) {
                double proj = out.sign[k] * inner(sig, w, out.ambient[k]);
                for (std::size_t j = 0; j < w.size(); ++j) w[j] -= proj * out.ambient[k][j];
            }
            double mag = std::fabs(inner(sig, w, w));
            if (mag > best_mag) {
                best = int(i);
                best_mag = mag;
                best_w = w;
            }
        }
        if (best < 0)
            throw DegenerateScreen("screen frame construction ran out of independent directions (" +
                                   std::to_string(out.ambient.size()) + " of " + std::to_string(want) + " found)");
        used[best] = true;
        double sq = inner(sig, best_w, best_w);
        double scale = 1.0 / std::sqrt(std::fabs(sq));
        for (double& x : best_w) x *= scale;
        out.ambient.push_back(best_w);
        out.sign.push_back(sq > 0 ? 1.0 : -1.0);
    }
    for (const auto& v : out.ambient) out.coords.push_back(Vec(v.begin() + 1, v.end()));
    return out;
}

// Everything attached to one surface point under one choice of rigging:
// frames and rigging vectors as jets in the chart coordinates, the induced
// connection, both shape operators, and the derived forms.  Jets carry one
// derivative order beyond the values so curvature code can differentiate
// every stored field once more.
class PointContext {
public:
    PointContext(const SurfaceChart& chart, const RiggingSpec& rig, Vec point)
        : chart_(&chart), rig_(rig), p(std::move(point)), n(chart.n()), sig(chart.sig()) {
        build();
    }

    const SurfaceChart& chart() const { return *chart_; }
    const RiggingSpec& rigging() const { return rig_; }

    Vec p;
    int n;
    Signature sig;

    Jet3 jF;                  // order 3
    JVec Fp;                  // F'_a, order 2
    std::vector<JVec> frame;  // frame[b][i], ambient components of d/du^b
    JVec nrm;                 // degenerate normal
    JVec N;                   // transversal rigging vector
    JVec xi;                  // rigged null direction, ambient
    JVec xic;                 // xi in chart coordinates
    JVec eta;                 // eta_a

    JMat g;                       // induced metric
    std::vector<JMat> Gamma_ind;  // [c][a][b], induced connection
    JMat B;                       // second fundamental form
    JMat AN;                      // column b = A_N(d_b) in coordinates
    JMat Astar;                   // column b = A*_xi(d_b)
    JVec tau;                     // rotation one-form
    JMat C;                       // C[a][b] = C(d_a, P d_b)

    ScreenFrame screen;

    double H = 0.0;      // tr(A_N)/n
    double Hstar = 0.0;  // tr(A*)/n

    double value(const Jet3& j) const { return j.value(); }

    Mat values(const JMat& m) const {
        Mat r(m.size(), Vec(m[0].size()));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m[i].size(); ++j) r[i][j] = m[i][j].value();
        return r;
    }

    Vec values(const JVec& v) const {
        Vec r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
        return r;
    }

    // exterior derivative of a stored one-form, as values
    Mat d_of(const JVec& form) const {
        Mat d(n, Vec(n, 0.0));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) d[a][b] = form[b].grad(a) - form[a].grad(b);
        return d;
    }

    Mat d_eta() const { return d_of(eta); }
    Mat d_tau() const { return d_of(tau); }

    double eta_on(const Vec& coords) const {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += eta[a].value() * coords[a];
        return s;
    }

    double tau_on(const Vec& coords) const {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += tau[a].value() * coords[a];
        return s;
    }

    double form_on(const JMat& m, const Vec& x, const Vec& y) const {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += m[a][b].value() * x[a] * y[b];
        return s;
    }

    Vec apply(const JMat& op, const Vec& coords) const {
        Vec r(n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) r[a] += op[a][b].value() * coords[b];
        return r;
    }

    // how far gbar(A_N X, Y) - gbar(X, A_N Y) is from the closed-form
    // defect tau(X)eta(Y) - tau(Y)eta(X) - deta(X,Y)
    double weingarten_symmetry_defect() const {
        Mat de = d_eta();
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double lhs = C[a][b].value() - C[b][a].value();
                double rhs = tau[a].value() * eta[b].value() - tau[b].value() * eta[a].value() - de[a][b];
                worst = std::max(worst, std::fabs(lhs - rhs));
            }
        return worst;
    }

    // residual of rebuilding the flat derivative of the frame from the
    // decomposition output
    double gauss_decomposition_residual() const {
        double worst = 0.0;
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int i = 0; i <= n; ++i) {
                    double flat = frame[c][i].derivative(b).value();
                    double rebuilt = B[b][c].value() * N[i].value();
                    for (int e = 0; e < n; ++e)
                        rebuilt += Gamma_ind[e][b][c].value() * frame[e][i].value();
                    worst = std::max(worst, std::fabs(flat - rebuilt));
                }
        return worst;
    }

private:
    const SurfaceChart* chart_;
    RiggingSpec rig_;

    Jet3 jc(double v, int order = 2) const { return Jet3::constant(n, v, order); }

    // phi(x0) restricted to the surface, as a jet in the chart coordinates
    Jet3 compose_on_surface(const ExprPtr& f) const {
        Jet3 one = f->jet({jF.value()}, 3);
        return jet_compose_chain(one.value(), one.grad(0), one.hess(0, 0), one.third(0, 0, 0), jF);
    }

    void rigging_vectors(const RiggingSpec& spec, JVec& Nout, JVec& xiout) const {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        switch (spec.kind) {
            case RiggingSpec::Kind::GenericUCC: {
                Nout.assign(n + 1, jc(0.0));
                xiout.assign(n + 1, jc(0.0));
                Nout[0] = jc(-inv_sqrt2);
                xiout[0] = jc(inv_sqrt2);
                for (int a = 0; a < n; ++a) {
                    Nout[a + 1] = inv_sqrt2 * chart_->eps_u(a) * Fp[a];
                    xiout[a + 1] = Nout[a + 1];
                }
                return;
            }
            case RiggingSpec::Kind::Special: {
                if (std::fabs(jF.value()) < 1e-12)
                    throw RiggingUndefined("special rigging needs x0 != 0, got x0 = " +
                                           std::to_string(jF.value()) + " at " + point_str(p.data(), n));
                Jet3 half_inv = 0.5 / jF;
                Nout.assign(n + 1, jc(0.0));
                xiout.assign(n + 1, jc(0.0));
                Nout[0] = half_inv;
                xiout[0] = -jF;
                for (int a = 0; a < n; ++a) {
                    Nout[a + 1] = -(half_inv * chart_->eps_u(a) * Fp[a]);
                    xiout[a + 1] = -(jF * chart_->eps_u(a) * Fp[a]);
                }
                return;
            }
            case RiggingSpec::Kind::Scaled: {
                if (!spec.phi || !spec.base) throw ConfigError("scaled rigging needs a factor and a base");
                JVec Nb, xib;
                rigging_vectors(*spec.base, Nb, xib);
                Jet3 phi = compose_on_surface(spec.phi);
                if (std::fabs(phi.value()) < 1e-12)
                    throw RiggingUndefined("rescaling factor vanishes at " + point_str(p.data(), n));
                Nout.resize(n + 1);
                xiout.resize(n + 1);
                for (int i = 0; i <= n; ++i) {
                    Nout[i] = phi * Nb[i];
                    xiout[i] = xib[i] / phi;
                }
                return;
            }
        }
        throw ConfigError("unknown rigging kind");
    }

    void build() {
        jF = chart_->F_jet(p, 3);
        Fp.clear();
        for (int a = 0; a < n; ++a) Fp.push_back(jF.derivative(a));

        frame.assign(n, JVec(n + 1, jc(0.0)));
        for (int b = 0; b < n; ++b) {
            frame[b][0] = Fp[b];
            frame[b][b + 1] = jc(1.0);
        }

        nrm.assign(n + 1, jc(0.0));
        nrm[0] = jc(1.0);
        for (int a = 0; a < n; ++a) nrm[a + 1] = chart_->eps_u(a) * Fp[a];

        rigging_vectors(rig_, N, xi);

        xic.assign(n, jc(0.0));
        for (int a = 0; a < n; ++a) xic[a] = xi[a + 1];

        eta.assign(n, jc(0.0));
        for (int b = 0; b < n; ++b) {
            Jet3 s = jc(0.0);
            for (int i = 0; i <= n; ++i) s = s + sig.eps(i) * N[i] * frame[b][i];
            eta[b] = s;
        }

        g.assign(n, JVec(n, jc(0.0)));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                Jet3 s = jc(0.0);
                for (int i = 0; i <= n; ++i) s = s + sig.eps(i) * frame[a][i] * frame[b][i];
                g[a][b] = s;
                g[b][a] = s;
            }

        // one ambient basis {d_1..d_n, N} decomposes the flat derivatives of
        // the frame, of N, and of xi in turn
        JMat basis(n + 1, JVec(n + 1, jc(0.0)));
        for (int i = 0; i <= n; ++i) {
            for (int a = 0; a < n; ++a) basis[i][a] = frame[a][i];
            basis[i][n] = N[i];
        }

        auto decompose = [&](const JVec& rhs) { return solve_linear(basis, rhs); };

        Gamma_ind.assign(n, JMat(n, JVec(n, Jet3::constant(n, 0.0, 1))));
        B.assign(n, JVec(n, Jet3::constant(n, 0.0, 1)));
        for (int b = 0; b < n; ++b)
            for (int c = b; c < n; ++c) {
                JVec rhs(n + 1, Jet3::constant(n, 0.0, 1));
                for (int i = 0; i <= n; ++i) rhs[i] = frame[c][i].derivative(b);
                JVec sol = decompose(rhs);
                for (int e = 0; e < n; ++e) {
                    Gamma_ind[e][b][c] = sol[e];
                    Gamma_ind[e][c][b] = sol[e];
                }
                B[b][c] = sol[n];
                B[c][b] = sol[n];
            }

        AN.assign(n, JVec(n, Jet3::constant(n, 0.0, 1)));
        tau.assign(n, Jet3::constant(n, 0.0, 1));
        for (int b = 0; b < n; ++b) {
            JVec rhs(n + 1, Jet3::constant(n, 0.0, 1));
            for (int i = 0; i <= n; ++i) rhs[i] = N[i].derivative(b);
            JVec sol = decompose(rhs);
            for (int a = 0; a < n; ++a) AN[a][b] = -sol[a];
            tau[b] = sol[n];
        }

        Astar.assign(n, JVec(n, Jet3::constant(n, 0.0, 1)));
        for (int b = 0; b < n; ++b) {
            JVec rhs(n + 1, Jet3::constant(n, 0.0, 1));
            for (int i = 0; i <= n; ++i) rhs[i] = xi[i].derivative(b);
            JVec sol = decompose(rhs);
            for (int a = 0; a < n; ++a) Astar[a][b] = -(sol[a] + tau[b] * xic[a]);
        }

        C.assign(n, JVec(n, Jet3::constant(n, 0.0, 1)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Jet3 s = Jet3::constant(n, 0.0, 1);
                for (int e = 0; e < n; ++e) s = s + AN[e][a] * g[e][b];
                C[a][b] = s;
            }

        Mat candidates(n, Vec(n + 1));
        for (int b = 0; b < n; ++b)
            for (int i = 0; i <= n; ++i)
                candidates[b][i] = frame[b][i].value() - eta[b].value() * xi[i].value();
        screen = screen_frame_from_candidates(sig, candidates, n - 1);

        H = 0.0;
        Hstar = 0.0;
        for (int a = 0; a < n; ++a) {
            H += AN[a][a].value();
            Hstar += Astar[a][a].value();
        }
        H /= n;
        Hstar /= n;
    }
};

inline PointContext build_rigged_point(const SurfaceChart& chart, const RiggingSpec& rig, const Vec& p) {
    return PointContext(chart, rig, p);
}

struct Classification {
    bool totally_geodesic = false;
    bool umbilical = false;
    bool screen_conformal = false;
    double umbilic_factor = 0.0;
    double conformal_factor = 0.0;
    double umbilic_residual = 0.0;
    double conformal_residual = 0.0;
};

inline Classification classify(const PointContext& pt, double tol = 1e-8) {
    Classification c;
    const int n = pt.n;

    double bscale = 0.0, fro_bg = 0.0, fro_gg = 0.0, fro_ba = 0.0, fro_aa = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double Bv = pt.B[a][b].value();
            double gv = pt.g[a][b].value();
            double ANv = pt.AN[a][b].value();
            double Asv = pt.Astar[a][b].value();
            bscale = std::max(bscale, std::fabs(Bv));
            fro_bg += Bv * gv;
            fro_gg += gv * gv;
            fro_ba += ANv * Asv;
            fro_aa += Asv * Asv;
        }

    c.totally_geodesic = bscale < tol;

    c.umbilic_factor = fro_gg > 0 ? fro_bg / fro_gg : 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            c.umbilic_residual = std::max(
                c.umbilic_residual,
                std::fabs(pt.B[a][b].value() - c.umbilic_factor * pt.g[a][b].value()));
    c.umbilical = c.umbilic_residual < tol * std::max(1.0, bscale);

    c.conformal_factor = fro_aa > 0 ? fro_ba / fro_aa : 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            c.conformal_residual = std::max(
                c.conformal_residual,
                std::fabs(pt.AN[a][b].value() - c.conformal_factor * pt.Astar[a][b].value()));
    c.screen_conformal = c.conformal_residual < tol * std::max(1.0, std::fabs(c.conformal_factor));

    return c;
}

}  // namespace nullrig
