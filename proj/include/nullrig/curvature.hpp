#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "assoc.hpp"
#include "oracle_fd.hpp"

namespace nullrig {

using Tensor3 = std::vector<Mat>;            // [a][b][c]
using Tensor4 = std::vector<Tensor3>;        // [d][a][b][c]

// riem[d][a][b][c] is the d-component of R(d_a, d_b) d_c
inline Tensor4 riemann_values(const std::vector<JMat>& G, int n) {
    Tensor4 r(n, Tensor3(n, Mat(n, Vec(n, 0.0))));
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double v = G[d][b][c].grad(a) - G[d][a][c].grad(b);
                    for (int e = 0; e < n; ++e)
                        v += G[d][a][e].value() * G[e][b][c].value() -
                             G[d][b][e].value() * G[e][a][c].value();
                    r[d][a][b][c] = v;
                }
    return r;
}

inline Mat ricci_values(const Tensor4& riem, int n) {
    Mat ric(n, Vec(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) ric[a][b] += riem[d][d][a][b];
    return ric;
}

inline double riemann_antisymmetry_residual(const Tensor4& r, int n) {
    double worst = 0.0;
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    worst = std::max(worst, std::fabs(r[d][a][b][c] + r[d][b][a][c]));
    return worst;
}

inline double bianchi_first_residual(const Tensor4& r, int n) {
    double worst = 0.0;
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    worst = std::max(worst,
                                     std::fabs(r[d][a][b][c] + r[d][b][c][a] + r[d][c][a][b]));
    return worst;
}

// curvature of the associated metric by differencing finite-difference
// connection coefficients: no jet arithmetic anywhere on this route
inline Tensor4 riemann_fd(const MetricFn& metric, const Vec& p, const FdConfig& cfg = {}) {
    const int n = int(p.size());
    double scale = 1.0;
    for (double x : p) scale = std::max(scale, std::fabs(x));
    double h = cfg.h_high * scale;

    auto G0 = fd_christoffels(metric, p, cfg);
    std::vector<Tensor3> dG(n, Tensor3(n, Mat(n, Vec(n, 0.0))));
    for (int dir = 0; dir < n; ++dir) {
        auto at = [&](double step) {
            Vec q = p;
            q[dir] += step;
            return fd_christoffels(metric, q, cfg);
        };
        auto gp = at(h), gm = at(-h), gp2 = at(h / 2), gm2 = at(-h / 2);
        for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double d1 = (gp[c][a][b] - gm[c][a][b]) / (2.0 * h);
                    double d2 = (gp2[c][a][b] - gm2[c][a][b]) / h;
                    dG[dir][c][a][b] = cfg.richardson ? (4.0 * d2 - d1) / 3.0 : d2;
                }
    }

    Tensor4 r(n, Tensor3(n, Mat(n, Vec(n, 0.0))));
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double v = dG[a][d][b][c] - dG[b][d][a][c];
                    for (int e = 0; e < n; ++e)
                        v += G0[d][a][e] * G0[e][b][c] - G0[d][b][e] * G0[e][a][c];
                    r[d][a][b][c] = v;
                }
    return r;
}

// Everything curvature-level at one point: both Riemann tensors, the Ricci
// and scalar curvature of the associated metric, plain covariant derivatives
// of the two fundamental forms under the induced connection, and the
// exterior derivative of the rotation one-form.
class CurvatureContext {
public:
    explicit CurvatureContext(AlphaContext a) : ax(std::move(a)), n(ax.pt.n) {
        const PointContext& pt = ax.pt;
        riem_alpha = riemann_values(ax.Gamma_alpha, n);
        riem_ind = riemann_values(pt.Gamma_ind, n);
        ricci_alpha = ricci_values(riem_alpha, n);
        scalar_alpha = 0.0;
        for (int a2 = 0; a2 < n; ++a2)
            for (int b = 0; b < n; ++b) scalar_alpha += ax.g_alpha_inv[a2][b] * ricci_alpha[a2][b];

        gv = pt.values(pt.g);
        Bv = pt.values(pt.B);
        Cv = pt.values(pt.C);
        Asv = pt.values(pt.Astar);
        ANv = pt.values(pt.AN);
        tauv = pt.values(pt.tau);
        etav = pt.values(pt.eta);
        xicv = pt.values(pt.xic);
        tau_xi = pt.tau_on(xicv);

        nablaB = plain_nabla(pt.B);
        nablaCs = plain_nabla(pt.C);
        for (int a2 = 0; a2 < n; ++a2)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double corr = 0.0;
                    for (int e = 0; e < n; ++e) corr += Asv[e][a2] * Cv[b][e];
                    nablaCs[a2][b][c] -= etav[c] * corr;
                }

        dtau.assign(n, Vec(n, 0.0));
        for (int a2 = 0; a2 < n; ++a2)
            for (int b = 0; b < n; ++b)
                dtau[a2][b] = pt.tau[b].grad(a2) - pt.tau[a2].grad(b);
    }

    AlphaContext ax;
    int n;

    Tensor4 riem_alpha;
    Tensor4 riem_ind;
    Mat ricci_alpha;
    double scalar_alpha = 0.0;

    Mat gv, Bv, Cv, Asv, ANv;
    Vec tauv, etav, xicv;
    double tau_xi = 0.0;

    Tensor3 nablaB;   // (nabla_a B)(b, c) under the induced connection
    Tensor3 nablaCs;  // (nabla_a C)(b, Pc), screen-projected second slot
    Mat dtau;

    double gpair(const Vec& X, const Vec& Y) const { return form(gv, X, Y); }
    double bform(const Vec& X, const Vec& Y) const { return form(Bv, X, Y); }
    double cform(const Vec& X, const Vec& Y) const { return form(Cv, X, Y); }
    double ga_pair(const Vec& X, const Vec& Y) const { return form(ax.g_alpha_val, X, Y); }
    double ric_pair(const Vec& X, const Vec& Y) const { return form(ricci_alpha, X, Y); }

private:
    double form(const Mat& m, const Vec& X, const Vec& Y) const {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += m[a][b] * X[a] * Y[b];
        return s;
    }

    Tensor3 plain_nabla(const JMat& T) const {
        const PointContext& pt = ax.pt;
        Tensor3 out(n, Mat(n, Vec(n, 0.0)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    double v = T[b][c].grad(a);
                    for (int e = 0; e < n; ++e)
                        v -= pt.Gamma_ind[e][a][b].value() * T[e][c].value() +
                             pt.Gamma_ind[e][a][c].value() * T[b][e].value();
                    out[a][b][c] = v;
                }
        return out;
    }
};

inline double nabla_b_on(const CurvatureContext& cc, const Vec& X, const Vec& Y, const Vec& Z) {
    double s = 0.0;
    for (int a = 0; a < cc.n; ++a)
        for (int b = 0; b < cc.n; ++b)
            for (int c = 0; c < cc.n; ++c) s += cc.nablaB[a][b][c] * X[a] * Y[b] * Z[c];
    return s;
}

inline double nabla_c_screen_on(const CurvatureContext& cc, const Vec& X, const Vec& Y, const Vec& Z) {
    double s = 0.0;
    for (int a = 0; a < cc.n; ++a)
        for (int b = 0; b < cc.n; ++b)
            for (int c = 0; c < cc.n; ++c) s += cc.nablaCs[a][b][c] * X[a] * Y[b] * Z[c];
    return s;
}

inline double christoffel_oracle_residual(const AlphaContext& ax, const FdConfig& cfg = {}) {
    auto metric = [&](const Vec& q) {
        return g_alpha_values_at(ax.pt.chart(), ax.pt.rigging(), ax.field, q);
    };
    auto gfd = fd_christoffels(metric, ax.pt.p, cfg);
    double worst = 0.0;
    for (int c = 0; c < ax.pt.n; ++c)
        for (int a = 0; a < ax.pt.n; ++a)
            for (int b = 0; b < ax.pt.n; ++b)
                worst = std::max(worst,
                                 std::fabs(gfd[c][a][b] - ax.Gamma_alpha[c][a][b].value()));
    return worst;
}

inline double riemann_oracle_residual(const CurvatureContext& cc, const FdConfig& cfg = {}) {
    const AlphaContext& ax = cc.ax;
    auto metric = [&](const Vec& q) {
        return g_alpha_values_at(ax.pt.chart(), ax.pt.rigging(), ax.field, q);
    };
    Tensor4 rfd = riemann_fd(metric, ax.pt.p, cfg);
    double worst = 0.0;
    for (int d = 0; d < cc.n; ++d)
        for (int a = 0; a < cc.n; ++a)
            for (int b = 0; b < cc.n; ++b)
                for (int c = 0; c < cc.n; ++c)
                    worst = std::max(worst, std::fabs(rfd[d][a][b][c] - cc.riem_alpha[d][a][b][c]));
    return worst;
}

// the five structure equations a flat ambient space forces on the induced
// curvature and the fundamental forms
struct GaussCodazziResiduals {
    double gauss_screen = 0.0;
    double radical_pairing = 0.0;
    double codazzi_screen = 0.0;
    double codazzi_radical = 0.0;
    double rotation = 0.0;
};

inline GaussCodazziResiduals gauss_codazzi_residuals(const CurvatureContext& cc) {
    const int n = cc.n;
    GaussCodazziResiduals out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                double pair_eta = 0.0;
                for (int e = 0; e < n; ++e) pair_eta += cc.etav[e] * cc.riem_ind[e][a][b][c];
                out.radical_pairing = std::max(out.radical_pairing, std::fabs(pair_eta));

                for (int d = 0; d < n; ++d) {
                    double v = cc.Bv[a][c] * cc.Cv[b][d] - cc.Bv[b][c] * cc.Cv[a][d];
                    for (int e = 0; e < n; ++e) v += cc.riem_ind[e][a][b][c] * cc.gv[e][d];
                    out.gauss_screen = std::max(out.gauss_screen, std::fabs(v));
                }

                double cod_s = cc.nablaCs[a][b][c] - cc.nablaCs[b][a][c] +
                               cc.Cv[a][c] * cc.tauv[b] - cc.Cv[b][c] * cc.tauv[a];
                out.codazzi_screen = std::max(out.codazzi_screen, std::fabs(cod_s));

                double cod_r = cc.nablaB[a][b][c] - cc.nablaB[b][a][c] +
                               cc.Bv[b][c] * cc.tauv[a] - cc.Bv[a][c] * cc.tauv[b];
                out.codazzi_radical = std::max(out.codazzi_radical, std::fabs(cod_r));
            }

            double rot = -cc.dtau[a][b];
            for (int e = 0; e < n; ++e)
                rot += cc.Asv[e][a] * cc.Cv[b][e] - cc.Asv[e][b] * cc.Cv[a][e];
            out.rotation = std::max(out.rotation, std::fabs(rot));
        }
    return out;
}

// curvature of the associated metric reconstructed from induced data, as an
// ambient-component max norm so charts of different scales compare fairly
inline double curvature_relation_residual(const CurvatureContext& cc) {
    const int n = cc.n;
    const PointContext& pt = cc.ax.pt;
    const double al = cc.ax.aval;
    const double daxi = cc.ax.dalpha_xi;

    auto phi = [&](int y, int z) {
        return cc.Bv[y][z] / al - cc.Cv[y][z] + cc.tauv[y] * cc.etav[z] +
               cc.etav[y] * cc.etav[z] * daxi / (2.0 * al);
    };
    auto brace = [&](int a, int b, int c) {
        return (cc.nablaB[a][b][c] - cc.nablaB[b][a][c]) / al + cc.nablaCs[b][a][c] -
               cc.nablaCs[a][b][c] - (cc.Bv[b][c] / al - 2.0 * cc.Cv[b][c]) * cc.tauv[a] +
               (cc.Bv[a][c] / al - 2.0 * cc.Cv[a][c]) * cc.tauv[b] +
               (daxi / (2.0 * al * al)) *
                   (cc.etav[b] * (2.0 * cc.Bv[a][c] - al * cc.Cv[a][c]) -
                    cc.etav[a] * (2.0 * cc.Bv[b][c] - al * cc.Cv[b][c]));
    };

    double worst = 0.0;
    Vec diff(n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double scal = cc.dtau[a][b] * cc.etav[c] + brace(a, b, c);
                double phi_bc = phi(b, c);
                double phi_ac = phi(a, c);
                for (int d = 0; d < n; ++d) {
                    double rhs = cc.riem_ind[d][a][b][c] - phi_bc * cc.Asv[d][a] +
                                 phi_ac * cc.Asv[d][b] + scal * cc.xicv[d];
                    diff[d] = cc.riem_alpha[d][a][b][c] - rhs;
                }
                for (int i = 0; i <= n; ++i) {
                    double amb = 0.0;
                    for (int d = 0; d < n; ++d) amb += diff[d] * pt.frame[d][i].value();
                    worst = std::max(worst, std::fabs(amb));
                }
            }
    return worst;
}

struct RicciResiduals {
    double screen = 0.0;
    double radical = 0.0;
    double mixed = 0.0;
};

inline RicciResiduals ricci_relation_residuals(const CurvatureContext& cc) {
    const PointContext& pt = cc.ax.pt;
    const int n = cc.n;
    const double al = cc.ax.aval;
    const double kappa = cc.tau_xi + cc.ax.dalpha_xi / (2.0 * al);

    RicciResiduals out;
    for (const Vec& X : pt.screen.coords)
        for (const Vec& Y : pt.screen.coords) {
            Vec AsX = pt.apply(pt.Astar, X), AsY = pt.apply(pt.Astar, Y);
            Vec AnX = pt.apply(pt.AN, X), AnY = pt.apply(pt.AN, Y);
            double rhs = cc.gpair(AsX, AsY) / al - cc.gpair(AsX, AnY) - cc.gpair(AnX, AsY) +
                         n * cc.bform(X, Y) * (pt.H - pt.Hstar / al) +
                         n * cc.cform(X, Y) * pt.Hstar - (kappa / al) * cc.bform(X, Y);
            out.screen = std::max(out.screen, std::fabs(cc.ric_pair(X, Y) - rhs));
        }

    out.radical = std::fabs(cc.ric_pair(cc.xicv, cc.xicv) + n * kappa * pt.Hstar);

    Vec Anxi = pt.apply(pt.AN, cc.xicv);
    for (const Vec& X : pt.screen.coords) {
        double dtau_xi_x = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dtau_xi_x += cc.dtau[a][b] * cc.xicv[a] * X[b];
        double rhs = dtau_xi_x + n * cc.gpair(Anxi, X) * pt.Hstar;
        out.mixed = std::max(out.mixed, std::fabs(cc.ric_pair(cc.xicv, X) - rhs));
    }
    return out;
}

inline double sectional_alpha(const CurvatureContext& cc, const Vec& X, const Vec& Y) {
    const int n = cc.n;
    double denom = cc.ga_pair(X, X) * cc.ga_pair(Y, Y) - cc.ga_pair(X, Y) * cc.ga_pair(X, Y);
    if (std::fabs(denom) < 1e-12)
        throw DegeneratePlane("plane has degenerate induced area form, |det| = " +
                              std::to_string(std::fabs(denom)));
    Vec rxyx(n, 0.0);
    for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    rxyx[d] += cc.riem_alpha[d][a][b][c] * X[a] * Y[b] * X[c];
    return cc.ga_pair(rxyx, Y) / denom;
}

struct SectionalResiduals {
    double radical = 0.0;
    double screen = 0.0;
    bool screen_evaluated = false;
};

inline SectionalResiduals sectional_relation_residuals(const CurvatureContext& cc) {
    const PointContext& pt = cc.ax.pt;
    const double al = cc.ax.aval;
    const double kappa = cc.tau_xi + cc.ax.dalpha_xi / (2.0 * al);

    SectionalResiduals out;
    for (const Vec& X : pt.screen.coords) {
        double k = sectional_alpha(cc, cc.xicv, X);
        double rhs = kappa * cc.bform(X, X) / (al * cc.gpair(X, X));
        out.radical = std::max(out.radical, std::fabs(k - rhs));
    }

    const auto& sc = pt.screen.coords;
    if (sc.size() >= 2) {
        out.screen_evaluated = true;
        for (std::size_t j = 0; j < sc.size(); ++j)
            for (std::size_t k2 = j + 1; k2 < sc.size(); ++k2) {
                const Vec& X = sc[j];
                const Vec& Y = sc[k2];
                double k = sectional_alpha(cc, X, Y);
                double gxx = cc.gpair(X, X), gyy = cc.gpair(Y, Y);
                double rhs = (cc.bform(X, X) * cc.bform(Y, Y) - cc.bform(X, Y) * cc.bform(X, Y)) /
                                 (al * gxx * gyy) +
                             (2.0 * cc.bform(X, Y) * cc.cform(X, Y) -
                              cc.bform(X, X) * cc.cform(Y, Y) - cc.bform(Y, Y) * cc.cform(X, X)) /
                                 (gxx * gyy);
                out.screen = std::max(out.screen, std::fabs(k - rhs));
            }
    }
    return out;
}

inline double scalar_relation_residual(const CurvatureContext& cc) {
    const PointContext& pt = cc.ax.pt;
    const int n = cc.n;
    const double al = cc.ax.aval;
    const double kappa = cc.tau_xi + cc.ax.dalpha_xi / (2.0 * al);

    double tr_as2 = 0.0, tr_asan = 0.0;
    for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e) {
            tr_as2 += cc.Asv[a][e] * cc.Asv[e][a];
            tr_asan += cc.Asv[a][e] * cc.ANv[e][a];
        }
    double rhs = tr_as2 / al - 2.0 * tr_asan +
                 double(n) * n * (2.0 * pt.H - pt.Hstar / al) * pt.Hstar -
                 (2.0 * n / al) * kappa * pt.Hstar;
    return std::fabs(cc.scalar_alpha - rhs);
}

}  // namespace nullrig
