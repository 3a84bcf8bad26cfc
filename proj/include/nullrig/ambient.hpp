#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "expression.hpp"
#include "jet.hpp"
#include "linalg.hpp"
#include "oracle_fd.hpp"

namespace nullrig {

// flat inner product with q minus signs: eps_i = -1 for i < q, +1 otherwise
struct Signature {
    int dim = 0;  // ambient dimension n+1
    int q = 0;

    double eps(int i) const { return i < q ? -1.0 : 1.0; }
};

inline double inner(const Signature& sig, const Vec& x, const Vec& y) {
    if (int(x.size()) != sig.dim || int(y.size()) != sig.dim)
        throw DimensionMismatch("inner product on vectors of wrong dimension");
    double s = 0.0;
    for (int i = 0; i < sig.dim; ++i) s += sig.eps(i) * x[i] * y[i];
    return s;
}

inline double degeneracy_tol(const Mat& m) {
    double scale = std::max(max_abs(m), 1e-300);
    return 1e-10 * std::pow(scale, double(m.size()));
}

// gbar + alpha * etabar (x) etabar for the covector etabar = gbar(N, .)
inline Mat twisted_metric(const Signature& sig, const Vec& N, double alpha, const Vec& at = {}) {
    if (int(N.size()) != sig.dim) throw DimensionMismatch("rigging field has wrong dimension");
    const int d = sig.dim;
    Vec etabar(d);
    for (int i = 0; i < d; ++i) etabar[i] = sig.eps(i) * N[i];
    Mat g(d, Vec(d, 0.0));
    for (int i = 0; i < d; ++i) {
        g[i][i] = sig.eps(i);
        for (int j = 0; j < d; ++j) g[i][j] += alpha * etabar[i] * etabar[j];
    }
    if (std::fabs(det(g)) < degeneracy_tol(g))
        throw DegenerateTwistedMetric("twisted ambient metric is degenerate at " +
                                      (at.empty() ? std::string("the given rigging") : point_str(at.data(), int(at.size()))));
    return g;
}

// vector field on the ambient space, one expression per component in x0..xn
struct AmbientField {
    std::vector<ExprPtr> comps;

    Vec values(const Vec& x) const {
        Vec v(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) v[i] = comps[i]->value(x);
        return v;
    }

    std::vector<Jet3> jets(const Vec& x, int order) const {
        std::vector<Jet3> v;
        v.reserve(comps.size());
        for (const auto& c : comps) v.push_back(c->jet(x, order));
        return v;
    }
};

// Residual of the relation between the Levi-Civita connections of gbar and
// of the twisted metric.  The left side differentiates the twisted metric by
// finite differences only; the right side assembles the correction terms
// from jets of N and alpha.  Both sides share the same dV term, so the
// residual isolates the geometric content.
inline double twisted_connection_residual(const Signature& sig, const AmbientField& N, const ExprPtr& alpha,
                                          const AmbientField& U, const AmbientField& V, const Vec& x,
                                          const FdConfig& fdcfg = {}) {
    const int d = sig.dim;

    auto Nj = N.jets(x, 1);
    Jet3 aj = alpha->jet(x, 1);
    Vec Uv = U.values(x);
    auto Vj = V.jets(x, 1);

    Vec Nv(d), etabar(d);
    for (int i = 0; i < d; ++i) {
        Nv[i] = Nj[i].value();
        etabar[i] = sig.eps(i) * Nv[i];
    }
    double av = aj.value();

    Mat galpha = twisted_metric(sig, Nv, av, x);
    Mat ginv = inverse(galpha);

    // d(etabar)_ij = d_i etabar_j - d_j etabar_i
    Mat detabar(d, Vec(d, 0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            detabar[i][j] = sig.eps(j) * Nj[j].grad(i) - sig.eps(i) * Nj[i].grad(j);

    // (L_N gbar)_ij = eps_j d_i N^j + eps_i d_j N^i
    Mat lng(d, Vec(d, 0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            lng[i][j] = sig.eps(j) * Nj[j].grad(i) + sig.eps(i) * Nj[i].grad(j);

    Vec Vv(d);
    for (int i = 0; i < d; ++i) Vv[i] = Vj[i].value();

    auto lower_contract = [&](const Vec& w) {
        Vec cov(d, 0.0);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) cov[j] += w[i] * detabar[i][j];
        return matvec(ginv, cov);
    };
    Vec sharpU = lower_contract(Uv);
    Vec sharpV = lower_contract(Vv);

    Vec da(d);
    for (int i = 0; i < d; ++i) da[i] = aj.grad(i);
    Vec dasharp = matvec(ginv, da);

    double etaU = 0.0, etaV = 0.0, daU = 0.0, daV = 0.0, lnguv = 0.0;
    for (int i = 0; i < d; ++i) {
        etaU += etabar[i] * Uv[i];
        etaV += etabar[i] * Vv[i];
        daU += da[i] * Uv[i];
        daV += da[i] * Vv[i];
        for (int j = 0; j < d; ++j) lnguv += Uv[i] * Vv[j] * lng[i][j];
    }

    // shared flat transport term U^i d_i V^k
    Vec flat(d, 0.0);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) flat[k] += Uv[i] * Vj[k].grad(i);

    Vec rhs(d);
    for (int k = 0; k < d; ++k)
        rhs[k] = flat[k] +
                 0.5 * (av * etaU * sharpV[k] + av * etaV * sharpU[k] - etaU * etaV * dasharp[k]) +
                 0.5 * (av * lnguv + daU * etaV + daV * etaU) * Nv[k];

    MetricFn metric_values = [&](const Vec& y) -> Mat {
        Vec Ny = N.values(y);
        return twisted_metric(sig, Ny, alpha->value(y), y);
    };
    auto gamma = fd_christoffels(metric_values, x, fdcfg);

    Vec lhs(d);
    for (int k = 0; k < d; ++k) {
        double s = flat[k];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) s += gamma[k][i][j] * Uv[i] * Vv[j];
        lhs[k] = s;
    }

    double r = 0.0;
    for (int k = 0; k < d; ++k) r = std::max(r, std::fabs(lhs[k] - rhs[k]));
    return r;
}

}  // namespace nullrig
