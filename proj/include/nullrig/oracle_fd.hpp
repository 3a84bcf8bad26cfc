#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace nullrig {

// Finite differencing deliberately knows nothing about jets: it only ever
// calls a plain double-valued function.  Anything the jet side produces can
// then be checked against this estimate as an independent route.
struct FdConfig {
    double h_grad = 1e-4;   // step scale for first derivatives
    double h_high = 1e-3;   // step scale for second and third derivatives
    bool richardson = true; // combine h and h/2 central estimates
};

class FdOracle {
public:
    using Fn = std::function<double(const Vec&)>;

    explicit FdOracle(Fn f, FdConfig cfg = {}) : f_(std::move(f)), cfg_(cfg) {}

    static double step_for(const Vec& p, double base) {
        double m = 1.0;
        for (double x : p) m = std::max(m, std::fabs(x));
        return base * m;
    }

    double gradient_plain(const Vec& p, int a, double h) const {
        Vec q = p;
        q[a] = p[a] + h;
        double fp = call(q);
        q[a] = p[a] - h;
        double fm = call(q);
        return (fp - fm) / (2.0 * h);
    }

    double gradient(const Vec& p, int a) const {
        double h = step_for(p, cfg_.h_grad);
        double d1 = gradient_plain(p, a, h);
        if (!cfg_.richardson) return d1;
        double d2 = gradient_plain(p, a, h / 2.0);
        return (4.0 * d2 - d1) / 3.0;
    }

    Vec gradient(const Vec& p) const {
        Vec g(p.size());
        for (std::size_t a = 0; a < p.size(); ++a) g[a] = gradient(p, int(a));
        return g;
    }

    double hessian_plain(const Vec& p, int a, int b, double h) const {
        Vec q = p;
        if (a == b) {
            double f0 = call(p);
            q[a] = p[a] + h;
            double fp = call(q);
            q[a] = p[a] - h;
            double fm = call(q);
            return (fp - 2.0 * f0 + fm) / (h * h);
        }
        q[a] = p[a] + h; q[b] = p[b] + h;
        double fpp = call(q);
        q[b] = p[b] - h;
        double fpm = call(q);
        q[a] = p[a] - h; q[b] = p[b] + h;
        double fmp = call(q);
        q[b] = p[b] - h;
        double fmm = call(q);
        return (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }

    double hessian(const Vec& p, int a, int b) const {
        double h = step_for(p, cfg_.h_high);
        double d1 = hessian_plain(p, a, b, h);
        if (!cfg_.richardson) return d1;
        double d2 = hessian_plain(p, a, b, h / 2.0);
        return (4.0 * d2 - d1) / 3.0;
    }

    Mat hessian(const Vec& p) const {
        const int n = int(p.size());
        Mat m(n, Vec(n));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) m[a][b] = m[b][a] = hessian(p, a, b);
        return m;
    }

    // outer central difference of the inner hessian stencil, both at scale h,
    // so the whole composite expands in even powers of h
    double third_plain(const Vec& p, int a, int b, int c, double h) const {
        Vec q = p;
        q[a] = p[a] + h;
        double hp = hessian_plain(q, b, c, h);
        q[a] = p[a] - h;
        double hm = hessian_plain(q, b, c, h);
        return (hp - hm) / (2.0 * h);
    }

    double third(const Vec& p, int a, int b, int c) const {
        double h = step_for(p, cfg_.h_high);
        double d1 = third_plain(p, a, b, c, h);
        if (!cfg_.richardson) return d1;
        double d2 = third_plain(p, a, b, c, h / 2.0);
        return (4.0 * d2 - d1) / 3.0;
    }

private:
    double call(const Vec& q) const {
        try {
            return f_(q);
        } catch (const DomainError& e) {
            throw StencilOutOfDomain(std::string("finite-difference stencil left the domain: ") + e.what());
        }
    }

    Fn f_;
    FdConfig cfg_;
};

using MetricFn = std::function<Mat(const Vec&)>;

// dg[d][a][b] = d/du^d of g_ab, from central differences of metric values
inline std::vector<Mat> fd_metric_derivatives(const MetricFn& metric, const Vec& p, const FdConfig& cfg = {}) {
    const int n = int(p.size());
    double h = FdOracle::step_for(p, cfg.h_grad);

    auto eval = [&](const Vec& q) -> Mat {
        try {
            return metric(q);
        } catch (const DomainError& e) {
            throw StencilOutOfDomain(std::string("finite-difference stencil left the domain: ") + e.what());
        }
    };

    auto central = [&](int d, double hh) -> Mat {
        Vec q = p;
        q[d] = p[d] + hh;
        Mat mp = eval(q);
        q[d] = p[d] - hh;
        Mat mm = eval(q);
        Mat r(n, Vec(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) r[a][b] = (mp[a][b] - mm[a][b]) / (2.0 * hh);
        return r;
    };

    std::vector<Mat> dg(n);
    for (int d = 0; d < n; ++d) {
        Mat d1 = central(d, h);
        if (!cfg.richardson) {
            dg[d] = d1;
            continue;
        }
        Mat d2 = central(d, h / 2.0);
        Mat r(n, Vec(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) r[a][b] = (4.0 * d2[a][b] - d1[a][b]) / 3.0;
        dg[d] = r;
    }
    return dg;
}

// Gamma[c][a][b] of the Levi-Civita connection, all metric derivatives taken
// by finite differences of metric values
inline std::vector<Mat> fd_christoffels(const MetricFn& metric, const Vec& p, const FdConfig& cfg = {}) {
    const int n = int(p.size());
    std::vector<Mat> dg = fd_metric_derivatives(metric, p, cfg);
    Mat ginv = inverse(metric(p));
    std::vector<Mat> gamma(n, Mat(n, Vec(n, 0.0)));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double s = 0.0;
                for (int d = 0; d < n; ++d)
                    s += ginv[c][d] * (dg[a][d][b] + dg[b][d][a] - dg[d][a][b]);
                gamma[c][a][b] = gamma[c][b][a] = 0.5 * s;
            }
    return gamma;
}

}  // namespace nullrig
