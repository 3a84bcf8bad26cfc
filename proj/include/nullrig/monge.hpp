#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ambient.hpp"
#include "expression.hpp"
#include "rng.hpp"

namespace nullrig {

struct BallExclusion {
    Vec center;
    double r = 0.0;
};

// Graph x^0 = F(u^1..u^n) over a box domain with optional excluded balls.
// The graph is a null hypersurface exactly where the spatial gradient of F
// has eps-square-norm one; sampling only admits such points.
class SurfaceChart {
public:
    SurfaceChart(int n, int q, ExprPtr F, std::vector<BallExclusion> exclusions = {},
                 Vec box_min = {}, Vec box_max = {})
        : n_(n), q_(q), F_(std::move(F)), exclusions_(std::move(exclusions)),
          box_min_(std::move(box_min)), box_max_(std::move(box_max)) {
        if (n_ < 2) throw ConfigError("chart dimension n must be at least 2");
        if (q_ < 1 || q_ > n_) throw ConfigError("signature count q must satisfy 1 <= q <= n");
        if (box_min_.empty()) box_min_.assign(n_, -2.0);
        if (box_max_.empty()) box_max_.assign(n_, 2.0);
        if (int(box_min_.size()) != n_ || int(box_max_.size()) != n_)
            throw ConfigError("sampling box does not match chart dimension");
    }

    int n() const { return n_; }
    int q() const { return q_; }
    Signature sig() const { return Signature{n_ + 1, q_}; }

    // sign of the ambient axis carrying u^a (a is 0-based here)
    double eps_u(int a) const { return sig().eps(a + 1); }

    double F_value(const Vec& u) const { return F_->value(u); }
    Jet3 F_jet(const Vec& u, int order = 3) const { return F_->jet(u, order); }

    bool in_box(const Vec& u) const {
        for (int a = 0; a < n_; ++a)
            if (u[a] < box_min_[a] || u[a] > box_max_[a]) return false;
        return true;
    }

    bool excluded(const Vec& u) const {
        for (const auto& ball : exclusions_) {
            double d2 = 0.0;
            for (int a = 0; a < n_; ++a) {
                double dx = u[a] - ball.center[a];
                d2 += dx * dx;
            }
            if (d2 < ball.r * ball.r) return true;
        }
        return false;
    }

    bool in_domain(const Vec& u) const { return in_box(u) && !excluded(u); }

    const Vec& box_min() const { return box_min_; }
    const Vec& box_max() const { return box_max_; }

private:
    int n_, q_;
    ExprPtr F_;
    std::vector<BallExclusion> exclusions_;
    Vec box_min_, box_max_;
};

inline double null_residual(const SurfaceChart& chart, const Vec& u) {
    Jet3 j = chart.F_jet(u, 1);
    double s = 0.0;
    for (int a = 0; a < chart.n(); ++a) s += chart.eps_u(a) * j.grad(a) * j.grad(a);
    return std::fabs(s - 1.0);
}

// differentiated null condition: sum_a eps^a F'_a F''_{a beta} = 0
inline double gradient_identity_residual(const SurfaceChart& chart, const Vec& u) {
    Jet3 j = chart.F_jet(u, 2);
    double worst = 0.0;
    for (int b = 0; b < chart.n(); ++b) {
        double s = 0.0;
        for (int a = 0; a < chart.n(); ++a) s += chart.eps_u(a) * j.grad(a) * j.hess(a, b);
        worst = std::max(worst, std::fabs(s));
    }
    return worst;
}

// row beta holds the ambient components of the coordinate tangent vector
// along u^beta: (F'_beta, 0, .., 1, .., 0)
inline Mat tangent_frame(const SurfaceChart& chart, const Vec& u) {
    Jet3 j = chart.F_jet(u, 1);
    const int n = chart.n();
    Mat frame(n, Vec(n + 1, 0.0));
    for (int b = 0; b < n; ++b) {
        frame[b][0] = j.grad(b);
        frame[b][b + 1] = 1.0;
    }
    return frame;
}

// the degenerate normal: null, tangent, and orthogonal to every tangent
inline Vec normal(const SurfaceChart& chart, const Vec& u) {
    Jet3 j = chart.F_jet(u, 1);
    const int n = chart.n();
    Vec nv(n + 1, 0.0);
    nv[0] = 1.0;
    for (int a = 0; a < n; ++a) nv[a + 1] = chart.eps_u(a) * j.grad(a);
    return nv;
}

// a vector with ambient components X is tangent iff X^0 = sum_a X^a F'_a
inline double tangency_defect(const SurfaceChart& chart, const Vec& u, const Vec& ambient) {
    Jet3 j = chart.F_jet(u, 1);
    double s = ambient[0];
    for (int a = 0; a < chart.n(); ++a) s -= ambient[a + 1] * j.grad(a);
    return std::fabs(s);
}

inline std::vector<Vec> sample(const SurfaceChart& chart, int count, std::uint64_t seed,
                               double null_tol = 1e-8) {
    SplitMix64 rng(seed);
    std::vector<Vec> points;
    points.reserve(count);
    const long limit = 1000L * count;
    long draws = 0;
    while (int(points.size()) < count) {
        if (++draws > limit)
            throw SamplingExhausted("rejected " + std::to_string(limit) +
                                    " candidate points; the graph has no admissible null locus in the box");
        Vec u(chart.n());
        for (int a = 0; a < chart.n(); ++a)
            u[a] = rng.uniform(chart.box_min()[a], chart.box_max()[a]);
        if (!chart.in_domain(u)) continue;
        try {
            if (null_residual(chart, u) > null_tol) continue;
            chart.F_jet(u, 3);
        } catch (const DomainError&) {
            continue;
        }
        points.push_back(u);
    }
    return points;
}

// ---- stock charts used throughout the tests and shipped configs ----

inline SurfaceChart light_cone_chart(int n = 2, double hole = 0.35) {
    auto vars = chart_vars(n);
    std::string expr = "sqrt(";
    for (int a = 1; a <= n; ++a) {
        if (a > 1) expr += "+";
        expr += "u" + std::to_string(a) + "^2";
    }
    expr += ")";
    return SurfaceChart(n, 1, parse_expression(expr, vars), {{Vec(n, 0.0), hole}});
}

inline SurfaceChart shifted_cone_chart(int n, const Vec& center, double hole = 0.35) {
    ExprPtr sum;
    for (int a = 0; a < n; ++a) {
        ExprPtr term = Expr::pow(Expr::sub(Expr::variable(a), Expr::constant(center[a])), 2);
        sum = sum ? Expr::add(sum, term) : term;
    }
    return SurfaceChart(n, 1, Expr::sqrt(sum), {{center, hole}});
}

inline SurfaceChart hyperplane_chart(int n, int q, const Vec& coeffs) {
    ExprPtr sum;
    for (int a = 0; a < n; ++a) {
        ExprPtr term = Expr::mul(Expr::constant(coeffs[a]), Expr::variable(a));
        sum = sum ? Expr::add(sum, term) : term;
    }
    return SurfaceChart(n, q, sum);
}

}  // namespace nullrig
