#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "errors.hpp"

namespace nullrig {

// Value plus derivatives up to third order in n variables, with symmetric
// entries stored once (upper simplex packing).  Reading hess(i,j) and
// hess(j,i) touches the same double, so symmetry is exact by construction.
//
// `order` says how many derivative levels carry meaning; storage above the
// order is allocated and zero but must not be relied on.  Arithmetic
// truncates to the smaller operand order.
class Jet3 {
public:
    Jet3() = default;

    Jet3(int n, int order) : n_(n), order_(order) {
        assert(n >= 0 && order >= 0 && order <= 3);
        g_.assign(n, 0.0);
        h_.assign(n * (n + 1) / 2, 0.0);
        t_.assign(n * (n + 1) * (n + 2) / 6, 0.0);
    }

    static Jet3 constant(int n, double v, int order = 3) {
        Jet3 j(n, order);
        j.v_ = v;
        return j;
    }

    static Jet3 variable(int n, int index, double v, int order = 3) {
        assert(index >= 0 && index < n);
        Jet3 j(n, order);
        j.v_ = v;
        if (order >= 1) j.g_[index] = 1.0;
        return j;
    }

    int dim() const { return n_; }
    int order() const { return order_; }

    double value() const { return v_; }
    double& value() { return v_; }

    double grad(int i) const { return g_[i]; }
    double& grad(int i) { return g_[i]; }

    double hess(int i, int j) const { return h_[hidx(i, j)]; }
    double& hess(int i, int j) { return h_[hidx(i, j)]; }

    double third(int i, int j, int k) const { return t_[tidx(i, j, k)]; }
    double& third(int i, int j, int k) { return t_[tidx(i, j, k)]; }

    // Jet of the partial derivative along variable a, one order lower.
    Jet3 derivative(int a) const {
        assert(order_ >= 1);
        Jet3 d(n_, order_ - 1);
        d.v_ = grad(a);
        if (order_ >= 2)
            for (int b = 0; b < n_; ++b) d.grad(b) = hess(a, b);
        if (order_ >= 3)
            for (int b = 0; b < n_; ++b)
                for (int c = b; c < n_; ++c) d.hess(b, c) = third(a, b, c);
        return d;
    }

    friend Jet3 operator+(const Jet3& A, const Jet3& B) {
        int ord = common_order(A, B);
        Jet3 r(A.n_, ord);
        r.v_ = A.v_ + B.v_;
        if (ord >= 1)
            for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] = A.g_[i] + B.g_[i];
        if (ord >= 2)
            for (std::size_t i = 0; i < r.h_.size(); ++i) r.h_[i] = A.h_[i] + B.h_[i];
        if (ord >= 3)
            for (std::size_t i = 0; i < r.t_.size(); ++i) r.t_[i] = A.t_[i] + B.t_[i];
        return r;
    }

    friend Jet3 operator-(const Jet3& A, const Jet3& B) {
        int ord = common_order(A, B);
        Jet3 r(A.n_, ord);
        r.v_ = A.v_ - B.v_;
        if (ord >= 1)
            for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] = A.g_[i] - B.g_[i];
        if (ord >= 2)
            for (std::size_t i = 0; i < r.h_.size(); ++i) r.h_[i] = A.h_[i] - B.h_[i];
        if (ord >= 3)
            for (std::size_t i = 0; i < r.t_.size(); ++i) r.t_[i] = A.t_[i] - B.t_[i];
        return r;
    }

    friend Jet3 operator-(const Jet3& A) {
        Jet3 r(A.n_, A.order_);
        r.v_ = -A.v_;
        for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] = -A.g_[i];
        for (std::size_t i = 0; i < r.h_.size(); ++i) r.h_[i] = -A.h_[i];
        for (std::size_t i = 0; i < r.t_.size(); ++i) r.t_[i] = -A.t_[i];
        return r;
    }

    friend Jet3 operator*(const Jet3& A, const Jet3& B) {
        int ord = common_order(A, B);
        const int n = A.n_;
        Jet3 r(n, ord);
        r.v_ = A.v_ * B.v_;
        if (ord >= 1)
            for (int a = 0; a < n; ++a) r.grad(a) = A.grad(a) * B.v_ + A.v_ * B.grad(a);
        if (ord >= 2)
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    r.hess(a, b) = A.hess(a, b) * B.v_ + A.grad(a) * B.grad(b) +
                                   A.grad(b) * B.grad(a) + A.v_ * B.hess(a, b);
        if (ord >= 3)
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    for (int c = b; c < n; ++c)
                        r.third(a, b, c) =
                            A.third(a, b, c) * B.v_ + A.hess(a, b) * B.grad(c) +
                            A.hess(a, c) * B.grad(b) + A.hess(b, c) * B.grad(a) +
                            A.grad(a) * B.hess(b, c) + A.grad(b) * B.hess(a, c) +
                            A.grad(c) * B.hess(a, b) + A.v_ * B.third(a, b, c);
        return r;
    }

    friend Jet3 operator+(const Jet3& A, double s) { return A + constant(A.n_, s, A.order_); }
    friend Jet3 operator+(double s, const Jet3& A) { return A + s; }
    friend Jet3 operator-(const Jet3& A, double s) { return A - constant(A.n_, s, A.order_); }
    friend Jet3 operator-(double s, const Jet3& A) { return constant(A.n_, s, A.order_) - A; }

    friend Jet3 operator*(const Jet3& A, double s) {
        Jet3 r(A);
        r.v_ *= s;
        for (auto& x : r.g_) x *= s;
        for (auto& x : r.h_) x *= s;
        for (auto& x : r.t_) x *= s;
        return r;
    }
    friend Jet3 operator*(double s, const Jet3& A) { return A * s; }

    Jet3 reciprocal() const {
        if (v_ == 0.0) throw DomainError("jet reciprocal at zero value");
        double iv = 1.0 / v_;
        return chain(iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv, *this);
    }

    friend Jet3 operator/(const Jet3& A, const Jet3& B) { return A * B.reciprocal(); }
    friend Jet3 operator/(const Jet3& A, double s) { return A * (1.0 / s); }
    friend Jet3 operator/(double s, const Jet3& B) { return B.reciprocal() * s; }

    // Faa di Bruno for an outer scalar function with derivatives c0..c3 at
    // u.value(), composed with the inner jet u.
    static Jet3 chain(double c0, double c1, double c2, double c3, const Jet3& u) {
        const int n = u.n_;
        const int ord = u.order_;
        Jet3 r(n, ord);
        r.v_ = c0;
        if (ord >= 1)
            for (int a = 0; a < n; ++a) r.grad(a) = c1 * u.grad(a);
        if (ord >= 2)
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    r.hess(a, b) = c1 * u.hess(a, b) + c2 * u.grad(a) * u.grad(b);
        if (ord >= 3)
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    for (int c = b; c < n; ++c)
                        r.third(a, b, c) = c1 * u.third(a, b, c) +
                                           c2 * (u.hess(a, b) * u.grad(c) +
                                                 u.hess(a, c) * u.grad(b) +
                                                 u.hess(b, c) * u.grad(a)) +
                                           c3 * u.grad(a) * u.grad(b) * u.grad(c);
        return r;
    }

private:
    static int common_order(const Jet3& A, const Jet3& B) {
        if (A.n_ != B.n_) throw DimensionMismatch("jet arithmetic on mismatched variable counts");
        return std::min(A.order_, B.order_);
    }

    // packed index of (i,j), i <= j, in the upper triangle
    int hidx(int i, int j) const {
        if (i > j) std::swap(i, j);
        assert(j < n_);
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }

    // packed index of (i,j,k), sorted ascending, in the upper simplex
    int tidx(int i, int j, int k) const {
        if (i > j) std::swap(i, j);
        if (j > k) std::swap(j, k);
        if (i > j) std::swap(i, j);
        assert(k < n_);
        int off = 0;
        for (int m = 0; m < i; ++m) off += (n_ - m) * (n_ - m + 1) / 2;
        int d = n_ - i, jj = j - i, kk = k - i;
        return off + jj * d - jj * (jj - 1) / 2 + (kk - jj);
    }

    int n_ = 0;
    int order_ = 0;
    double v_ = 0.0;
    std::vector<double> g_, h_, t_;
};

inline Jet3 jet_compose_chain(double c0, double c1, double c2, double c3, const Jet3& u) {
    return Jet3::chain(c0, c1, c2, c3, u);
}

inline Jet3 sqrt(const Jet3& u) {
    double v = u.value();
    if (!(v > 0.0)) throw DomainError("jet sqrt of non-positive value");
    double s = std::sqrt(v);
    return Jet3::chain(s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v), u);
}

inline Jet3 pow_int(const Jet3& u, int k) {
    const int n = u.dim();
    if (k == 0) return Jet3::constant(n, 1.0, u.order());
    double v = u.value();
    if (k < 0 && v == 0.0) throw DomainError("jet pow with negative exponent at zero value");

    auto ipow = [](double base, int e) {
        double r = 1.0;
        bool invert = e < 0;
        if (invert) e = -e;
        for (int i = 0; i < e; ++i) r *= base;
        return invert ? 1.0 / r : r;
    };

    // falling factorials k, k(k-1), k(k-1)(k-2); a zero factor kills the term
    // so v^(k-m) is never formed when its coefficient vanishes
    double c[4];
    c[0] = ipow(v, k);
    double fall = 1.0;
    for (int m = 1; m <= 3; ++m) {
        fall *= double(k - (m - 1));
        c[m] = (fall == 0.0) ? 0.0 : fall * ipow(v, k - m);
    }
    return Jet3::chain(c[0], c[1], c[2], c[3], u);
}

inline double pivot_mag(const Jet3& x) { return std::fabs(x.value()); }

}  // namespace nullrig
