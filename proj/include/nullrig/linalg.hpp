#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <vector>

#include "errors.hpp"

namespace nullrig {

template <class S>
using Matrix = std::vector<std::vector<S>>;

using Vec = std::vector<double>;
using Mat = Matrix<double>;

inline double pivot_mag(double x) { return std::fabs(x); }

// Gaussian elimination with partial pivoting.  S may be double or a jet;
// pivot_mag is found by overload so pivoting always compares plain magnitudes.
template <class S>
std::vector<S> solve_linear(Matrix<S> a, std::vector<S> b) {
    const int n = int(a.size());
    if (int(b.size()) != n) throw DimensionMismatch("solve_linear: rhs length != matrix size");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = pivot_mag(a[col][col]);
        for (int r = col + 1; r < n; ++r) {
            double m = pivot_mag(a[r][col]);
            if (m > best) { best = m; piv = r; }
        }
        if (!(best > 1e-300)) throw SingularMatrix("vanishing pivot in linear solve");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            S f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[col][c];
            b[r] = b[r] - f * b[col];
        }
    }
    std::vector<S> x(b);
    for (int r = n - 1; r >= 0; --r) {
        S acc = b[r];
        for (int c = r + 1; c < n; ++c) acc = acc - a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

inline double det(Mat a) {
    const int n = int(a.size());
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) { std::swap(a[piv], a[col]); d = -d; }
        d *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return d;
}

inline Mat inverse(const Mat& a) {
    const int n = int(a.size());
    Mat inv(n, Vec(n, 0.0));
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        Vec col = solve_linear(a, e);
        for (int i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double max_abs(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

inline double max_abs(const Mat& m) {
    double r = 0.0;
    for (const auto& row : m) r = std::max(r, max_abs(row));
    return r;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.  Only used to
// count signs (metric index), so plain double precision is plenty.
inline Vec sym_eigenvalues(Mat a) {
    const int n = int(a.size());
    double scale = std::max(max_abs(a), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(a[p][q]));
        if (off < 1e-14 * scale) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Vec ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace nullrig
