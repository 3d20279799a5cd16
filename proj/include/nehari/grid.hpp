#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nehari/errors.hpp"

namespace nehari {

// Uniform periodic grid on the cube [-L/2, L/2)^3.  Node coordinates are
// x_i = -L/2 + i*h with h = L/n, so the box center lies on the grid for
// even n.  Storage is row-major in (x, y, z).
struct Grid {
    int n = 0;
    double box_length = 0.0;

    Grid() = default;
    Grid(int n_, double box_length_) : n(n_), box_length(box_length_) {
        if (n < 4) throw error("Grid: n must be >= 4, got " + std::to_string(n));
        if (!(box_length > 0.0))
            throw error("Grid: box_length must be positive, got " + std::to_string(box_length));
    }

    double spacing() const { return box_length / n; }
    std::size_t size() const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    }
    double cell_volume() const {
        const double h = spacing();
        return h * h * h;
    }
    // Coordinate of node i along one axis, measured from the box center.
    double coordinate(int i) const { return -0.5 * box_length + spacing() * i; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n == b.n && a.box_length == b.box_length;
    }
};

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size())
            throw invalid_field_error("ScalarField: values length does not match n^3");
    }

    double& operator()(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
};

struct StatePair {
    ScalarField u;
    ScalarField v;

    StatePair() = default;
    StatePair(ScalarField u_, ScalarField v_) : u(std::move(u_)), v(std::move(v_)) {
        if (!(u.grid == v.grid)) throw grid_mismatch_error("StatePair: u and v live on different grids");
    }
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
    if (!(a.grid == b.grid)) throw grid_mismatch_error(std::string(what) + ": grid mismatch");
}

// Samples f(x, y, z) at the grid nodes (coordinates from the box center).
inline ScalarField sample(const Grid& g, const std::function<double(double, double, double)>& f) {
    ScalarField out(g);
    const int n = g.n;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double x = g.coordinate(i);
        for (int j = 0; j < n; ++j) {
            const double y = g.coordinate(j);
            for (int k = 0; k < n; ++k, ++idx) {
                out.values[idx] = f(x, y, g.coordinate(k));
            }
        }
    }
    return out;
}

// Midpoint rule, h^3 * sum.  On a periodic grid this coincides with the
// trapezoid rule and is spectrally accurate for smooth integrands.
namespace detail {

// Compensated (Kahan) accumulator.  The solver accepts steps down at the
// 1e-14-relative energy scale, which a naive sum over n^3 terms cannot
// resolve.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

inline double integrate(const ScalarField& f) {
    detail::Kahan acc;
    for (double x : f.values) acc.add(x);
    const double result = f.grid.cell_volume() * acc.sum;
    if (!std::isfinite(result))
        throw invalid_field_error("integrate: field contains non-finite entries");
    return result;
}

inline double integrate_product(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f, g, "integrate_product");
    detail::Kahan acc;
    for (std::size_t i = 0; i < f.values.size(); ++i) acc.add(f.values[i] * g.values[i]);
    const double result = f.grid.cell_volume() * acc.sum;
    if (!std::isfinite(result))
        throw invalid_field_error("integrate_product: non-finite result");
    return result;
}

inline double integrate_product(const ScalarField& f, const ScalarField& g, const ScalarField& w) {
    require_same_grid(f, g, "integrate_product");
    require_same_grid(f, w, "integrate_product");
    detail::Kahan acc;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc.add(f.values[i] * g.values[i] * w.values[i]);
    const double result = f.grid.cell_volume() * acc.sum;
    if (!std::isfinite(result))
        throw invalid_field_error("integrate_product: non-finite result");
    return result;
}

// 7-point second-order central Laplacian with periodic wrap.
inline ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid;
    const int n = g.n;
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    ScalarField out(g);
    const double* src = f.values.data();
    double* dst = out.values.data();
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        const int im = (i == 0) ? n - 1 : i - 1;
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1 == n) ? 0 : j + 1;
            const int jm = (j == 0) ? n - 1 : j - 1;
            for (int k = 0; k < n; ++k) {
                const int kp = (k + 1 == n) ? 0 : k + 1;
                const int km = (k == 0) ? n - 1 : k - 1;
                const std::size_t c = g.index(i, j, k);
                dst[c] = (src[g.index(ip, j, k)] + src[g.index(im, j, k)] +
                          src[g.index(i, jp, k)] + src[g.index(i, jm, k)] +
                          src[g.index(i, j, kp)] + src[g.index(i, j, km)] - 6.0 * src[c]) *
                         inv_h2;
            }
        }
    }
    return out;
}

// Gradient energy in summation-by-parts form, -integrate(f * laplacian(f)).
// Exact consistency with the discrete energy gradient; clamped at zero.
inline double grad_sq_integral(const ScalarField& f) {
    const double val = -integrate_product(f, laplacian(f));
    if (val < -1e-12 * (1.0 + std::abs(val)))
        throw invalid_field_error("grad_sq_integral: negative beyond tolerance");
    return std::max(val, 0.0);
}

inline double lp_norm(const ScalarField& f, double r) {
    if (r < 1.0)
        throw invalid_exponent_error("lp_norm: exponent must be >= 1, got " + std::to_string(r));
    detail::Kahan acc;
    for (double x : f.values) acc.add(std::pow(std::abs(x), r));
    const double result = std::pow(f.grid.cell_volume() * acc.sum, 1.0 / r);
    if (!std::isfinite(result)) throw invalid_field_error("lp_norm: non-finite result");
    return result;
}

inline double lp_norm_pow(const ScalarField& f, double r) {
    if (r < 1.0)
        throw invalid_exponent_error("lp_norm_pow: exponent must be >= 1, got " + std::to_string(r));
    detail::Kahan acc;
    for (double x : f.values) acc.add(std::pow(std::abs(x), r));
    const double result = f.grid.cell_volume() * acc.sum;
    if (!std::isfinite(result)) throw invalid_field_error("lp_norm_pow: non-finite result");
    return result;
}

// ||f||_{E_i}^2 = int |grad f|^2 + int V f^2, the weighted Sobolev norm.
inline double weighted_norm_sq(const ScalarField& f, const ScalarField& V) {
    require_same_grid(f, V, "weighted_norm_sq");
    for (double v : V.values) {
        if (v < 0.0)
            throw assumption_violation_error(
                "weighted_norm_sq: potential has a negative entry, violating (V2)");
    }
    detail::Kahan acc;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc.add(V.values[i] * f.values[i] * f.values[i]);
    return grad_sq_integral(f) + f.grid.cell_volume() * acc.sum;
}

// E-metric inner product <a, b>_{E_i} = int (grad a . grad b + V a b).
inline double e_inner_product(const ScalarField& a, const ScalarField& b, const ScalarField& V) {
    return -integrate_product(a, laplacian(b)) + integrate_product(a, b, V);
}

// Elementwise helpers.
inline ScalarField& axpy(ScalarField& y, double a, const ScalarField& x) {
    require_same_grid(y, x, "axpy");
    for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
    return y;
}

inline ScalarField scaled(const ScalarField& f, double c) {
    ScalarField out = f;
    for (double& x : out.values) x *= c;
    return out;
}

inline ScalarField abs_field(const ScalarField& f) {
    ScalarField out = f;
    for (double& x : out.values) x = std::abs(x);
    return out;
}

// Cyclic shift by whole cells along each axis (periodic translation).
inline ScalarField shifted(const ScalarField& f, int di, int dj, int dk) {
    const Grid& g = f.grid;
    const int n = g.n;
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    ScalarField out(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out(i, j, k) = f(wrap(i - di), wrap(j - dj), wrap(k - dk));
    return out;
}

inline double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
}

} // namespace nehari
