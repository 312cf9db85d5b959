#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "quapi/errors.hpp"

namespace quapi {

// Quadrature policy for the bath kernels. omega_max is raised to at least
// 8*omega_l on BathSpec construction (Gaussian tail negligible beyond).
struct QuadraturePolicy {
    double omega_max = 5.0;  // ps^-1
    double abs_tol = 1e-10;
    int max_panels = 400000;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes/weights on [-1,1] (QUADPACK dqk15 constants).
inline constexpr double gk15_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double gk15_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double gk15_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class T>
inline double err_norm(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>)
        return std::abs(v);
    else
        return std::fabs(v);
}

template <class F, class T>
inline void gk15_panel(F&& f, double a, double b, T& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T resk = gk15_wk[7] * fc;
    T resg = gk15_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk15_x[j];
        T fsum = f(c - dx) + f(c + dx);
        resk += gk15_wk[j] * fsum;
        if (j % 2 == 1) resg += gk15_wg[j / 2] * fsum;
    }
    result = resk * h;
    err = err_norm<T>((resk - resg) * h);
    // QUADPACK-style sharpening of the raw |K15-G7| estimate
    if (err > 0.0) {
        const double scale = std::pow(200.0 * err / err_norm<T>(result + T(1e-300)), 1.5);
        if (scale < 1.0) err *= scale;
    }
}

}  // namespace detail

// Adaptive panel quadrature of f over [a,b] to absolute tolerance abs_tol.
// phase_rate bounds the integrand's oscillation rate (radians per unit x);
// the initial subdivision keeps each panel under pi/4 of accumulated phase.
// Throws QuadratureError with the residual estimate when the panel budget
// is exhausted before convergence. T is double or complex<double>.
template <class T, class F>
T integrate(F&& f, double a, double b, double abs_tol, int max_panels,
            double phase_rate = 0.0) {
    if (a == b) return T{};
    struct Panel {
        double a, b;
        T val;
        double err;
    };
    const double total_len = b - a;
    int n0 = 1;
    if (phase_rate > 0.0) {
        double want = std::ceil(total_len * phase_rate / (M_PI / 4.0));
        n0 = static_cast<int>(std::min(want, static_cast<double>(max_panels) / 2.0));
        if (n0 < 1) n0 = 1;
    }
    std::vector<Panel> stack;
    stack.reserve(static_cast<std::size_t>(n0) + 64);
    for (int i = n0 - 1; i >= 0; --i) {
        Panel p;
        p.a = a + total_len * i / n0;
        p.b = a + total_len * (i + 1) / n0;
        detail::gk15_panel(f, p.a, p.b, p.val, p.err);
        stack.push_back(p);
    }
    T sum{};
    int used = n0;
    const double floor_width = 1e-14 * (std::fabs(a) + std::fabs(b) + 1.0);
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double local_tol = abs_tol * (p.b - p.a) / total_len;
        if (p.err <= local_tol || (p.b - p.a) < floor_width) {
            sum += p.val;
            continue;
        }
        if (used + 2 > max_panels) {
            double residual = p.err;
            for (const auto& q : stack) residual += q.err;
            throw QuadratureError(
                "quadrature did not converge within the panel budget", residual);
        }
        const double m = 0.5 * (p.a + p.b);
        Panel left{p.a, m, T{}, 0.0}, right{m, p.b, T{}, 0.0};
        detail::gk15_panel(f, left.a, left.b, left.val, left.err);
        detail::gk15_panel(f, right.a, right.b, right.val, right.err);
        used += 2;
        stack.push_back(right);
        stack.push_back(left);
    }
    return sum;
}

}  // namespace quapi
