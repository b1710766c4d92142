#ifndef WISHART_QUADRATURE_HPP
#define WISHART_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart::quad {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// recurrence (templated so the extended-precision modules can reuse it).
template <typename Real = double>
std::pair<std::vector<Real>, std::vector<Real>> gauss_legendre(int n) {
    std::vector<Real> x(n), w(n);
    const Real one(1), two(2);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess
        Real t = Real(std::cos(M_PI * (i + 0.75) / (n + 0.5)));
        Real dp(0);
        for (int it = 0; it < 200; ++it) {
            Real p0(1), p1 = t;
            for (int k = 2; k <= n; ++k) {
                const Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / Real(k);
                p0 = p1;
                p1 = p2;
            }
            dp = Real(n) * (t * p1 - p0) / (t * t - one);
            const Real dt = p1 / dp;
            t -= dt;
            using std::abs;
            if (abs(dt) <= abs(t) * std::numeric_limits<Real>::epsilon() * 4) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = two / ((one - t * t) * dp * dp);
    }
    return {x, w};
}

/// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
struct GK15 {
    static constexpr std::array<double, 8> xgk = {
        0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
        0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
    static constexpr std::array<double, 8> wgk = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
    static constexpr std::array<double, 4> wg = {
        0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
};

/// One GK15 panel on [a, b]; returns (kronrod, |kronrod - gauss|).
template <typename F>
std::pair<double, double> gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = GK15::wgk[7] * fc;
    double resg = GK15::wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * GK15::xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        resk += GK15::wgk[j] * fsum;
        if (j % 2 == 1) resg += GK15::wg[j / 2] * fsum;
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

/// Adaptive bisection on GK15 panels to absolute tolerance.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-10, int max_depth = 60) {
    struct Seg { double a, b, tol; int depth; };
    double total = 0.0;
    std::vector<Seg> stack{{a, b, tol, 0}};
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        auto [v, e] = gk15_panel(f, s.a, s.b);
        if (e <= s.tol || s.depth >= max_depth) {
            if (s.depth >= max_depth && e > 64.0 * s.tol)
                throw NonConvergent("integrate_adaptive: panel refinement exhausted");
            total += v;
        } else {
            const double m = 0.5 * (s.a + s.b);
            stack.push_back({s.a, m, s.tol / 2.0, s.depth + 1});
            stack.push_back({m, s.b, s.tol / 2.0, s.depth + 1});
        }
    }
    return total;
}

} // namespace wishart::quad

#endif
