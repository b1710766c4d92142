#ifndef WISHART_TRACY_WIDOM_HPP
#define WISHART_TRACY_WIDOM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "wishart/airy.hpp"
#include "wishart/errors.hpp"
#include "wishart/fredholm.hpp"
#include "wishart/quadrature.hpp"

namespace wishart::kernels {

enum class TwMethod { fredholm, painleve };

struct TWTable {
    std::vector<double> s_grid;
    std::vector<double> F2;
    std::string method;
};

namespace tw_detail {

constexpr double kS0 = 8.0;     // right-tail start where q = -Ai holds to ~1e-12
constexpr double kL = 25.0;     // Airy-kernel truncation window

/// State (q, q', I1, I2) with I1 = int_s^{s0} q^2, I2 = int_s^{s0} t q^2.
using State = std::array<double, 4>;

inline State deriv(double s, const State& y) {
    const double q = y[0];
    return {y[1], s * q + 2.0 * q * q * q, -q * q, -s * q * q};
}

/// One Dormand-Prince RK45 step (h < 0 integrates leftward); returns the
/// 5th-order solution and the embedded error estimate, scaled per component.
/// The q, q' components use nearly pure relative control: an absolute error
/// injected while q ~ -Ai(s) is exponentially tiny gets amplified by
/// Ai(0)/Ai(s) on the way left, so only relative accuracy is meaningful there.
inline State dp45_step(double s, const State& y, double h, double& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [&](const State& base, std::initializer_list<std::pair<double, const State*>> terms) {
        State r = base;
        for (auto& [c, k] : terms)
            for (int i = 0; i < 4; ++i) r[i] += h * c * (*k)[i];
        return r;
    };
    const State k1 = deriv(s, y);
    const State k2 = deriv(s + h * 0.2, axpy(y, {{a21, &k1}}));
    const State k3 = deriv(s + h * 0.3, axpy(y, {{a31, &k1}, {a32, &k2}}));
    const State k4 = deriv(s + h * 0.8, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = deriv(s + h * 8.0 / 9.0,
                           axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = deriv(s + h,
                           axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    State y5 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = deriv(s + h, y5);
    err = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double atol = (i < 2) ? 1e-60 : 1e-16;
        const double scale = atol + std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / scale);
    }
    return y5;
}

/// Integrate the Hastings-McLeod system backward from s0, landing exactly on
/// each requested point (descending order), tolerance 1e-10.
inline std::vector<State> integrate_to(const std::vector<double>& stops) {
    const auto a0 = airy(kS0);
    State y = {-a0.Ai, -a0.Ai_prime, 0.0, 0.0};
    double s = kS0;
    double h = -1e-3;
    std::vector<State> out;
    out.reserve(stops.size());
    for (double target : stops) {
        if (target > s)
            throw InvalidParameters("tw: stops must be descending and <= 8");
        while (s > target) {
            double step = std::max(h, target - s);
            double err = 0.0;
            State cand = dp45_step(s, y, step, err);
            if (err <= 1e-10) {
                y = cand;
                s += step;
                if (step == h) h = std::max(h * 1.5, -0.2);
            } else {
                h = step * std::max(0.25, 0.9 * std::pow(1e-10 / err, 0.2));
                if (-h < 1e-12)
                    throw NonConvergent("tw painleve: step size collapsed");
            }
        }
        out.push_back(y);
    }
    return out;
}

/// Tail pieces int_{s0}^inf Ai^2 and int_{s0}^inf t Ai^2 in closed form.
inline std::pair<double, double> tail_moments() {
    const auto p = airy(kS0);
    const double T1 = p.Ai_prime * p.Ai_prime - kS0 * p.Ai * p.Ai;
    const double T2 = (kS0 * p.Ai_prime * p.Ai_prime - kS0 * kS0 * p.Ai * p.Ai
                       - p.Ai * p.Ai_prime) / 3.0;
    return {T1, T2};
}

inline double check_range(double s) {
    if (!(s >= -10.0 && s <= 6.0))
        throw RangeError("tw_cdf: s outside the validated range [-10, 6]");
    return s;
}

} // namespace tw_detail

/// Tracy-Widom GUE distribution on a descending-stop batch (Painleve II route).
inline std::vector<double> tw_cdf_painleve_batch(std::vector<double> s_desc) {
    for (double s : s_desc) tw_detail::check_range(s);
    const auto states = tw_detail::integrate_to(s_desc);
    const auto [T1, T2] = tw_detail::tail_moments();
    std::vector<double> out(s_desc.size());
    for (std::size_t i = 0; i < s_desc.size(); ++i) {
        const double s = s_desc[i];
        const double I = states[i][3] - s * states[i][2] + T2 - s * T1;
        out[i] = std::exp(-I);
    }
    return out;
}

inline double tw_cdf(double s, TwMethod method, int n_quad = 60) {
    tw_detail::check_range(s);
    if (method == TwMethod::painleve)
        return tw_cdf_painleve_batch({s})[0];
    return fredholm_det(KernelOperator::airy(s, s + tw_detail::kL), n_quad);
}

/// Table over [lo, hi] step ds; method "fredholm", "painleve" or "both"
/// (for "both" F2 holds the fredholm column and F2_alt the painleve one).
struct TWTableBoth {
    std::vector<double> s_grid;
    std::vector<double> F2;
    std::vector<double> F2_alt;
};

inline TWTableBoth tw_table(double lo, double hi, double ds, const std::string& method) {
    if (!(ds > 0.0 && hi > lo))
        throw InvalidParameters("tw_table: need lo < hi and ds > 0");
    TWTableBoth t;
    for (double s = lo; s <= hi + 1e-12; s += ds) t.s_grid.push_back(s);
    const bool want_f = (method == "fredholm" || method == "both");
    const bool want_p = (method == "painleve" || method == "both");
    if (!want_f && !want_p)
        throw InvalidParameters("tw_table: unknown method '" + method + "'");
    if (want_f) {
        t.F2.reserve(t.s_grid.size());
        for (double s : t.s_grid) t.F2.push_back(tw_cdf(s, TwMethod::fredholm));
    }
    if (want_p) {
        std::vector<double> desc(t.s_grid.rbegin(), t.s_grid.rend());
        auto vals = tw_cdf_painleve_batch(desc);
        std::reverse(vals.begin(), vals.end());
        if (want_f) t.F2_alt = std::move(vals);
        else t.F2 = std::move(vals);
    }
    return t;
}

/// Mean of the distribution by quadrature of the computed CDF:
/// E = int_0^inf (1 - F2) - int_{-inf}^0 F2, fredholm route.
inline double tw_mean() {
    const auto right = quad::integrate_adaptive(
        [](double s) { return 1.0 - tw_cdf(s, TwMethod::fredholm); }, 0.0, 6.0, 1e-9, 24);
    const auto left = quad::integrate_adaptive(
        [](double s) { return tw_cdf(s, TwMethod::fredholm); }, -10.0, 0.0, 1e-9, 24);
    return right - left;
}

} // namespace wishart::kernels

#endif
