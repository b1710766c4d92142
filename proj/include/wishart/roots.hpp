#ifndef WISHART_ROOTS_HPP
#define WISHART_ROOTS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wishart/errors.hpp"

namespace wishart::roots {

using cplx = std::complex<double>;

struct CubicCoeffs {
    cplx c3, c2, c1, c0;  // c3*x^3 + c2*x^2 + c1*x + c0
};

struct QuarticCoeffs {
    double q4, q3, q2, q1, q0;
};

struct RootSet {
    std::vector<cplx> roots;
    std::vector<int> multiplicity;       // cluster size per root (1 = simple)
    double discriminant = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline cplx horner3(cplx c3, cplx c2, cplx c1, cplx c0, cplx x) {
    return ((c3 * x + c2) * x + c1) * x + c0;
}

inline cplx polish_cubic(cplx c3, cplx c2, cplx c1, cplx c0, cplx r) {
    const cplx p = horner3(c3, c2, c1, c0, r);
    const cplx dp = (3.0 * c3 * r + 2.0 * c2) * r + c1;
    const double scale = std::abs(c3) * std::abs(r) * std::abs(r) + std::abs(c2) * std::abs(r) + std::abs(c1);
    if (std::abs(dp) > 1e-14 * scale)
        return r - p / dp;
    return r;  // near-multiple root: Newton would amplify noise
}

/// Roots of a depressed real cubic t^3 + pt + q with the real-branch
/// convention: cube roots of real numbers are taken real.
inline std::array<cplx, 3> depressed_real(double p, double q) {
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        const double re = -(u + v) / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * (u - v);
        return {cplx(u + v, 0.0), cplx(re, im), cplx(re, -im)};
    }
    // three real roots
    const double rho = std::sqrt(-p * p * p / 27.0);
    const double theta = std::acos(std::clamp(-q / (2.0 * rho), -1.0, 1.0)) / 3.0;
    const double m = 2.0 * std::sqrt(-p / 3.0);
    return {cplx(m * std::cos(theta), 0.0),
            cplx(m * std::cos(theta - 2.0 * M_PI / 3.0), 0.0),
            cplx(m * std::cos(theta + 2.0 * M_PI / 3.0), 0.0)};
}

inline std::array<cplx, 3> depressed_complex(cplx p, cplx q) {
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0)
        return {cplx(0), cplx(0), cplx(0)};
    const cplx s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx w = -q / 2.0 + s;
    if (std::abs(-q / 2.0 - s) > std::abs(w)) w = -q / 2.0 - s;
    const cplx u = std::pow(w, 1.0 / 3.0);
    const cplx v = (std::abs(u) > 0.0) ? -p / (3.0 * u) : cplx(0);
    const cplx omega(-0.5, std::sqrt(3.0) / 2.0);
    return {u + v, omega * u + std::conj(omega) * v, std::conj(omega) * u + omega * v};
}

/// Fast unordered cubic roots, one polish step each.  Hot path of the
/// continuation engine, so no allocation.
inline std::array<cplx, 3> cubic_roots(cplx c3, cplx c2, cplx c1, cplx c0) {
    const cplx b2 = c2 / c3, b1 = c1 / c3, b0 = c0 / c3;
    const cplx shift = b2 / 3.0;
    const cplx p = b1 - b2 * b2 / 3.0;
    const cplx q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;

    const bool real_input = (c3.imag() == 0.0 && c2.imag() == 0.0 && c1.imag() == 0.0 && c0.imag() == 0.0);
    std::array<cplx, 3> t = real_input ? depressed_real(p.real(), q.real())
                                       : depressed_complex(p, q);
    for (auto& r : t)
        r = polish_cubic(c3, c2, c1, c0, r - shift);
    // keep exact conjugate pairing for real inputs
    if (real_input) {
        for (int i = 0; i < 3; ++i)
            if (std::abs(t[i].imag()) < 1e-14 * (1.0 + std::abs(t[i].real()))) t[i].imag(0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (t[i].imag() != 0.0 && t[j].imag() != 0.0 &&
                    t[i].imag() * t[j].imag() < 0.0) {
                    const cplx m = (t[i] + std::conj(t[j])) / 2.0;
                    t[i] = m;
                    t[j] = std::conj(m);
                }
    }
    return t;
}

inline void flag_multiplicities(RootSet& rs) {
    const std::size_t n = rs.roots.size();
    rs.multiplicity.assign(n, 1);
    double scale = 0.0;
    for (const auto& r : rs.roots) scale = std::max(scale, std::abs(r));
    const double tol = 1e-8 * (1.0 + scale);
    for (std::size_t i = 0; i < n; ++i) {
        int m = 1;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && std::abs(rs.roots[i] - rs.roots[j]) < tol) ++m;
        rs.multiplicity[i] = m;
    }
}

inline double cubic_discriminant(double a, double b, double c, double d) {
    return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c
         - 4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

inline double quartic_discriminant(const QuarticCoeffs& q) {
    const double a = q.q4, b = q.q3, c = q.q2, d = q.q1, e = q.q0;
    return 256.0 * a * a * a * e * e * e - 192.0 * a * a * b * d * e * e
         - 128.0 * a * a * c * c * e * e + 144.0 * a * a * c * d * d * e
         - 27.0 * a * a * d * d * d * d + 144.0 * a * b * b * c * e * e
         - 6.0 * a * b * b * d * d * e - 80.0 * a * b * c * c * d * e
         + 18.0 * a * b * c * d * d * d + 16.0 * a * c * c * c * c * e
         - 4.0 * a * c * c * c * d * d - 27.0 * b * b * b * b * e * e
         + 18.0 * b * b * b * c * d * e - 4.0 * b * b * b * d * d * d
         - 4.0 * b * b * c * c * c * e + b * b * c * c * d * d;
}

} // namespace detail

inline RootSet solve_cubic(const CubicCoeffs& c) {
    if (std::abs(c.c3) == 0.0)
        throw InvalidParameters("solve_cubic: leading coefficient is zero");
    RootSet rs;
    const auto t = detail::cubic_roots(c.c3, c.c2, c.c1, c.c0);
    rs.roots.assign(t.begin(), t.end());
    if (c.c3.imag() == 0.0 && c.c2.imag() == 0.0 && c.c1.imag() == 0.0 && c.c0.imag() == 0.0)
        rs.discriminant = detail::cubic_discriminant(c.c3.real(), c.c2.real(),
                                                     c.c1.real(), c.c0.real());
    detail::flag_multiplicities(rs);
    return rs;
}

inline RootSet solve_quartic(const QuarticCoeffs& q) {
    if (q.q4 == 0.0)
        throw InvalidParameters("solve_quartic: leading coefficient is zero");
    // depressed y^4 + p y^2 + r y + s, x = y - b/4
    const double b = q.q3 / q.q4, c = q.q2 / q.q4, d = q.q1 / q.q4, e = q.q0 / q.q4;
    const double p = c - 3.0 * b * b / 8.0;
    const double r = d - b * c / 2.0 + b * b * b / 8.0;
    const double s = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b * b * b * b / 256.0;
    const double shift = b / 4.0;

    RootSet rs;
    rs.roots.reserve(4);
    if (std::abs(r) < 1e-14 * (1.0 + std::abs(p) + std::abs(s))) {
        // biquadratic
        const cplx disc = std::sqrt(cplx(p * p / 4.0 - s, 0.0));
        for (const cplx t2 : {-p / 2.0 + disc, -p / 2.0 - disc}) {
            const cplx y = std::sqrt(t2);
            rs.roots.push_back(y - shift);
            rs.roots.push_back(-y - shift);
        }
    } else {
        // Ferrari: resolvent cubic m^3 + p m^2 + (p^2/4 - s) m - r^2/8 = 0 has a
        // positive real root; split into two quadratics y^2 +- sqrt(2m) y + ...
        const auto res = detail::cubic_roots(cplx(1), cplx(p), cplx(p * p / 4.0 - s), cplx(-r * r / 8.0));
        double m = 0.0;
        for (const auto& rr : res)
            if (std::abs(rr.imag()) < 1e-9 * (1.0 + std::abs(rr.real())))
                m = std::max(m, rr.real());
        const double alpha = std::sqrt(std::max(2.0 * m, 0.0));
        const double beta0 = p / 2.0 + m;
        const double gamma = (alpha > 0.0) ? r / (2.0 * alpha) : 0.0;
        // y^2 + alpha y + (beta0 - gamma), y^2 - alpha y + (beta0 + gamma)
        for (const double sgn : {1.0, -1.0}) {
            const double B = sgn * alpha;
            const double C = beta0 - sgn * gamma;
            const cplx disc = std::sqrt(cplx(B * B - 4.0 * C, 0.0));
            rs.roots.push_back((-B + disc) / 2.0 - shift);
            rs.roots.push_back((-B - disc) / 2.0 - shift);
        }
    }
    // one polish pass against the original quartic
    for (auto& rt : rs.roots) {
        const cplx x = rt;
        const cplx f = (((q.q4 * x + q.q3) * x + q.q2) * x + q.q1) * x + q.q0;
        const cplx df = ((4.0 * q.q4 * x + 3.0 * q.q3) * x + 2.0 * q.q2) * x + q.q1;
        const double scale = std::abs(q.q4) * std::pow(std::abs(x), 3) + std::abs(q.q3) * std::norm(x)
                           + std::abs(q.q2) * std::abs(x) + std::abs(q.q1);
        if (std::abs(df) > 1e-14 * scale) rt = x - f / df;
    }
    for (auto& rt : rs.roots)
        if (std::abs(rt.imag()) < 1e-13 * (1.0 + std::abs(rt.real()))) rt.imag(0.0);
    // symmetrize conjugate pairs
    for (std::size_t i = 0; i < rs.roots.size(); ++i)
        for (std::size_t j = i + 1; j < rs.roots.size(); ++j)
            if (rs.roots[i].imag() > 0.0 && rs.roots[j].imag() < 0.0 &&
                std::abs(rs.roots[i] - std::conj(rs.roots[j])) <
                    1e-10 * (1.0 + std::abs(rs.roots[i]))) {
                const cplx mmid = (rs.roots[i] + std::conj(rs.roots[j])) / 2.0;
                rs.roots[i] = mmid;
                rs.roots[j] = std::conj(mmid);
            }
    rs.discriminant = detail::quartic_discriminant(q);
    detail::flag_multiplicities(rs);
    return rs;
}

/// Roots as eigenvalues of the companion matrix (independent oracle; tests and
/// cross-checks only).  Coefficients ascending: coeffs[k] multiplies x^k.
inline RootSet companion_roots(const std::vector<cplx>& coeffs) {
    if (coeffs.size() < 2)
        throw InvalidParameters("companion_roots: degree must be >= 1");
    const std::size_t n = coeffs.size() - 1;
    const cplx lead = coeffs[n];
    if (std::abs(lead) == 0.0)
        throw InvalidParameters("companion_roots: leading coefficient is zero");
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) C(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < n; ++i) C(i, n - 1) = -coeffs[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("companion_roots: eigensolver failed");
    RootSet rs;
    rs.roots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx r = es.eigenvalues()(static_cast<Eigen::Index>(i));
        // one Newton step against the polynomial
        cplx f = 0.0, df = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            df = df * r + f;
            f = f * r + coeffs[k];
        }
        double scale = 0.0;
        for (const auto& cc : coeffs) scale = std::max(scale, std::abs(cc));
        if (std::abs(df) > 1e-14 * scale) r = r - f / df;
        rs.roots.push_back(r);
    }
    detail::flag_multiplicities(rs);
    return rs;
}

} // namespace wishart::roots

#endif
