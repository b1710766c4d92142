#ifndef WISHART_AIRY_HPP
#define WISHART_AIRY_HPP

#include <cmath>
#include <complex>
#include <limits>

#include "wishart/errors.hpp"

namespace wishart::kernels {

struct AiryPair {
    double Ai, Ai_prime;
};

struct AiryPairC {
    std::complex<double> Ai, Ai_prime;
};

namespace airy_detail {

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
constexpr long double kAi0 = 0.3550280538878172392600631860041831763980L;
constexpr long double kAip0 = -0.2588194037928067984051835601892039634793L;

/// Maclaurin sums f, g (and derivatives) with Ai = kAi0*f + kAip0*g.
/// Accumulated in long double: the partial sums reach ~exp((2/3)|z|^{3/2})
/// while the result can be O(1) or smaller, so the series is usable up to
/// |z| ~ 8.5 before cancellation exceeds ~1e-11 absolute.
template <typename T>
void maclaurin(T z, T& ai, T& aip) {
    const T z2 = z * z;
    const T z3 = z2 * z;
    T f(1), fp(0);           // f = sum c_k z^{3k},  fp = f'
    T g = z, gp(1);          // g = sum d_k z^{3k+1}, gp = g'
    T cf(1), cg = z;
    for (int k = 1; k < 80; ++k) {
        fp += cf * z2 / T(3 * k - 1);  // c_k * 3k z^{3k-1} via the previous term
        gp += cg * z2 / T(3 * k);
        cf = cf * z3 / T(3 * k * (3 * k - 1));
        cg = cg * z3 / T(3 * k * (3 * k + 1));
        f += cf;
        g += cg;
        using std::abs;
        if (abs(cf) + abs(cg) < 1e-25L * (abs(f) + abs(g))) break;
    }
    ai = T(kAi0) * f + T(kAip0) * g;
    aip = T(kAi0) * fp + T(kAip0) * gp;
}

/// Asymptotic expansion in the decaying sector |arg z| < 2pi/3:
/// Ai(z) ~ exp(-zeta)/(2 sqrt(pi) z^{1/4}) * sum u_k (-1)^k zeta^{-k},
/// zeta = (2/3) z^{3/2}, branch cut of z^{3/2} on the negative real axis.
inline AiryPairC asymptotic_decaying(std::complex<double> z) {
    using C = std::complex<double>;
    const C sz = std::sqrt(z);
    const C zeta = 2.0 / 3.0 * z * sz;
    // u_k and v_k (for Ai') via the standard recurrence
    // u_0 = 1, u_{k} = u_{k-1} (6k-5)(6k-3)(6k-1)/(216 k (2k-1)/( ... ))
    // u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1)),  v_k = u_k (6k+1)/(1-6k)
    double u = 1.0, v = 1.0;
    C su(1.0), sv(1.0);
    C zinv = 1.0 / zeta;
    C zp = zinv;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 40; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        const double mag = u * std::abs(zp);
        if (mag > prev) break;  // divergent tail: stop at the smallest term
        prev = mag;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        su += sgn * u * zp;
        sv += sgn * v * zp;
        zp *= zinv;
    }
    const C pref = std::exp(-zeta) / (2.0 * std::sqrt(M_PI) * std::pow(z, 0.25));
    const C ai = pref * su;
    const C aip = -std::pow(z, 0.25) * std::exp(-zeta) / (2.0 * std::sqrt(M_PI)) * sv;
    return {ai, aip};
}

inline AiryPairC eval_complex(std::complex<double> z) {
    using C = std::complex<double>;
    const double r = std::abs(z);
    if (r <= 8.5) {
        std::complex<long double> zl(z.real(), z.imag());
        std::complex<long double> ai, aip;
        maclaurin(zl, ai, aip);
        return {C(double(ai.real()), double(ai.imag())),
                C(double(aip.real()), double(aip.imag()))};
    }
    const double arg = std::arg(z);
    if (std::abs(arg) <= 2.0 * M_PI / 3.0 && (z.imag() != 0.0 || z.real() > 0.0))
        return asymptotic_decaying(z);
    // rotate into the decaying sector: Ai(z) = -[w Ai(wz) + conj(w) Ai(conj(w) z)],
    // w = exp(2 pi i/3); both rotated arguments have |arg| <= pi/3 here
    const C w = std::polar(1.0, 2.0 * M_PI / 3.0);
    const AiryPairC p1 = asymptotic_decaying(w * z);
    const AiryPairC p2 = asymptotic_decaying(std::conj(w) * z);
    return {-(w * p1.Ai + std::conj(w) * p2.Ai),
            -(w * w * p1.Ai_prime + std::conj(w * w) * p2.Ai_prime)};
}

} // namespace airy_detail

/// Ai and Ai' on the real line (series for |x| <= 9, asymptotics beyond;
/// the oscillatory side goes through the connection formula).
inline AiryPair airy(double x) {
    const auto p = airy_detail::eval_complex(std::complex<double>(x, 0.0));
    return {p.Ai.real(), p.Ai_prime.real()};
}

/// Complex Airy function.  Validated for |z| <= 1e3; the asymptotic branch of
/// z^{3/2} has its cut on the negative real axis, so non-real arguments within
/// 1e-3 of arg = +-pi are refused; real arguments take the real-axis path.
inline AiryPairC airy(std::complex<double> z) {
    if (std::abs(z) > 1e3)
        throw RangeError("airy: |z| > 1e3 is outside the validated range");
    if (z.imag() != 0.0) {
        const double a = std::arg(z);
        if (M_PI - std::abs(a) < 1e-3)
            throw SectorViolation("airy: arg z within 1e-3 of +-pi");
    }
    return airy_detail::eval_complex(z);
}

} // namespace wishart::kernels

#endif
