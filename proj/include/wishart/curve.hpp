#ifndef WISHART_CURVE_HPP
#define WISHART_CURVE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "wishart/errors.hpp"
#include "wishart/params.hpp"
#include "wishart/roots.hpp"

namespace wishart::curve {

using cplx = std::complex<double>;

/// The three solutions of z*a*xi^3 + (A2 z + B2) xi^2 + (z + B1) xi + 1 = 0 at
/// a point z, labeled by continuation from the real anchor where they match
/// the z -> infinity expansions xi1 ~ -1/z, xi2 ~ -1 + c(1-beta)/z,
/// xi3 ~ -1/a + c*beta/z.
struct BranchTriple {
    cplx z;
    cplx xi1, xi2, xi3;
};

enum class CutClass { one_cut, two_cut, critical };

inline const char* to_string(CutClass c) {
    switch (c) {
        case CutClass::one_cut: return "one-cut";
        case CutClass::two_cut: return "two-cut";
        default: return "critical";
    }
}

/// Branch points: quartic roots gamma_k and their images lambda_k under the
/// inverse Stieltjes map.  In the one-cut regime gamma1 < gamma2 < 0 are real,
/// gamma4 = conj(gamma3), and Im(lambda3) > 0 fixes the labeling.
struct SupportInfo {
    std::array<cplx, 4> gamma;
    std::array<cplx, 4> lambda;
    double delta = 0.0;
    CutClass cuts = CutClass::one_cut;

    double lambda1() const { return lambda[0].real(); }
    double lambda2() const { return lambda[1].real(); }
    cplx lambda3() const { return lambda[2]; }
};

/// z(m) = -1/m + c(1-beta)/(1+m) + c a beta/(1+a m)   (inverse of the
/// Stieltjes transform of underline-F restricted to its graph)
inline cplx z_of_m(const EnsembleParams& p, cplx m) {
    return -1.0 / m + p.c * (1.0 - p.beta) / (1.0 + m) + p.c * p.a * p.beta / (1.0 + p.a * m);
}

inline double z_prime_of_m(const EnsembleParams& p, double m) {
    const double d1 = 1.0 + m, d2 = 1.0 + p.a * m;
    return 1.0 / (m * m) - p.c * (1.0 - p.beta) / (d1 * d1)
         - p.c * p.a * p.a * p.beta / (d2 * d2);
}

/// Coefficients (descending) of the quartic whose roots are the critical
/// points of z(m).
inline roots::QuarticCoeffs endpoint_quartic(const EnsembleParams& p) {
    const double a = p.a, c = p.c, b = p.beta;
    return {a * a * (1.0 - c),
            2.0 * (a * a * (1.0 - c * b) + a * (1.0 - c * (1.0 - b))),
            1.0 - c * (1.0 - b) + a * a * (1.0 - c * b) + 4.0 * a,
            2.0 * (1.0 + a),
            1.0};
}

/// Coefficients (descending, z^4..z^0) of D3(z) = (1-a)^2 prod (z - lambda_k),
/// the discriminant of the curve as a cubic in xi, up to the (az)^4 factor.
inline std::array<double, 5> d3_coeffs(const EnsembleParams& p) {
    const double a = p.a, A2 = p.A2(), B1 = p.B1(), B2 = p.B2();
    return {
        (1.0 - a) * (1.0 - a),
        2.0 * A2 * A2 * B1 + 2.0 * A2 * B2 - 4.0 * A2 * A2 * A2 - 12.0 * a * B1 + 18.0 * a * A2,
        B2 * B2 + A2 * A2 * B1 * B1 + 4.0 * A2 * B1 * B2 - 12.0 * A2 * A2 * B2
            - 12.0 * a * B1 * B1 + 18.0 * a * B2 + 18.0 * a * A2 * B1 - 27.0 * a * a,
        2.0 * B1 * B2 * B2 + 2.0 * A2 * B2 * B1 * B1 - 12.0 * A2 * B2 * B2
            - 4.0 * B1 * B1 * B1 * a + 18.0 * a * B1 * B2,
        B1 * B1 * B2 * B2 - 4.0 * B2 * B2 * B2,
    };
}

inline double d3_eval(const std::array<double, 5>& c, double z) {
    return (((c[0] * z + c[1]) * z + c[2]) * z + c[3]) * z + c[4];
}

/// The -q of the depressed monic cubic in xi at real z (r(z) of the density
/// formula), as a polynomial in 1/z.
inline double r_of_z(const EnsembleParams& p, double z) {
    const double a = p.a, A2 = p.A2(), B1 = p.B1(), B2 = p.B2();
    const double a2 = a * a, a3 = a2 * a;
    const double iz = 1.0 / z;
    const double c0 = -2.0 * B2 * B2 * B2 / a3;
    const double c1 = 9.0 * B1 * B2 / a2 - 6.0 * A2 * B2 * B2 / a3;
    const double c2 = 9.0 * B2 / a2 + 9.0 * B1 * A2 / a2 - 27.0 / a - 6.0 * A2 * A2 * B2 / a3;
    const double c3 = 9.0 * A2 / a2 - 2.0 * A2 * A2 * A2 / a3;
    return (((c0 * iz + c1) * iz + c2) * iz + c3) / 27.0;
}

inline SupportInfo classify_support(const EnsembleParams& p) {
    p.validate();
    const auto q = endpoint_quartic(p);
    const auto rs = roots::solve_quartic(q);

    SupportInfo info;
    info.delta = rs.discriminant;

    // The phase boundary is a multiple root of the quartic, so root clustering
    // is the detector.  The raw sign of Delta is noise once |Delta| drops
    // below ~1e-13 * scale^4 in double (the regular beta -> 0/1 reductions
    // live there, with Delta ~ (1-beta) but roots separated by ~sqrt(1-beta)),
    // so the one/two-cut decision comes from the real/complex root split,
    // which stays well-conditioned.  5e-8 relative clustering sits just above
    // the sqrt(eps) resolution a polished quartic solve can attain.
    const double coef_scale = std::max({std::abs(q.q4), std::abs(q.q3), std::abs(q.q2),
                                        std::abs(q.q1), std::abs(q.q0)});
    bool multiple = std::abs(info.delta) < 1e-24 * std::pow(coef_scale, 4);
    double rscale = 0.0;
    for (const auto& r : rs.roots) rscale = std::max(rscale, std::abs(r));
    for (std::size_t i = 0; i < rs.roots.size(); ++i)
        for (std::size_t j = i + 1; j < rs.roots.size(); ++j)
            if (std::abs(rs.roots[i] - rs.roots[j]) < 5e-8 * (1.0 + rscale)) multiple = true;

    std::vector<cplx> re, im;
    for (const auto& r : rs.roots)
        (std::abs(r.imag()) < 1e-9 * (1.0 + std::abs(r.real())) ? re : im).push_back(r);
    if (multiple)
        info.cuts = CutClass::critical;
    else if (re.size() == 2 && im.size() == 2)
        info.cuts = CutClass::one_cut;
    else if (re.size() == 4 || re.empty())
        info.cuts = CutClass::two_cut;
    else
        info.cuts = CutClass::critical;  // split ambiguous at working precision
    if (re.size() == 2 && im.size() == 2) {
        std::sort(re.begin(), re.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
        info.gamma[0] = re[0];
        info.gamma[1] = re[1];
        // choose gamma3 so that Im(lambda3) > 0
        cplx g3 = (im[0].imag() > 0.0) ? im[0] : im[1];
        if (z_of_m(p, g3).imag() < 0.0) g3 = std::conj(g3);
        info.gamma[2] = g3;
        info.gamma[3] = std::conj(g3);
        for (int k = 0; k < 4; ++k) info.lambda[k] = z_of_m(p, info.gamma[k]);
        info.lambda[0] = cplx(info.lambda[0].real(), 0.0);
        info.lambda[1] = cplx(info.lambda[1].real(), 0.0);
        if (info.lambda[0].real() > info.lambda[1].real()) {
            std::swap(info.lambda[0], info.lambda[1]);
            std::swap(info.gamma[0], info.gamma[1]);
        }
    } else {
        std::vector<cplx> all = rs.roots;
        std::sort(all.begin(), all.end(), [](cplx x, cplx y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        });
        std::copy(all.begin(), all.end(), info.gamma.begin());
        for (int k = 0; k < 4; ++k) info.lambda[k] = z_of_m(p, info.gamma[k]);
    }
    return info;
}

/// Spectral curve with a cached anchor labeling; all methods are const and
/// safe to call concurrently.
class SpectralCurve {
  public:
    explicit SpectralCurve(const EnsembleParams& p) : p_(p), info_(classify_support(p)) {
        if (info_.cuts == CutClass::critical)
            throw CriticalParameters("SpectralCurve: quartic has a multiple root (phase boundary)");
        double right = 0.0, big = 0.0;
        for (const auto& l : info_.lambda) {
            right = std::max(right, l.real());
            big = std::max(big, std::abs(l));
        }
        anchor_ = right + 10.0 * (1.0 + big);
        anchor_trip_ = label_at_anchor();
        scale_ = 1.0 + big;
    }

    const EnsembleParams& params() const { return p_; }
    const SupportInfo& support() const { return info_; }
    double anchor() const { return anchor_; }

    /// Unordered roots of the curve at z.
    std::array<cplx, 3> roots_at(cplx z) const {
        return roots::detail::cubic_roots(z * p_.a, p_.A2() * z + p_.B2(), z + p_.B1(), 1.0);
    }

    /// Residual of the curve equation at (z, xi), for invariant checks.
    cplx residual(cplx z, cplx xi) const {
        return ((z * p_.a * xi + (p_.A2() * z + p_.B2())) * xi + (z + p_.B1())) * xi + 1.0;
    }

    /// Advance a labeled triple from z0 to z1 along the straight segment,
    /// subdividing until consecutive root sets pair uniquely.
    std::array<cplx, 3> walk(cplx z0, std::array<cplx, 3> trip, cplx z1) const {
        if (z0 == z1) return trip;
        const double len = std::abs(z1 - z0);
        double t = 0.0;
        double step = std::min(0.125, 1.0 / (1.0 + len));
        const double min_step = 1e-13;
        std::array<cplx, 3> matched;
        while (t < 1.0) {
            double h = std::min(step, 1.0 - t);
            for (;;) {
                const cplx zt = z0 + (z1 - z0) * (t + h);
                if (pair_unique(roots_at(zt), trip, matched)) break;
                h *= 0.5;
                if (h < min_step)
                    throw BranchCollision("branch continuation stalled near z = (" +
                                          std::to_string((z0 + (z1 - z0) * t).real()) + ", " +
                                          std::to_string((z0 + (z1 - z0) * t).imag()) +
                                          "): two roots within pairing distance");
            }
            trip = matched;
            t += h;
            step = std::min(2.0 * h, 0.125);
        }
        return trip;
    }

    /// Deterministic labeling path for Im z >= 0: ascend at the anchor, cross
    /// ABOVE lambda3, descend vertically onto z.  Descending from above makes
    /// the effective xi2/xi3 cut the vertical through lambda3 (crossing the
    /// real axis at x* = Re lambda3), and real targets receive their boundary
    /// values from the upper half plane.
    std::array<cplx, 4> canonical_path(cplx z) const {
        const double H = std::max(2.0 * std::abs(info_.lambda[2].imag()), z.imag());
        return {cplx(anchor_, 0.0), cplx(anchor_, H), cplx(z.real(), H), z};
    }

    /// Labeled branches at z; Im z < 0 by conjugation symmetry.
    BranchTriple branch_values(cplx z) const {
        if (std::abs(z) < 1e-12 * scale_)
            throw BranchCollision("branch_values: z = 0 is a pole of one branch");
        for (const auto& l : info_.lambda)
            if (std::abs(z - l) < 1e-10 * scale_)
                throw BranchCollision("branch_values: z coincides with a branch point");
        if (z.imag() < 0.0) {
            BranchTriple up = branch_values(std::conj(z));
            return {z, std::conj(up.xi1), std::conj(up.xi2), std::conj(up.xi3)};
        }
        const auto path = canonical_path(z);
        std::array<cplx, 3> trip = anchor_trip_;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            trip = walk(path[i], trip, path[i + 1]);
        return {z, trip[0], trip[1], trip[2]};
    }

    /// Density of underline-F on [lambda1, lambda2] (integrates to c), via the
    /// Cardano form with real cube roots; 0 outside the support.
    double density(double x) const {
        require_one_cut();
        const double l1 = info_.lambda1(), l2 = info_.lambda2();
        if (!(x > l1 && x < l2)) return 0.0;
        if (x == 0.0) throw InvalidParameters("density: z = 0");
        const double r = r_of_z(p_, x);
        const double az = p_.a * x;
        const double az4 = az * az * az * az;
        double s2 = -d3_eval(d3_, x) / (27.0 * az4);
        if (s2 < 0.0) {
            if (s2 > -1e-13 * (r * r + std::abs(s2)))
                s2 = 0.0;   // rounding at the endpoints must not go complex
            else
                return 0.0;
        }
        const double s = std::sqrt(s2);
        const double u = std::cbrt((r + s) / 2.0);
        const double v = std::cbrt((r - s) / 2.0);
        return std::sqrt(3.0) / (2.0 * M_PI) * std::abs(u - v);
    }

    /// Density of the eigenvalue law F itself (rho / c).
    double density_F(double x) const { return density(x) / p_.c; }

    /// Square-root edge coefficients rho_k: rho(z) ~ (rho_k/pi)|z-lambda_k|^{1/2},
    /// by two-level Richardson extrapolation in powers of h^{1/2} over the
    /// offsets h, h/2, h/4 (and h/8 for the divergence check).
    std::pair<double, double> edge_constants() const {
        require_one_cut();
        const double l1 = info_.lambda1(), l2 = info_.lambda2();
        const double h0 = 1e-4 * (l2 - l1);
        auto extrapolate = [&](double lk, double sgn) {
            auto f = [&](double h) { return M_PI * density(lk + sgn * h) / std::sqrt(h); };
            std::array<double, 4> fs;
            for (int k = 0; k < 4; ++k) fs[k] = f(h0 / (1 << k));
            const double s2 = std::sqrt(2.0);
            std::array<double, 3> r1;
            for (int k = 0; k < 3; ++k) r1[k] = (s2 * fs[k + 1] - fs[k]) / (s2 - 1.0);
            const double ra = 2.0 * r1[1] - r1[0];
            const double rb = 2.0 * r1[2] - r1[1];
            if (std::abs(rb - ra) > 1e-4 * std::abs(rb))
                throw ExtrapolationDiverged("edge_constants: successive extrapolants differ by "
                                            "> 1e-4 relative (parameters too close to critical)");
            return rb;
        };
        return {extrapolate(l1, +1.0), extrapolate(l2, -1.0)};
    }

    /// Stieltjes transform of the eigenvalue law F, off the support.
    cplx stieltjes_mF(cplx z) const {
        const BranchTriple t = branch_values(z);
        return (t.xi1 + (1.0 - p_.c) / z) / p_.c;
    }

    /// Closest-point matching with collision detection: every old root must
    /// have a unique nearest successor beating its runner-up by a factor of 3,
    /// and the assignment must be a bijection.  The margin is per root, so a
    /// fast-moving branch (e.g. the pole branch near z = 0) does not mask the
    /// separation of the others.
    static bool pair_unique(const std::array<cplx, 3>& cur, const std::array<cplx, 3>& prev,
                            std::array<cplx, 3>& out) {
        std::array<int, 3> pick{-1, -1, -1};
        for (int i = 0; i < 3; ++i) {
            double best = std::numeric_limits<double>::infinity();
            double second = best;
            for (int j = 0; j < 3; ++j) {
                const double d = std::abs(cur[j] - prev[i]);
                if (d < best) {
                    second = best;
                    best = d;
                    pick[i] = j;
                } else if (d < second) {
                    second = d;
                }
            }
            if (!(second >= 3.0 * best)) return false;
        }
        if (pick[0] == pick[1] || pick[0] == pick[2] || pick[1] == pick[2]) return false;
        for (int i = 0; i < 3; ++i) out[i] = cur[pick[i]];
        return true;
    }

  private:
    void require_one_cut() const {
        if (info_.cuts != CutClass::one_cut)
            throw OneCutRequired("operation requires the one-cut regime (Delta < 0)");
    }

    std::array<cplx, 3> label_at_anchor() const {
        const auto rts = roots_at(anchor_);
        const std::array<cplx, 3> pred = {
            -1.0 / anchor_,
            -1.0 + p_.c * (1.0 - p_.beta) / anchor_,
            -1.0 / p_.a + p_.c * p_.beta / anchor_,
        };
        std::array<cplx, 3> out;
        std::array<bool, 3> used{false, false, false};
        for (int i = 0; i < 3; ++i) {
            int best = -1;
            double bd = 0.0;
            for (int j = 0; j < 3; ++j) {
                if (used[j]) continue;
                const double d = std::abs(rts[j] - pred[i]);
                if (best < 0 || d < bd) { best = j; bd = d; }
            }
            used[best] = true;
            out[i] = rts[best];
        }
        return out;
    }

    EnsembleParams p_;
    SupportInfo info_;
    double anchor_ = 0.0;
    double scale_ = 1.0;
    std::array<cplx, 3> anchor_trip_;
    std::array<double, 5> d3_ = d3_coeffs(p_);
};

inline BranchTriple branch_values(const EnsembleParams& p, cplx z) {
    return SpectralCurve(p).branch_values(z);
}

inline double density(const EnsembleParams& p, double z) {
    return SpectralCurve(p).density(z);
}

inline std::pair<double, double> edge_constants(const EnsembleParams& p) {
    return SpectralCurve(p).edge_constants();
}

inline cplx stieltjes_mF(const EnsembleParams& p, cplx z) {
    return SpectralCurve(p).stieltjes_mF(z);
}

/// Support estimate from the sign of z'(m) alone (no quartic solve): scans
/// real m, maps the intervals where z' > 0 (and -1/m avoids the covariance
/// spectrum) through z(m), and returns the complement in the positive axis.
/// Completely independent of classify_support.
inline std::vector<std::pair<double, double>> support_scan_oracle(const EnsembleParams& p,
                                                                  int resolution) {
    p.validate();
    if (resolution < 1000)
        throw InvalidParameters("support_scan_oracle: resolution must be >= 1000");

    std::vector<double> ms(resolution);
    for (int i = 0; i < resolution; ++i) {
        const double u = -M_PI / 2.0 + M_PI * (i + 0.5) / resolution;
        ms[i] = std::tan(u);
    }
    const std::array<double, 3> poles = {0.0, -1.0, -1.0 / p.a};

    auto good = [&](double m) {
        for (double s : poles)
            if (std::abs(m - s) < 1e-12 * (1.0 + std::abs(s))) return false;
        return z_prime_of_m(p, m) > 0.0;
    };

    // maximal runs of good points, split at the poles of z(m)
    std::vector<std::pair<int, int>> runs;
    int start = -1;
    auto pole_between = [&](double lo, double hi) {
        for (double s : poles)
            if (lo < s && s < hi) return true;
        return false;
    };
    for (int i = 0; i < resolution; ++i) {
        const bool g = good(ms[i]);
        const bool brk = (i > 0) && pole_between(ms[i - 1], ms[i]);
        if (g && start >= 0 && brk) {
            runs.emplace_back(start, i - 1);
            start = i;
        } else if (g && start < 0) {
            start = i;
        } else if (!g && start >= 0) {
            runs.emplace_back(start, i - 1);
            start = -1;
        }
    }
    if (start >= 0) runs.emplace_back(start, resolution - 1);

    // refine run boundaries where z' changes sign (these are the support edges)
    auto refine = [&](double m_in, double m_out) {
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (m_in + m_out);
            if (z_prime_of_m(p, mid) > 0.0) m_in = mid; else m_out = mid;
        }
        return 0.5 * (m_in + m_out);
    };

    std::vector<std::pair<double, double>> outside;
    for (auto [i0, i1] : runs) {
        double m_lo = ms[i0], m_hi = ms[i1];
        if (i0 > 0 && !pole_between(ms[i0 - 1], ms[i0]) && !good(ms[i0 - 1]))
            m_lo = refine(ms[i0], ms[i0 - 1]);
        if (i1 + 1 < resolution && !pole_between(ms[i1], ms[i1 + 1]) && !good(ms[i1 + 1]))
            m_hi = refine(ms[i1], ms[i1 + 1]);
        const double z_lo = z_of_m(p, m_lo).real();
        const double z_hi = z_of_m(p, m_hi).real();
        outside.emplace_back(std::min(z_lo, z_hi), std::max(z_lo, z_hi));
    }
    std::sort(outside.begin(), outside.end());

    // merge and take the complement inside (0, +inf); the m-grid tails only
    // reach z ~ +-pi/(2*resolution) around 0, so gaps narrower than a few
    // such units are grid artifacts, not support
    const double tail = 4.0 * M_PI / (2.0 * resolution);
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : outside) {
        if (!merged.empty() && iv.first <= merged.back().second + 1e-300)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    std::vector<std::pair<double, double>> support;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double lo = merged[i].second, hi = merged[i + 1].first;
        if (hi - lo > tail && hi > 0.0)
            support.emplace_back(std::max(lo, 0.0), hi);
    }
    return support;
}

/// Closed-form Marchenko-Pastur density with covariance s*I and ratio c, the
/// beta -> 0/1 reduction oracle.  Returns the density of the eigenvalue law F
/// (integrates to 1); support is [s(1-sqrt c)^2, s(1+sqrt c)^2].
inline double mp_density_F(double s, double c, double x) {
    const double lo = s * (1.0 - std::sqrt(c)) * (1.0 - std::sqrt(c));
    const double hi = s * (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
    if (!(x > lo && x < hi)) return 0.0;
    return std::sqrt((hi - x) * (x - lo)) / (2.0 * M_PI * c * s * x);
}

inline std::pair<double, double> mp_support(double s, double c) {
    return {s * (1.0 - std::sqrt(c)) * (1.0 - std::sqrt(c)),
            s * (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c))};
}

} // namespace wishart::curve

#endif
