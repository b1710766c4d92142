#ifndef WISHART_HGEOMETRY_HPP
#define WISHART_HGEOMETRY_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "wishart/curve.hpp"
#include "wishart/errors.hpp"
#include "wishart/quadrature.hpp"

namespace wishart::hgeo {

using cplx = std::complex<double>;

/// theta2(z) - theta3(z) with the polyline that produced it.
struct ThetaDiff {
    cplx z;
    cplx value;
    std::vector<cplx> path;
};

struct TaggedCurve {
    std::string tag;   // H_inf_plus | H_inf_minus | H_L | H_R
    std::vector<cplx> points;
};

/// The zero set of Re(theta2 - theta3): four simple curves, the two real
/// crossings, and the single real point where Re(xi2 - xi3) vanishes.
struct LevelSetGeometry {
    std::vector<TaggedCurve> curves;
    double x_L = 0.0;
    double x_R = 0.0;
    double iota = 0.0;
};

class HGeometry {
  public:
    explicit HGeometry(const EnsembleParams& p) : sc_(p) {
        if (sc_.support().cuts != curve::CutClass::one_cut)
            throw OneCutRequired("HGeometry: one-cut regime required");
    }
    explicit HGeometry(curve::SpectralCurve sc) : sc_(std::move(sc)) {}

    const curve::SpectralCurve& curve_ref() const { return sc_; }

    /// Integral of (xi2 - xi3) from lambda3 to z.  Default path: straight
    /// segment for Im z >= 0; for Im z < 0 the path detours through the real
    /// axis right of lambda2, where no branch cut lies.
    ThetaDiff theta_diff(cplx z, double tol = 1e-9) const {
        const cplx l3 = sc_.support().lambda3();
        std::vector<cplx> pts;
        if (z.imag() >= 0.0) {
            pts = {l3, z};
        } else {
            const double xr = sc_.support().lambda2() + 0.75 * std::abs(l3.imag());
            pts = {l3, cplx(xr, 0.0), z};
        }
        return theta_diff_along(pts, tol);
    }

    /// Same integral along an explicit polyline starting at lambda3.
    ThetaDiff theta_diff_along(const std::vector<cplx>& pts, double tol = 1e-9) const {
        validate_path(pts);
        // seed the labels at the path point farthest from all branch points,
        // then integrate both ways; merge tails (pair difference -> 0 like a
        // square root) are cut off and estimated analytically
        std::size_t seed_leg = 0;
        double seed_t = 0.5, best = -1.0;
        for (std::size_t leg = 0; leg + 1 < pts.size(); ++leg)
            for (int k = 1; k < 8; ++k) {
                const double t = k / 8.0;
                const cplx w = pts[leg] + (pts[leg + 1] - pts[leg]) * t;
                const double d = dist_to_branch_points(w);
                if (d > best) { best = d; seed_leg = leg; seed_t = t; }
            }
        const cplx w0 = pts[seed_leg] + (pts[seed_leg + 1] - pts[seed_leg]) * seed_t;
        const auto bt = sc_.branch_values(w0);
        std::array<cplx, 3> trip = {bt.xi1, bt.xi2, bt.xi3};

        double total_len = 0.0;
        for (std::size_t leg = 0; leg + 1 < pts.size(); ++leg)
            total_len += std::abs(pts[leg + 1] - pts[leg]);

        // backward: w0 -> pts[seed_leg] -> ... -> pts[0] = lambda3
        cplx back(0.0);
        {
            auto tr = trip;
            cplx from = w0;
            std::size_t leg = seed_leg + 1;
            for (;;) {
                const cplx to = pts[leg - 1];
                const bool last = (leg == 1);
                back += integrate_segment(from, tr, to, tol * std::abs(to - from) / total_len, last);
                if (last) break;
                from = to;
                --leg;
            }
        }
        // forward: w0 -> pts[seed_leg+1] -> ... -> pts.back()
        cplx fwd(0.0);
        {
            auto tr = trip;
            cplx from = w0;
            for (std::size_t leg = seed_leg + 1; leg < pts.size(); ++leg) {
                const cplx to = pts[leg];
                const bool last = (leg + 1 == pts.size()) && ends_at_branch_point(pts.back());
                fwd += integrate_segment(from, tr, to, tol * std::abs(to - from) / total_len, last);
                from = to;
            }
        }
        return {pts.back(), fwd - back, pts};
    }

    /// Restriction of Re(theta2 - theta3) to the real axis.
    double h_value(double x, double tol = 1e-9) const {
        return theta_diff(cplx(x, 0.0), tol).value.real();
    }

    /// The unique real zero of Re(xi2 - xi3), located through the label-free
    /// equivalent Re(xi1) - xi_real (continuous across x*, same zero set),
    /// with a 1e3-point uniqueness scan.
    double find_iota() const {
        const double l1 = sc_.support().lambda1(), l2 = sc_.support().lambda2();
        const double pad = 1e-7 * (l2 - l1);
        auto g = [&](double x) {
            const auto t = sc_.branch_values(cplx(x, 0.0));
            const std::array<cplx, 3> xs = {t.xi1, t.xi2, t.xi3};
            int real_idx = 0;
            double best = std::abs(xs[0].imag());
            for (int i = 1; i < 3; ++i)
                if (std::abs(xs[i].imag()) < best) { best = std::abs(xs[i].imag()); real_idx = i; }
            return t.xi1.real() - xs[real_idx].real();
        };
        const int n = 1000;
        int crossings = 0;
        double lo = 0.0, hi = 0.0;
        double xp = l1 + pad, fp = g(xp);
        for (int i = 1; i <= n; ++i) {
            const double x = l1 + pad + (l2 - l1 - 2 * pad) * i / n;
            const double f = g(x);
            if (fp == 0.0 || fp * f < 0.0) {
                ++crossings;
                lo = xp; hi = x;
            }
            xp = x; fp = f;
        }
        if (crossings != 1)
            throw MultipleSignChanges("find_iota: expected exactly one sign change, saw " +
                                      std::to_string(crossings));
        double flo = g(lo);
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = g(mid);
            if ((flo <= 0.0) == (fm <= 0.0)) { lo = mid; flo = fm; }
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// Marching-squares extraction of the zero level of Re(theta2 - theta3) on
    /// [x0,x1] x [y0,y1]; the upper half plane is evaluated, the lower half is
    /// its mirror.  Threads only change scheduling: each node's value depends
    /// on its own deterministic path.
    LevelSetGeometry trace_hset(double x0, double x1, double y0, double y1,
                                int nx, int ny, double node_tol = 3e-7) const {
        if (nx < 200 || ny < 200)
            throw InvalidParameters("trace_hset: resolution must be at least 200x200");
        const auto& info = sc_.support();
        const double span = info.lambda2() - info.lambda1();
        for (const auto& l : info.lambda) {
            if (l.real() - x0 < 0.3 * span || x1 - l.real() < 0.3 * span ||
                l.imag() - y0 < 0.3 * span || y1 - l.imag() < 0.3 * span)
                throw InvalidParameters("trace_hset: window must contain the branch points "
                                        "with a margin of 30% of the support span");
        }

        // grid rows at y >= 0 only; request ny covering [y0, y1]
        const double dx = (x1 - x0) / (nx - 1), dy = (y1 - y0) / (ny - 1);
        std::vector<double> ys;  // row coordinates in [0, y1]
        for (int j = 0; j < ny; ++j) {
            const double y = y0 + j * dy;
            if (y >= -1e-12) ys.push_back(std::max(y, 0.0));
        }
        const int nyu = static_cast<int>(ys.size());
        std::vector<double> f(static_cast<std::size_t>(nx) * nyu);

        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::thread> workers;
        std::atomic<int> next_row{0};
        auto run_rows = [&]() {
            for (;;) {
                const int j = next_row.fetch_add(1);
                if (j >= nyu) break;
                for (int i = 0; i < nx; ++i) {
                    const cplx z(x0 + i * dx, ys[j]);
                    f[static_cast<std::size_t>(j) * nx + i] = node_value(z, node_tol);
                }
            }
        };
        for (unsigned t = 1; t < hw; ++t) workers.emplace_back(run_rows);
        run_rows();
        for (auto& w : workers) w.join();

        return assemble(x0, dx, ys, nx, f);
    }

  private:
    double dist_to_branch_points(cplx w) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& l : sc_.support().lambda) d = std::min(d, std::abs(w - l));
        return d;
    }

    bool ends_at_branch_point(cplx w) const { return dist_to_branch_points(w) < 1e-9; }

    void validate_path(const std::vector<cplx>& pts) const {
        if (pts.size() < 2)
            throw InvalidParameters("theta_diff: path needs at least two points");
        if (std::abs(pts.front() - sc_.support().lambda3()) > 1e-9)
            throw InvalidParameters("theta_diff: path must start at lambda3");
        for (std::size_t leg = 0; leg + 1 < pts.size(); ++leg) {
            const cplx a = pts[leg], b = pts[leg + 1];
            for (const auto& l : sc_.support().lambda) {
                // distance from l to segment [a, b]
                const cplx ab = b - a;
                const double len2 = std::norm(ab);
                double t = len2 > 0.0 ? std::clamp(((l - a) * std::conj(ab)).real() / len2, 0.0, 1.0)
                                      : 0.0;
                const double d = std::abs(a + t * ab - l);
                const bool endpoint_ok =
                    (std::abs(l - pts.front()) < 1e-9 && leg == 0) ||
                    (std::abs(l - pts.back()) < 1e-9 && leg + 2 == pts.size());
                if (d < 1e-6 && !endpoint_ok)
                    throw PathThroughBranchPoint("theta_diff: polyline passes within 1e-6 of a "
                                                 "branch point; re-route the path");
            }
        }
    }

    /// Value used by the grid: Re(theta) via the straight default path.
    double node_value(cplx z, double tol) const {
        return theta_diff(z, tol).value.real();
    }

    /// Integrate (xi2 - xi3) dz from za to zb, labels carried along; when
    /// stop_at_merge is set the walk stops once the xi2/xi3 separation falls
    /// below the merge cutoff and the remaining sqrt-type tail contributes
    /// (2/3)(zb - w) * (xi2 - xi3)(w).
    cplx integrate_segment(cplx za, std::array<cplx, 3>& trip, cplx zb, double tol,
                           bool stop_at_merge) const {
        if (za == zb) return 0.0;
        const double merge_cut = 1e-6 * (1.0 + std::abs(zb));
        cplx total(0.0);
        double t = 0.0, step = 0.125;
        const double min_step = 1e-13;
        const cplx seg = zb - za;
        while (t < 1.0) {
            double h = std::min(step, 1.0 - t);
            std::array<cplx, 3> end_trip;
            cplx panel;
            double err;
            while (!try_panel(za, seg, trip, t, h, panel, err, end_trip) ||
                   err > tol * std::max(h, 1e-3)) {
                h *= 0.5;
                if (h < min_step)
                    throw BranchCollision("theta integration stalled (branch pairing or "
                                          "quadrature failed to converge)");
            }
            total += panel;
            trip = end_trip;
            t += h;
            step = std::min(2.0 * h, 0.125);
            if (stop_at_merge && std::abs(trip[1] - trip[2]) < merge_cut) {
                total += 2.0 / 3.0 * (1.0 - t) * seg * (trip[1] - trip[2]);
                break;
            }
        }
        return total;
    }

    struct PanelNode {
        double pos, wk, wg;
    };

    static const std::array<PanelNode, 15>& panel_nodes() {
        static const std::array<PanelNode, 15> nodes = [] {
            std::array<PanelNode, 15> out;
            int m = 0;
            for (int j = 0; j < 7; ++j) {
                const double g = (j % 2 == 1) ? quad::GK15::wg[j / 2] : 0.0;
                out[m++] = {0.5 * (1.0 - quad::GK15::xgk[j]), quad::GK15::wgk[j], g};
                out[m++] = {0.5 * (1.0 + quad::GK15::xgk[j]), quad::GK15::wgk[j], g};
            }
            out[m++] = {0.5, quad::GK15::wgk[7], quad::GK15::wg[3]};
            std::sort(out.begin(), out.end(),
                      [](const PanelNode& a, const PanelNode& b) { return a.pos < b.pos; });
            return out;
        }();
        return nodes;
    }

    /// GK15 on [t, t+h] along za + s*seg with sequential label continuation
    /// through the (sorted) nodes; false if any pairing is ambiguous.
    bool try_panel(cplx za, cplx seg, const std::array<cplx, 3>& trip0, double t, double h,
                   cplx& value, double& err, std::array<cplx, 3>& end_trip) const {
        auto tr = trip0;
        std::array<cplx, 3> matched;
        cplx resk = 0.0, resg = 0.0;
        for (const auto& nd : panel_nodes()) {
            const cplx w = za + (t + h * nd.pos) * seg;
            if (!curve::SpectralCurve::pair_unique(sc_.roots_at(w), tr, matched)) return false;
            tr = matched;
            const cplx v = matched[1] - matched[2];
            resk += nd.wk * v;
            resg += nd.wg * v;
        }
        if (!curve::SpectralCurve::pair_unique(sc_.roots_at(za + (t + h) * seg), tr, matched))
            return false;
        end_trip = matched;
        value = resk * 0.5 * h * seg;
        err = std::abs(resk - resg) * 0.5 * h * std::abs(seg);
        return true;
    }

    LevelSetGeometry assemble(double x0, double dx, const std::vector<double>& ys, int nx,
                              const std::vector<double>& f) const;

    curve::SpectralCurve sc_;
};

} // namespace wishart::hgeo

#include "wishart/hgeometry_assemble.hpp"

#endif
