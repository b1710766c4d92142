#ifndef WISHART_HGEOMETRY_ASSEMBLE_HPP
#define WISHART_HGEOMETRY_ASSEMBLE_HPP

// marching-squares extraction and component classification for HGeometry;
// split out of hgeometry.hpp to keep the numerical core readable

#include <cstdint>
#include <deque>
#include <unordered_map>

namespace wishart::hgeo {

namespace ms_detail {

struct Seg {
    cplx a, b;
};

inline cplx lerp_zero(cplx pa, double fa, cplx pb, double fb) {
    const double t = fa / (fa - fb);
    return pa + t * (pb - pa);
}

/// standard 16-case table via per-edge crossings; ambiguous saddles resolved
/// by the cell-center average
inline void cell_segments(cplx p00, cplx p10, cplx p11, cplx p01, double f00, double f10,
                          double f11, double f01, std::vector<Seg>& out) {
    const bool s00 = f00 > 0.0, s10 = f10 > 0.0, s11 = f11 > 0.0, s01 = f01 > 0.0;
    const int idx = (s00 ? 1 : 0) | (s10 ? 2 : 0) | (s11 ? 4 : 0) | (s01 ? 8 : 0);
    if (idx == 0 || idx == 15) return;
    const cplx eb = lerp_zero(p00, f00, p10, f10);   // bottom
    const cplx er = lerp_zero(p10, f10, p11, f11);   // right
    const cplx et = lerp_zero(p01, f01, p11, f11);   // top
    const cplx el = lerp_zero(p00, f00, p01, f01);   // left
    switch (idx) {
        case 1: case 14: out.push_back({el, eb}); break;
        case 2: case 13: out.push_back({eb, er}); break;
        case 3: case 12: out.push_back({el, er}); break;
        case 4: case 11: out.push_back({er, et}); break;
        case 6: case 9:  out.push_back({eb, et}); break;
        case 7: case 8:  out.push_back({el, et}); break;
        case 5: case 10: {
            const double fc = 0.25 * (f00 + f10 + f11 + f01);
            const bool center = fc > 0.0;
            if ((idx == 5) == center) {
                out.push_back({el, et});
                out.push_back({eb, er});
            } else {
                out.push_back({el, eb});
                out.push_back({er, et});
            }
            break;
        }
        default: break;
    }
}

struct Key {
    std::int64_t x, y;
    bool operator==(const Key& o) const { return x == o.x && y == o.y; }
};
struct KeyHash {
    std::size_t operator()(const Key& k) const {
        return std::hash<std::int64_t>()(k.x * 1000003 ^ k.y);
    }
};

inline std::vector<std::vector<cplx>> chain(const std::vector<Seg>& segs, double eps) {
    auto key = [&](cplx p) {
        return Key{static_cast<std::int64_t>(std::llround(p.real() / eps)),
                   static_cast<std::int64_t>(std::llround(p.imag() / eps))};
    };
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> at;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        at[key(segs[i].a)].push_back(i);
        at[key(segs[i].b)].push_back(i);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<cplx>> chains;

    auto walk = [&](std::size_t start, bool from_a) {
        std::deque<cplx> pts;
        std::size_t cur = start;
        cplx tail = from_a ? segs[cur].b : segs[cur].a;
        pts.push_back(from_a ? segs[cur].a : segs[cur].b);
        pts.push_back(tail);
        used[cur] = true;
        for (;;) {
            const auto& cand = at[key(tail)];
            std::size_t next = segs.size();
            for (std::size_t j : cand)
                if (!used[j]) { next = j; break; }
            if (next == segs.size()) break;
            used[next] = true;
            const Key kt = key(tail);
            tail = (key(segs[next].a) == kt) ? segs[next].b : segs[next].a;
            pts.push_back(tail);
        }
        return std::vector<cplx>(pts.begin(), pts.end());
    };

    // open chains first (endpoints of degree 1), then any leftover loops
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        const bool a_open = at[key(segs[i].a)].size() == 1;
        const bool b_open = at[key(segs[i].b)].size() == 1;
        if (a_open || b_open) chains.push_back(walk(i, a_open));
    }
    for (std::size_t i = 0; i < segs.size(); ++i)
        if (!used[i]) chains.push_back(walk(i, true));
    return chains;
}

} // namespace ms_detail

inline LevelSetGeometry HGeometry::assemble(double x0, double dx, const std::vector<double>& ys,
                                            int nx, const std::vector<double>& f) const {
    const auto& info = sc_.support();
    const cplx l3 = info.lambda3();
    const cplx l4 = std::conj(l3);

    // full mirrored grid: rows -y (y > 0) descending, then ys ascending
    std::vector<double> rows;
    for (std::size_t j = ys.size(); j-- > 0;)
        if (ys[j] > 0.0) rows.push_back(-ys[j]);
    rows.insert(rows.end(), ys.begin(), ys.end());
    const int nyf = static_cast<int>(rows.size());
    auto fval = [&](int i, int j) {
        const double y = rows[j];
        const double ay = std::abs(y);
        // locate ay in ys (uniform spacing)
        const double dy = ys.size() > 1 ? ys[1] - ys[0] : 1.0;
        int k = static_cast<int>(std::llround((ay - ys[0]) / dy));
        k = std::clamp(k, 0, static_cast<int>(ys.size()) - 1);
        return f[static_cast<std::size_t>(k) * nx + i];
    };

    const double dyr = ys.size() > 1 ? ys[1] - ys[0] : dx;
    const double cell = std::max(dx, dyr);
    const double skip_r = 2.0 * cell;   // mask the junction cells at lambda3/4

    std::vector<ms_detail::Seg> segs;
    for (int j = 0; j + 1 < nyf; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const cplx p00(x0 + i * dx, rows[j]);
            const cplx p10(x0 + (i + 1) * dx, rows[j]);
            const cplx p11(x0 + (i + 1) * dx, rows[j + 1]);
            const cplx p01(x0 + i * dx, rows[j + 1]);
            const cplx c = 0.25 * (p00 + p10 + p11 + p01);
            if (std::abs(c - l3) < skip_r || std::abs(c - l4) < skip_r) continue;
            ms_detail::cell_segments(p00, p10, p11, p01, fval(i, j), fval(i + 1, j),
                                     fval(i + 1, j + 1), fval(i, j + 1), segs);
        }

    auto chains = ms_detail::chain(segs, 1e-7 * cell);

    // classification: near lambda3/lambda4 within a few cells; window exits
    const double near_r = 4.0 * cell;
    auto near_pt = [&](const std::vector<cplx>& c, cplx p) {
        return std::abs(c.front() - p) < near_r || std::abs(c.back() - p) < near_r;
    };
    auto crosses_axis = [&](const std::vector<cplx>& c) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if ((c[i].imag() > 0) != (c[i + 1].imag() > 0) ||
                c[i].imag() == 0.0)
                return true;
        return c.back().imag() == 0.0;
    };

    LevelSetGeometry out;
    std::vector<const std::vector<cplx>*> lr, plus, minus;
    for (const auto& c : chains) {
        if (c.size() < 4) continue;  // sub-cell fragments
        const bool n3 = near_pt(c, l3), n4 = near_pt(c, l4);
        if (n3 && n4 && crosses_axis(c))
            lr.push_back(&c);
        else if (n3 && !n4)
            plus.push_back(&c);
        else if (n4 && !n3)
            minus.push_back(&c);
    }
    if (lr.size() != 2 || plus.size() != 1 || minus.size() != 1)
        throw ComponentCountMismatch(
            "trace_hset: expected two lambda3-lambda4 curves and one curve to infinity per "
            "half plane (found " + std::to_string(lr.size()) + "/" +
            std::to_string(plus.size()) + "/" + std::to_string(minus.size()) +
            "); raise the resolution or move away from critical parameters");
    const std::vector<cplx>* inf_plus = plus[0];
    const std::vector<cplx>* inf_minus = minus[0];

    auto crossing_x = [&](const std::vector<cplx>& c) {
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            const double ya = c[i].imag(), yb = c[i + 1].imag();
            if ((ya > 0) != (yb > 0))
                return c[i].real() +
                       (c[i + 1].real() - c[i].real()) * (0.0 - ya) / (yb - ya);
            if (ya == 0.0) return c[i].real();
        }
        return c.back().real();
    };
    const std::vector<cplx>* hl = lr[0];
    const std::vector<cplx>* hr = lr[1];
    if (crossing_x(*hl) > crossing_x(*hr)) std::swap(hl, hr);

    // refine the real crossings by bisection on h
    auto refine = [&](double xc) {
        double lo = xc - 1.5 * dx, hi = xc + 1.5 * dx;
        double flo = h_value(lo);
        double fhi = h_value(hi);
        if (flo * fhi > 0.0) return xc;  // crossing hugs a grid line; keep the cell estimate
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = h_value(mid);
            if ((flo <= 0.0) == (fm <= 0.0)) { lo = mid; flo = fm; }
            else { hi = mid; fhi = fm; }
        }
        return 0.5 * (lo + hi);
    };
    out.x_L = refine(crossing_x(*hl));
    out.x_R = refine(crossing_x(*hr));
    out.iota = find_iota();
    out.curves.push_back({"H_inf_plus", *inf_plus});
    out.curves.push_back({"H_inf_minus", *inf_minus});
    out.curves.push_back({"H_L", *hl});
    out.curves.push_back({"H_R", *hr});
    return out;
}

} // namespace wishart::hgeo

#endif
