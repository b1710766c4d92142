#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wishart/hgeometry.hpp"

using namespace wishart;
using hgeo::cplx;

namespace {

EnsembleParams fig2() {
    EnsembleParams p;
    p.a = 0.9; p.c = 0.4; p.beta = 0.7;
    return p;
}

const hgeo::HGeometry& geom() {
    static const hgeo::HGeometry g(fig2());
    return g;
}

constexpr double kIota = 0.61087991383246689285;  // root of z^3 r(z) in (l1, l2)

} // namespace

TEST_CASE("theta_diff: vanishes at lambda3 and is purely imaginary at lambda4") {
    const auto& g = geom();
    const cplx l3 = g.curve_ref().support().lambda3();
    const auto t0 = g.theta_diff(l3 + cplx(1e-9, 1e-9));
    REQUIRE(std::abs(t0.value) < 1e-5);

    // symmetric path around the real axis to lambda4
    const double xr = g.curve_ref().support().lambda2() + 2.0;
    const auto t4 = g.theta_diff_along({l3, cplx(xr, 0.0), std::conj(l3)});
    REQUIRE(std::abs(t4.value.real()) < 1e-7);
    REQUIRE(std::abs(t4.value.imag()) > 1e-2);  // genuinely imaginary, not zero
}

TEST_CASE("theta_diff: path independence within a homotopy class") {
    const auto& g = geom();
    const cplx l3 = g.curve_ref().support().lambda3();
    const cplx z(4.5, 1.0);
    const auto direct = g.theta_diff(z);
    const auto dogleg = g.theta_diff_along({l3, cplx(3.4, 4.2), cplx(4.4, 2.5), z});
    REQUIRE(std::abs(direct.value - dogleg.value) < 2e-9);
}

TEST_CASE("theta_diff: Re is conjugation-invariant (two independent integrations)") {
    const auto& g = geom();
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> Ux(-0.5, 5.5), Uy(0.4, 4.0);
    for (int k = 0; k < 20; ++k) {
        const cplx z(Ux(gen), Uy(gen));
        const auto up = g.theta_diff(z);
        const auto dn = g.theta_diff(std::conj(z));
        REQUIRE(up.value.real() == Catch::Approx(dn.value.real()).margin(5e-8));
    }
}

TEST_CASE("theta_diff: rejects paths through branch points") {
    const auto& g = geom();
    const auto& info = g.curve_ref().support();
    const cplx l3 = info.lambda3();
    // straight path to a point directly below lambda2 passes through it
    REQUIRE_THROWS_AS(g.theta_diff_along({l3, cplx(info.lambda2(), -1.0)}),
                      PathThroughBranchPoint);
    REQUIRE_THROWS_AS(g.theta_diff_along({cplx(0.0, 0.0), cplx(1.0, 1.0)}), InvalidParameters);
}

TEST_CASE("h: sign structure and crossings for a < 1") {
    const auto& g = geom();
    // negative far left, positive far right (Omega_L / Omega_R signs)
    REQUIRE(g.h_value(-0.8) < 0.0);
    REQUIRE(g.h_value(5.5) > 0.0);
    // value at iota recorded from the independent double-precision prototype
    REQUIRE(g.h_value(kIota) == Catch::Approx(0.8007227342).epsilon(1e-6));

    // exactly two sign changes on a dense grid
    int changes = 0;
    double prev = g.h_value(-0.8, 1e-8);
    for (int i = 1; i <= 160; ++i) {
        const double x = -0.8 + (5.5 + 0.8) * i / 160.0;
        if (std::abs(x - g.curve_ref().support().lambda1()) < 0.03) continue;
        if (std::abs(x - g.curve_ref().support().lambda2()) < 0.03) continue;
        const double h = g.h_value(x, 1e-8);
        if (prev * h < 0.0) ++changes;
        prev = h;
    }
    REQUIRE(changes == 2);
}

TEST_CASE("h: linear divergence with slope 1/a - 1 at large x") {
    const auto& g = geom();
    const double X = 60.0;
    const double slope = (g.h_value(X + 1.0) - g.h_value(X)) / 1.0;
    REQUIRE(slope == Catch::Approx(1.0 / 0.9 - 1.0).epsilon(0.05));
    const double slope_neg = (g.h_value(-X) - g.h_value(-X - 1.0)) / 1.0;
    REQUIRE(slope_neg == Catch::Approx(1.0 / 0.9 - 1.0).epsilon(0.05));
}

TEST_CASE("find_iota: Figure-2 value, bracket, monotone crossing") {
    const auto& g = geom();
    const double iota = g.find_iota();
    REQUIRE(iota == Catch::Approx(kIota).margin(1e-8));
    REQUIRE(iota > g.curve_ref().support().lambda1());
    REQUIRE(iota < g.curve_ref().support().lambda2());

    // positive slope of Re(xi_I - xi_R) at iota via finite differences
    auto gfun = [&](double x) {
        const auto t = g.curve_ref().branch_values(cplx(x, 0.0));
        const std::array<cplx, 3> xs = {t.xi1, t.xi2, t.xi3};
        int ri = 0;
        double best = std::abs(xs[0].imag());
        for (int i = 1; i < 3; ++i)
            if (std::abs(xs[i].imag()) < best) { best = std::abs(xs[i].imag()); ri = i; }
        return t.xi1.real() - xs[ri].real();
    };
    const double d = (gfun(iota + 1e-5) - gfun(iota - 1e-5)) / 2e-5;
    REQUIRE(d > 0.0);
}

TEST_CASE("trace_hset: Figure-2 window structure") {
    const auto& g = geom();
    const auto ls = g.trace_hset(-1.0, 6.0, -5.0, 5.0, 220, 220);
    REQUIRE(ls.curves.size() == 4);
    REQUIRE(ls.curves[0].tag == "H_inf_plus");
    REQUIRE(ls.curves[1].tag == "H_inf_minus");
    REQUIRE(ls.curves[2].tag == "H_L");
    REQUIRE(ls.curves[3].tag == "H_R");
    REQUIRE(ls.x_L < ls.x_R);

    // crossings and iota recorded from the independent prototype
    REQUIRE(ls.x_L == Catch::Approx(0.03595).margin(2e-3));
    REQUIRE(ls.x_R == Catch::Approx(2.99921).margin(2e-3));
    REQUIRE(ls.iota == Catch::Approx(kIota).margin(1e-6));

    // (x_L, x_R) overlaps the support
    const double l1 = g.curve_ref().support().lambda1();
    const double l2 = g.curve_ref().support().lambda2();
    REQUIRE(ls.x_L < l2);
    REQUIRE(ls.x_R > l1);

    // h vanishes at the refined crossings
    REQUIRE(std::abs(g.h_value(ls.x_L)) < 1e-7);
    REQUIRE(std::abs(g.h_value(ls.x_R)) < 1e-7);

    // mirror symmetry: every extracted point has its conjugate nearby
    const auto& up = ls.curves[0].points;
    const auto& dn = ls.curves[1].points;
    const double cell = 7.0 / 219.0 * 1.5;
    for (std::size_t i = 0; i < up.size(); i += 7) {
        double best = 1e300;
        for (const auto& q : dn) best = std::min(best, std::abs(std::conj(up[i]) - q));
        REQUIRE(best < cell);
    }

    // H_inf_plus exits through the top with a near-vertical tangent
    const auto& hp = ls.curves[0].points;
    cplx hi_pt = hp.front().imag() > hp.back().imag() ? hp.front() : hp.back();
    REQUIRE(hi_pt.imag() > 4.5);

    // sign structure: negative left of H_L, positive right of H_R (a < 1)
    REQUIRE(g.theta_diff(cplx(ls.x_L - 0.5, 0.8)).value.real() < 0.0);
    REQUIRE(g.theta_diff(cplx(ls.x_R + 0.8, 0.8)).value.real() > 0.0);
}

TEST_CASE("trace_hset: refinement self-convergence and validation") {
    const auto& g = geom();
    const auto c0 = g.trace_hset(-1.0, 6.0, -5.0, 5.0, 200, 200);
    const auto c1 = g.trace_hset(-1.0, 6.0, -5.0, 5.0, 400, 400);
    const double coarse_dx = 7.0 / 199.0;
    REQUIRE(std::abs(c0.x_L - c1.x_L) < coarse_dx);
    REQUIRE(std::abs(c0.x_R - c1.x_R) < coarse_dx);

    REQUIRE_THROWS_AS(g.trace_hset(-1.0, 6.0, -5.0, 5.0, 100, 100), InvalidParameters);
    // window must contain the branch points with margin
    REQUIRE_THROWS_AS(g.trace_hset(0.0, 2.6, -4.0, 4.0, 220, 220), InvalidParameters);
}
