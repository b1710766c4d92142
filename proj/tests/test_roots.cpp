#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "wishart/roots.hpp"

using namespace wishart;
using roots::cplx;

namespace {

cplx eval_poly(const std::vector<cplx>& asc, cplx x) {
    cplx v = 0.0;
    for (std::size_t k = asc.size(); k-- > 0;) v = v * x + asc[k];
    return v;
}

double coeff_scale(const std::vector<cplx>& asc) {
    double s = 0.0;
    for (const auto& c : asc) s = std::max(s, std::abs(c));
    return s;
}

/// |p(r)| <= tol * max|coeff| * (1+|r|)^deg
void check_residuals(const std::vector<cplx>& asc, const std::vector<cplx>& rts, double tol) {
    const double scale = coeff_scale(asc);
    for (const auto& r : rts) {
        const double bound = tol * scale * std::pow(1.0 + std::abs(r), double(asc.size() - 1));
        REQUIRE(std::abs(eval_poly(asc, r)) <= bound);
    }
}

void match_sets(const std::vector<cplx>& a, std::vector<cplx> b, double tol) {
    REQUIRE(a.size() == b.size());
    for (const auto& x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx u, cplx v) {
            return std::abs(u - x) < std::abs(v - x);
        });
        REQUIRE(std::abs(*it - x) <= tol);
        b.erase(it);
    }
}

} // namespace

TEST_CASE("cubic: roots of unity") {
    const auto rs = roots::solve_cubic({1.0, 0.0, 0.0, -1.0});
    match_sets(rs.roots,
               {cplx(1, 0), std::polar(1.0, 2 * M_PI / 3), std::polar(1.0, -2 * M_PI / 3)},
               1e-12);
}

TEST_CASE("cubic: triple root (xi-1)^3") {
    const auto rs = roots::solve_cubic({1.0, -3.0, 3.0, -1.0});
    for (const auto& r : rs.roots) REQUIRE(std::abs(r - 1.0) < 1e-4);
    for (int m : rs.multiplicity) REQUIRE(m == 3);
}

TEST_CASE("cubic: paper branch convention keeps real cube roots real") {
    // one real root, conjugate pair: the real root must carry zero imaginary part
    const auto rs = roots::solve_cubic({1.0, 0.0, 1.0, -2.0});  // x^3 + x - 2 = (x-1)(x^2+x+2)
    int n_real = 0;
    for (const auto& r : rs.roots)
        if (r.imag() == 0.0) ++n_real;
    REQUIRE(n_real == 1);
}

TEST_CASE("cubic: 100 random vs companion oracle") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double c3 = (U(gen) > 0 ? 1.0 : -1.0) * (0.5 + std::abs(U(gen)));
        std::vector<cplx> asc = {U(gen), U(gen), U(gen), c3};
        const auto closed = roots::solve_cubic({asc[3], asc[2], asc[1], asc[0]});
        const auto oracle = roots::companion_roots(asc);
        match_sets(closed.roots, oracle.roots, 1e-10);
        check_residuals(asc, closed.roots, 1e-12);
    }
}

TEST_CASE("cubic: rejects degenerate leading coefficient") {
    REQUIRE_THROWS_AS(roots::solve_cubic({0.0, 1.0, 1.0, 1.0}), InvalidParameters);
}

TEST_CASE("quartic: xi^4 - 1") {
    const auto rs = roots::solve_quartic({1, 0, 0, 0, -1});
    match_sets(rs.roots, {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}, 1e-12);
    int n_real = 0;
    for (const auto& r : rs.roots)
        if (r.imag() == 0.0) ++n_real;
    REQUIRE(n_real == 2);
    REQUIRE(rs.discriminant < 0.0);  // two real + conjugate pair
}

TEST_CASE("quartic: 100 random vs companion oracle") {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double q4 = (U(gen) > 0 ? 1.0 : -1.0) * (0.5 + std::abs(U(gen)));
        std::vector<cplx> asc = {U(gen), U(gen), U(gen), U(gen), q4};
        const auto closed = roots::solve_quartic(
            {q4, asc[3].real(), asc[2].real(), asc[1].real(), asc[0].real()});
        const auto oracle = roots::companion_roots(asc);
        match_sets(closed.roots, oracle.roots, 1e-10);
        check_residuals(asc, closed.roots, 1e-10);
    }
}

TEST_CASE("quartic: discriminant sign vs real-root count on 1000 random quartics") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double q4 = (U(gen) > 0 ? 1.0 : -1.0) * (0.5 + std::abs(U(gen)));
        const double q3 = U(gen), q2 = U(gen), q1 = U(gen), q0 = U(gen);
        const auto rs = roots::solve_quartic({q4, q3, q2, q1, q0});
        if (std::abs(rs.discriminant) < 1e-6) continue;  // too close to the boundary to count
        const auto oracle = roots::companion_roots({q0, q1, q2, q3, q4});
        int n_real = 0;
        for (const auto& r : oracle.roots)
            if (std::abs(r.imag()) < 1e-7 * (1.0 + std::abs(r.real()))) ++n_real;
        if (rs.discriminant < 0.0)
            REQUIRE(n_real == 2);
        else
            REQUIRE((n_real == 0 || n_real == 4));
    }
}

TEST_CASE("real coefficients give conjugate-closed root sets") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rs = roots::solve_quartic({1.0, U(gen), U(gen), U(gen), U(gen)});
        std::vector<cplx> conj;
        for (const auto& r : rs.roots) conj.push_back(std::conj(r));
        match_sets(rs.roots, conj, 1e-12);
    }
}

TEST_CASE("companion: double root and error paths") {
    const auto rs = roots::companion_roots({1.0, -2.0, 1.0});  // (x-1)^2
    for (const auto& r : rs.roots) REQUIRE(std::abs(r - 1.0) < 1e-6);
    REQUIRE(rs.multiplicity[0] == 2);
    REQUIRE_THROWS_AS(roots::companion_roots({1.0}), InvalidParameters);
    REQUIRE_THROWS_AS(roots::companion_roots({1.0, 0.0}), InvalidParameters);
}

TEST_CASE("companion: degree-7 residual bound") {
    std::mt19937_64 gen(5150);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<cplx> asc(8);
    for (auto& c : asc) c = U(gen);
    asc[7] = 1.0;
    const auto rs = roots::companion_roots(asc);
    REQUIRE(rs.roots.size() == 7);
    check_residuals(asc, rs.roots, 1e-9);
}
