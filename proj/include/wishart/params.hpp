#ifndef WISHART_PARAMS_HPP
#define WISHART_PARAMS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "wishart/errors.hpp"

namespace wishart {

/// Parameter triple (a, c, beta) of the two-point covariance ensemble:
/// the population covariance has eigenvalue 1 with weight 1-beta and a with
/// weight beta; c = lim N/M.  Optional finite sizes (M, N, N1) ride along for
/// the finite-N and Monte Carlo modules.
struct EnsembleParams {
    double a    = 0.0;  // second covariance eigenvalue, a > 0, a != 1
    double c    = 0.0;  // in (0,1)
    double beta = 0.0;  // in (0,1)

    std::optional<int> M, N, N1;

    // curve coefficients: z*a*xi^3 + (A2 z + B2) xi^2 + (z + B1) xi + 1 = 0
    double A2() const { return 1.0 + a; }
    double B2() const { return a * (1.0 - c); }
    double B1() const { return 1.0 - c * (1.0 - beta) + a * (1.0 - c * beta); }

    void validate() const {
        if (!(a > 0.0))
            throw InvalidParameters("a must be positive, got " + std::to_string(a));
        if (a == 1.0)
            throw InvalidParameters("a = 1 is excluded (leading coefficient (1-a)^2 of D3 vanishes; "
                                    "use the beta->0 or beta->1 reduction for the one-eigenvalue case)");
        if (!(c > 0.0 && c < 1.0))
            throw InvalidParameters("c must lie in (0,1), got " + std::to_string(c));
        if (!(beta > 0.0 && beta < 1.0))
            throw InvalidParameters("beta must lie in (0,1), got " + std::to_string(beta));
        if (M || N || N1) {
            if (!(M && N && N1))
                throw InvalidParameters("finite sizes must be given as a complete (M, N, N1) triple");
            if (*M < *N || *N1 <= 0 || *N1 >= *N)
                throw InvalidParameters("finite sizes require M >= N and 0 < N1 < N");
            // c*M - N and N*beta - N1 are meant to be O(1) per the scaling regime
            if (std::abs(c * *M - *N) > 0.5 * *N || std::abs(*N * beta - *N1) > 0.5 * *N1)
                throw InvalidParameters("finite sizes are inconsistent with (c, beta)");
        }
    }

    /// Params with c, beta matched exactly to the finite sizes.
    static EnsembleParams from_sizes(int M, int N, int N1, double a) {
        EnsembleParams p;
        p.a = a;
        p.c = double(N) / double(M);
        p.beta = double(N1) / double(N);
        p.M = M; p.N = N; p.N1 = N1;
        p.validate();
        return p;
    }
};

} // namespace wishart

#endif
