#pragma once

// Exact verification of the determinant / Hermite identities that drive the
// perturbation formulas, plus the random-matrix Monte Carlo check.
//
// Both sides of every identity are polynomials of degree <= n in x, so the
// checks evaluate them at n + 1 distinct rational points. Agreement there is a
// proof of the identity for the given n, cycle multiset and parameters.

#include <cstdint>
#include <string>
#include <vector>

#include "minkowski/jet.hpp"

namespace mlab {

struct IdentitySample {
    Rational x;
    Rational lhs;
    Rational rhs;
};

struct IdentityResult {
    bool holds = false;
    std::vector<IdentitySample> samples;

    explicit operator bool() const { return holds; }
};

/// Evaluation points used by the verify_* checks: n + 1 distinct rationals.
std::vector<Rational> identity_sample_points(int n);

/// Exact He_k at a rational point; k >= 0.
Rational hermite_exact(int k, const Rational& x);

/// Falling factorial (n)_m = n (n-1) ... (n-m+1).
Rational falling_factorial(int n, int m);

/// det(xI + D)(e^{tr Theta^2} prod tr(Theta^{c_i}))|_0 == (-1/2)^{m-l} (n)_m He_{n-m}(x).
/// `rhs_sign` multiplies the right-hand side; anything but +1 is a fault injection.
IdentityResult verify_lemma_a1(int n, const std::vector<int>& cycles, int rhs_sign = 1);

/// As verify_lemma_a1 with kernel e^{(1+beta) tr Theta^2 + beta/2 (tr Theta)^2}.
IdentityResult verify_lemma_a2(int n, const Rational& beta, const std::vector<int>& cycles,
                               int rhs_sign = 1);

/// det(-D + gamma x I)(psi_R^0 prod tr(Theta^{c_i}))|_0
///   == (-1)^m gamma^{n-m} (-1/2)^{m-k} (n)_m He_{n-m}(x)
/// where psi_R^0 = exp(alpha/2 tr Theta^2 + beta_R/2 (tr Theta)^2) with
/// alpha = 2 gamma^2 (1 + beta) and beta_R = beta gamma^2, i.e. `beta` is the
/// gamma^2-normalised coupling and gamma^2 = alpha/2 - beta_R holds exactly.
/// Throws std::invalid_argument if gamma <= 0, alpha <= 0 or alpha + n beta_R <= 0.
IdentityResult verify_prop31(int n, const Rational& gamma, const Rational& beta,
                             const std::vector<int>& cycles, int rhs_sign = 1);

/// det(-D + gamma x I)(psi_R^0 prod tr(Theta^{c_i}) Pi_K)|_0 == 0 with
/// Pi_K = (tr Theta)^K - (-2)^{K-1} tr(Theta^K). Throws for K < 2 and for
/// parameters rejected by verify_prop31.
IdentityResult verify_loop_annihilation(int n, const Rational& gamma, const Rational& beta, int K,
                                        const std::vector<int>& cycles);

/// All multisets of positive cycle lengths with sum <= max_sum (including
/// the empty one), each sorted in non-increasing order.
std::vector<std::vector<int>> cycle_multisets(int max_sum);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo estimate of E[det(x I + A)] with A symmetric, A_ii ~ N(0, 2),
/// A_ij ~ N(0, 1) (i < j); the expectation equals He_n(x).
/// Throws std::invalid_argument for samples < 100 or n < 1.
McEstimate goe_hermite_mc(int n, double x, std::int64_t samples, std::uint64_t seed);

}  // namespace mlab
