#pragma once

// Expected Euler characteristic and Lipschitz-Killing curvatures of excursion
// sets of weakly non-Gaussian isotropic fields, to second order.

#include <span>
#include <string>
#include <string_view>

#include "minkowski/geometry.hpp"

namespace mlab {

/// Derivatives at the origin of the 2-, 3- and 4-point correlation functions.
/// The expansion parameter is folded in: third-order entries are nu * kappa,
/// fourth-order entries nu^2 * kappa. Only loop-free derivatives exist here;
/// derivatives whose diagram contains a loop never enter the expansion.
struct CumulantSet {
    double gamma = 1.0;  // -rho'(0)
    // kappa^(3): value, d/dx12, d^2/dx12 dx13
    double k0 = 0.0;
    double k1 = 0.0;
    double k11 = 0.0;
    // kappa^(4) with arguments (x12, x13, x14, x23, x24, x34):
    // value, d/dx12, d/dx12 dx13, d/dx12 dx34, d/dx12 dx13 dx24, d/dx12 dx13 dx14
    double K0 = 0.0;
    double K1 = 0.0;
    double K11a = 0.0;
    double K11aa = 0.0;
    double K111a = 0.0;
    double K111d = 0.0;

    static CumulantSet gaussian(double gamma);
    /// Throws std::invalid_argument unless gamma > 0 and every field is finite.
    void validate() const;
    bool operator==(const CumulantSet&) const = default;
};

/// How many perturbation orders to keep.
enum class Correction { none, skewness, skewness_kurtosis };

std::string_view correction_name(Correction c);
/// Accepts "gaussian"/"none", "skewness", "skewness+kurtosis"/"full".
Correction parse_correction(std::string_view s);

/// First-order term Delta_{1,n}(x).
double delta1(int n, double x, const CumulantSet& c);
/// Second-order term Delta_{2,n}(x).
double delta2(int n, double x, const CumulantSet& c);

/// Euler characteristic density
/// Xi_n(x) = gamma^{n/2} (2 pi)^{-n/2} phi(x) [He_{n-1}(x) + Delta_1 + Delta_2].
double ec_density(int n, double x, const CumulantSet& c,
                  Correction level = Correction::skewness_kurtosis);

/// E[chi(E_v)] = sum_d L_d Xi_d(v).
double expected_ec(const LKVector& lk, double v, const CumulantSet& c,
                   Correction level = Correction::skewness_kurtosis);

/// E[L_k(E_v)] = sum_{d=0}^{n-k} [k+d, k] L_{k+d} Xi_d(v).
/// Throws std::out_of_range unless 0 <= k <= n.
double expected_lk_excursion(int k, const LKVector& lk, double v, const CumulantSet& c,
                             Correction level = Correction::skewness_kurtosis);

/// E[M_{n-k}(E_v)] = omega_{n-k} E[L_k(E_v)] / binom(n, k).
double expected_minkowski(int k, const LKVector& lk, double v, const CumulantSet& c,
                          Correction level = Correction::skewness_kurtosis);

/// First-order shift of E[L_k(E_v)]:
/// sum_d [k+d, k] L_{k+d} gamma^{d/2} (2 pi)^{-d/2} phi(v) Delta_{1,d}(v).
/// Fourth-order fields of `c` are ignored.
double local_power_shift(int k, const LKVector& lk, double v, const CumulantSet& c);

/// T_N = N^{-1/2} sum_i (x_i - mean) / sd. Throws std::invalid_argument for
/// an empty sample or sd <= 0.
double tn_statistic(std::span<const double> sample, double null_mean, double null_sd);

}  // namespace mlab
