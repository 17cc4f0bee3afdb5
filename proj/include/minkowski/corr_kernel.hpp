#pragma once

// Correlation functions of the standardized quadratic-transformed field
//   Y = X + delta * X * (X conv h_tau),   Z = (Y - E Y) / omega_delta
// where X has covariance exp(-g |s-t|^2 / 2) and h_tau is the Gaussian density
// of variance tau per axis. Every N-point function is a finite sum of
// exponentials of linear forms in the half-squared distances x_ab, so
// derivatives at the origin are products of rate constants.

#include <array>
#include <span>
#include <vector>

#include "minkowski/ec_theory.hpp"

namespace mlab {

struct KernelModelParams {
    double g = 50.0;
    double tau = 0.1;
    double delta = 0.5;
    int n = 2;

    /// Throws std::invalid_argument unless g > 0, tau >= 0, n >= 1.
    void validate() const;
    bool operator==(const KernelModelParams&) const = default;
};

/// Which closed form to use for the 4-point function.
///  - complete: every connected Wick pairing of the quadratic construction
///    (matches the 4th cumulant of the simulated field).
///  - printed: the 24 directed-chain + 3 four-loop display, kept for reference.
enum class Kappa4Form { complete, printed };

/// An undirected edge (a, b), a < b, between correlation-function vertices.
using Edge = std::array<int, 2>;

/// Index of x_ab among the C(N,2) arguments in lexicographic order of (a, b).
int edge_index(int N, int a, int b);

/// Directed Hamiltonian chains on vertices {0,1,2,3}; 24 of them.
std::vector<std::array<Edge, 3>> directed_chains_4();
/// Undirected Hamiltonian 4-cycles on {0,1,2,3}; 3 of them.
std::vector<std::array<Edge, 4>> loops_4();

/// c * exp(-sum_e rate_e x_e).
struct ExpTerm {
    double coef = 0.0;
    std::array<double, 6> rate{};
};

/// Sum of ExpTerms over the C(N,2) arguments of an N-point function.
struct ExpSum {
    int points = 0;
    std::vector<ExpTerm> terms;

    int arity() const { return points * (points - 1) / 2; }
    double eval(std::span<const double> x) const;
    /// Mixed partial derivative at the origin; orders[e] is the derivative
    /// order in x_e.
    double derivative_at_origin(std::span<const int> orders) const;
};

/// omega_delta^2 = 1 + delta^2 (1+2g tau)^{-n/2} + delta^2 (1+g tau)^{-n}.
double omega_delta_sq(const KernelModelParams& p);

/// Mean of Y: delta (1+g tau)^{-n/2}.
double mean_delta(const KernelModelParams& p);

/// 2-point function of Z at half-squared distance x >= 0.
double rho_model(double x, const KernelModelParams& p);

/// 3-point function of Z; arguments (x12, x13, x23), all >= 0.
double kappa3_model(double x12, double x13, double x23, const KernelModelParams& p);

/// 4-point function of Z; arguments (x12, x13, x14, x23, x24, x34), all >= 0.
double kappa4_model(std::span<const double, 6> x, const KernelModelParams& p,
                    Kappa4Form form = Kappa4Form::complete);

/// Exponential-sum form of the N-point cumulant of Z (N = 2, 3, 4) obtained by
/// enumerating connected Wick pairings of the quadratic construction.
ExpSum wick_cumulant(int N, const KernelModelParams& p);

/// Exponential-sum form of the printed 4-point display.
ExpSum printed_kappa4(const KernelModelParams& p);

/// gamma and the loop-free derivatives, from term-wise differentiation.
CumulantSet analytic_cumulants(const KernelModelParams& p,
                               Kappa4Form form = Kappa4Form::complete);

/// Same quantities from central finite differences of the model functions
/// (one Richardson step), evaluated by analytic continuation across x = 0.
/// Throws std::invalid_argument unless 0 < h < 0.1 / g.
CumulantSet fd_cumulants(const KernelModelParams& p, double h,
                         Kappa4Form form = Kappa4Form::complete);

/// alpha = 2 rho''(0) and beta = rho''(0) - rho'(0)^2 of the model.
struct CurvatureMoments {
    double alpha = 0.0;
    double beta = 0.0;
};
CurvatureMoments curvature_moments(const KernelModelParams& p);

/// alpha > 0 and alpha + n beta > 0.
bool in_positivity_window(const KernelModelParams& p);

}  // namespace mlab
