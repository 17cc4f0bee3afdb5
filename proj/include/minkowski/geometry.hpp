#pragma once

// Intrinsic volumes of rectangular index sets and the tube-volume identities
// that tie them together.

#include <cstdint>
#include <span>
#include <vector>

namespace mlab {

/// Lipschitz-Killing curvatures L_0..L_n of a set in R^n.
struct LKVector {
    std::vector<double> values;

    int dim() const { return static_cast<int>(values.size()) - 1; }
    double operator[](int d) const { return values.at(static_cast<std::size_t>(d)); }
};

/// omega_d = pi^{d/2} / Gamma(d/2 + 1). Throws std::domain_error for d < 0.
double unit_ball_volume(int d);

/// Omega_d = 2 pi^{d/2} / Gamma(d/2), the area of S^{d-1}. Throws for d < 1.
double unit_sphere_area(int d);

/// Crofton flag coefficient Gamma((k+d+1)/2) Gamma(1/2) / (Gamma((k+1)/2) Gamma((d+1)/2)).
double flag_coeff(int k, int d);

double binomial(int n, int k);

/// L_d of the box [0,e_1] x ... x [0,e_n]: the d-th elementary symmetric
/// polynomial of the edges. Throws std::invalid_argument on a nonpositive edge.
LKVector lk_rectangle(std::span<const double> edges);

/// sum_j omega_{n-j} rho^{n-j} L_j. Throws std::invalid_argument for rho < 0.
double steiner_tube_volume(const LKVector& lk, double rho);

struct TubeEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// Hit-or-miss estimate of Vol(Tube(box, rho)) inside the bounding box
/// [-rho, e_i + rho]. Throws std::invalid_argument for samples < 1000.
TubeEstimate mc_tube_volume(std::span<const double> edges, double rho, std::int64_t samples,
                            std::uint64_t seed);

}  // namespace mlab
