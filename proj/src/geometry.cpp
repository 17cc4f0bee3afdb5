#include "minkowski/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace mlab {

double unit_ball_volume(int d) {
    if (d < 0) throw std::domain_error("unit_ball_volume: negative dimension");
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double unit_sphere_area(int d) {
    if (d < 1) throw std::domain_error("unit_sphere_area: dimension must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double flag_coeff(int k, int d) {
    if (k < 0 || d < 0) throw std::domain_error("flag_coeff: negative argument");
    return std::tgamma(0.5 * (k + d + 1)) * std::tgamma(0.5) /
           (std::tgamma(0.5 * (k + 1)) * std::tgamma(0.5 * (d + 1)));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

LKVector lk_rectangle(std::span<const double> edges) {
    LKVector lk;
    lk.values.assign(edges.size() + 1, 0.0);
    lk.values[0] = 1.0;
    // Expand prod_i (1 + e_i t); coefficient of t^d is L_d.
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double e = edges[i];
        if (!(e > 0.0)) {
            throw std::invalid_argument("lk_rectangle: edge " + std::to_string(i) +
                                        " must be positive");
        }
        for (std::size_t d = i + 1; d >= 1; --d) lk.values[d] += e * lk.values[d - 1];
    }
    return lk;
}

double steiner_tube_volume(const LKVector& lk, double rho) {
    if (rho < 0.0) throw std::invalid_argument("steiner_tube_volume: rho must be >= 0");
    const int n = lk.dim();
    double v = 0.0;
    for (int j = 0; j <= n; ++j) v += unit_ball_volume(n - j) * std::pow(rho, n - j) * lk[j];
    return v;
}

TubeEstimate mc_tube_volume(std::span<const double> edges, double rho, std::int64_t samples,
                            std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("mc_tube_volume: need at least 1000 samples");
    if (rho < 0.0) throw std::invalid_argument("mc_tube_volume: rho must be >= 0");
    const std::size_t n = edges.size();
    double box = 1.0;
    for (double e : edges) {
        if (!(e > 0.0)) throw std::invalid_argument("mc_tube_volume: edges must be positive");
        box *= e + 2.0 * rho;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double rho2 = rho * rho;
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        double dist2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -rho + unit(rng) * (edges[i] + 2.0 * rho);
            const double out = x < 0.0 ? -x : (x > edges[i] ? x - edges[i] : 0.0);
            dist2 += out * out;
        }
        if (dist2 <= rho2) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

}  // namespace mlab
