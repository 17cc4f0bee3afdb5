#include "minkowski/ec_theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "minkowski/hermite.hpp"

namespace mlab {

CumulantSet CumulantSet::gaussian(double gamma) {
    CumulantSet c;
    c.gamma = gamma;
    return c;
}

void CumulantSet::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("cumulants: gamma must be positive and finite");
    }
    for (double v : {k0, k1, k11, K0, K1, K11a, K11aa, K111a, K111d}) {
        if (!std::isfinite(v)) throw std::invalid_argument("cumulants: non-finite entry");
    }
}

std::string_view correction_name(Correction c) {
    switch (c) {
        case Correction::none: return "gaussian";
        case Correction::skewness: return "skewness";
        case Correction::skewness_kurtosis: return "skewness+kurtosis";
    }
    return "?";
}

Correction parse_correction(std::string_view s) {
    if (s == "gaussian" || s == "none") return Correction::none;
    if (s == "skewness") return Correction::skewness;
    if (s == "skewness+kurtosis" || s == "full") return Correction::skewness_kurtosis;
    throw std::invalid_argument("unknown correction level '" + std::string(s) + "'");
}

namespace {

// coef * He_k(x), where a vanishing polynomial prefactor makes negative k harmless.
double hterm(double coef, int k, double x) {
    if (coef == 0.0) return 0.0;
    return coef * hermite(k, x);
}

}  // namespace

double delta1(int n, double x, const CumulantSet& c) {
    const double g = c.gamma;
    const double nn = n;
    return hterm(0.5 / (g * g) * c.k11 * nn * (nn - 1.0), n - 2, x) -
           hterm(0.5 / g * c.k1 * nn, n, x) + hterm(c.k0 / 6.0, n + 2, x);
}

double delta2(int n, double x, const CumulantSet& c) {
    const double g = c.gamma;
    const double g2 = g * g;
    const double g3 = g2 * g;
    const double g4 = g2 * g2;
    const double nn = n;

    const double a3 = (-(3.0 * c.K111a + c.K111d) / (6.0 * g3) +
                       c.k11 * c.k11 * (nn - 7.0) / (8.0 * g4)) *
                      nn * (nn - 1.0) * (nn - 2.0);
    const double a1 = ((c.K11aa * (nn - 2.0) + 4.0 * c.K11a * (nn - 1.0)) / (8.0 * g2) -
                       c.k1 * c.k11 * (nn - 1.0) * (nn - 4.0) / (4.0 * g3)) *
                      nn;
    const double b1 = (-c.K1 / (4.0 * g) +
                       (3.0 * c.k1 * c.k1 * (nn - 2.0) + 2.0 * c.k0 * c.k11 * (nn - 1.0)) /
                           (24.0 * g2)) *
                      nn;
    const double b3 = c.K0 / 24.0 - c.k0 * c.k1 * nn / (12.0 * g);
    const double b5 = c.k0 * c.k0 / 72.0;

    return hterm(a3, n - 3, x) + hterm(a1, n - 1, x) + hterm(b1, n + 1, x) +
           hterm(b3, n + 3, x) + hterm(b5, n + 5, x);
}

double ec_density(int n, double x, const CumulantSet& c, Correction level) {
    if (n < 0) throw std::domain_error("ec_density: negative dimension");
    double corr = 0.0;
    if (level != Correction::none) corr += delta1(n, x, c);
    if (level == Correction::skewness_kurtosis) corr += delta2(n, x, c);
    if (n == 0) {
        // phi * He_{-1} is the upper tail; never form the Mills ratio itself,
        // it overflows far below the mean.
        return gaussian_tail(x) + gaussian_pdf(x) * corr;
    }
    const double scale = std::pow(c.gamma / (2.0 * std::numbers::pi), 0.5 * n);
    return scale * gaussian_pdf(x) * (hermite(n - 1, x) + corr);
}

double expected_ec(const LKVector& lk, double v, const CumulantSet& c, Correction level) {
    double sum = 0.0;
    for (int d = 0; d <= lk.dim(); ++d) sum += lk[d] * ec_density(d, v, c, level);
    return sum;
}

double expected_lk_excursion(int k, const LKVector& lk, double v, const CumulantSet& c,
                             Correction level) {
    const int n = lk.dim();
    if (k < 0 || k > n) {
        throw std::out_of_range("expected_lk_excursion: k=" + std::to_string(k) +
                                " outside [0, " + std::to_string(n) + "]");
    }
    double sum = 0.0;
    for (int d = 0; d <= n - k; ++d)
        sum += flag_coeff(k, d) * lk[k + d] * ec_density(d, v, c, level);
    return sum;
}

double expected_minkowski(int k, const LKVector& lk, double v, const CumulantSet& c,
                          Correction level) {
    const int n = lk.dim();
    return unit_ball_volume(n - k) * expected_lk_excursion(k, lk, v, c, level) / binomial(n, k);
}

double local_power_shift(int k, const LKVector& lk, double v, const CumulantSet& c) {
    const int n = lk.dim();
    if (k < 0 || k > n) throw std::out_of_range("local_power_shift: k outside [0, n]");
    double sum = 0.0;
    for (int d = 0; d <= n - k; ++d) {
        sum += flag_coeff(k, d) * lk[k + d] *
               std::pow(c.gamma / (2.0 * std::numbers::pi), 0.5 * d) * gaussian_pdf(v) *
               delta1(d, v, c);
    }
    return sum;
}

double tn_statistic(std::span<const double> sample, double null_mean, double null_sd) {
    if (sample.empty()) throw std::invalid_argument("tn_statistic: empty sample");
    if (!(null_sd > 0.0)) throw std::invalid_argument("tn_statistic: null sd must be positive");
    double s = 0.0;
    for (double x : sample) s += (x - null_mean) / null_sd;
    return s / std::sqrt(static_cast<double>(sample.size()));
}

}  // namespace mlab
