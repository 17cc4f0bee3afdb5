#include "minkowski/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mlab {

double gaussian_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double gaussian_tail(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double hermite(int k, double x) {
    if (k < -1) {
        throw std::domain_error("hermite: degree must be >= -1, got " + std::to_string(k));
    }
    if (k == -1) {
        const double pdf = gaussian_pdf(x);
        if (pdf == 0.0) {
            // Both underflow; the Mills ratio tends to 1/x for large x.
            return x > 0.0 ? 1.0 / x : INFINITY;
        }
        return gaussian_tail(x) / pdf;
    }
    if (k == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int j = 1; j < k; ++j) {
        const double next = x * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_tail_integral(int k, double x) {
    if (k < 0) {
        throw std::domain_error("hermite_tail_integral: degree must be >= 0, got " +
                                std::to_string(k));
    }
    if (k == 0) return gaussian_tail(x);
    return hermite(k - 1, x) * gaussian_pdf(x);
}

}  // namespace mlab
