#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace mlab {

/// Determinant of a row-major n x n matrix by partial-pivot elimination.
inline double determinant(std::vector<double> a, int n) {
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            det = -det;
        }
        const double p = a[c * n + c];
        det *= p;
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / p;
            for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        }
    }
    return det;
}

}  // namespace mlab
