#pragma once

// Euler characteristic and 2-D Minkowski functionals of lattice excursion
// sets {X >= v}, on the Freudenthal (Kuhn) triangulation of the grid.
//
// Lattice points p, q span an edge iff q - p or p - q lies in {0,1}^n. A set
// of points is a simplex iff it is pairwise adjacent, so the excursion complex
// at v is the full subcomplex on the sites with X >= v. In 2-D every cell is
// cut along the (0,0)-(1,1) diagonal.

#include <cstdint>
#include <span>
#include <vector>

#include "minkowski/field_sim.hpp"

namespace mlab {

struct ECCurve {
    /// Distinct site values, strictly decreasing.
    std::vector<double> thresholds;
    /// chi[i] = Euler characteristic of {X >= thresholds[i]}.
    std::vector<std::int64_t> chi;

    /// chi of {X >= v}: the entry of the smallest threshold >= v, 0 above the max.
    std::int64_t at(double v) const;
};

/// Descending sweep: activating site t adds sum_k (-1)^k times the number of
/// k-simplices through t whose other vertices are already active. Sites of
/// equal value activate together. `periodic` wraps every axis (torus; every
/// extent must then be >= 3). Throws std::invalid_argument on an empty field.
ECCurve ec_curve_sweep(const FieldGrid& field, bool periodic = false);

/// Reference count: enumerate every simplex of every cell, keep those whose
/// vertices all satisfy X >= v, and return the alternating sum over the
/// distinct ones.
std::int64_t ec_bruteforce(const FieldGrid& field, double v, bool periodic = false);

struct MF2D {
    double area = 0.0;
    /// Half the length of the interior iso-contour {X = v}.
    double half_boundary = 0.0;
    std::int64_t chi = 0;
};

/// Area and half boundary length of the piecewise-linear excursion set, in
/// physical units, plus chi from the sweep. Sites with X >= v count as inside.
/// The outer edge of the domain contributes no length.
/// Throws std::invalid_argument unless field.n == 2.
MF2D mf2d_estimate(const FieldGrid& field, double v);

/// Same, reusing a sweep already computed for `field`.
MF2D mf2d_estimate(const FieldGrid& field, double v, const ECCurve& curve);

struct MeanRow {
    double v = 0.0;
    double mean = 0.0;
    /// Standard error of the mean; NaN for a single realization.
    double stderr_ = 0.0;
};

/// Per-threshold mean and standard error of samples[r][i] over realizations r.
/// Throws std::invalid_argument on an empty ensemble or ragged rows.
std::vector<MeanRow> mean_table(std::span<const std::vector<double>> samples,
                                std::span<const double> v_grid);

/// ECCurves resampled at v_grid, then mean_table.
std::vector<MeanRow> mean_curves(std::span<const ECCurve> curves, std::span<const double> v_grid);

}  // namespace mlab
