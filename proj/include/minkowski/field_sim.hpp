#pragma once

// Lattice synthesis of smooth Gaussian fields and of the quadratic
// non-Gaussian transform, by FFT convolution on padded grids.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "minkowski/corr_kernel.hpp"

namespace mlab {

/// Values on a rectangular lattice, row-major with the last axis fastest.
/// Site i along axis a sits at physical coordinate i * spacing[a].
struct FieldGrid {
    int n = 0;
    std::vector<int> shape;
    std::vector<double> spacing;
    std::vector<double> values;

    std::size_t size() const;
    /// Row-major offset of a multi-index.
    std::size_t index(std::span<const int> site) const;
    /// Throws std::invalid_argument if the geometry is malformed or a value
    /// is not finite.
    void validate() const;
    bool same_geometry(const FieldGrid& other) const;
};

/// ceil(6 sigma / spacing) with sigma = 1 / sqrt(2 g).
int gaussian_padding(double g, double spacing);

/// ceil(6 sqrt(tau) / spacing); 0 when tau == 0.
int transform_halo(double tau, double spacing);

/// Smallest integer >= m with no prime factor above 7.
int fft_size(int m);

/// Seed of realization `index` in an ensemble; splitmix64 of the pair.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

/// Gaussian field with covariance exp(-g r^2 / 2): white noise on a padded
/// grid smoothed by a Gaussian of variance 1 / (2 g) per axis, the kernel
/// normalised so that every site has unit variance, padding cropped.
/// Throws std::invalid_argument for g <= 0, dims outside 1..3, an extent < 2,
/// or a nonpositive spacing.
FieldGrid sample_gaussian_field(std::span<const int> shape, std::span<const double> spacing,
                                double g, std::uint64_t seed);

/// Z = (X + delta X (X conv h_tau) - m_delta) / omega_delta with analytic
/// m_delta and omega_delta. `halo` sites are cropped from every side so that
/// the convolution never sees the grid edge; the result has shape
/// x.shape - 2 halo. tau == 0 gives Y = X + delta X^2.
/// Throws std::invalid_argument for tau < 0 or a halo that leaves < 2 sites.
FieldGrid apply_quadratic_transform(const FieldGrid& x, const KernelModelParams& p, int halo);

/// Sample of Z on `shape`: X is drawn with a transform_halo margin, then
/// transformed and cropped. p.n must equal shape.size().
FieldGrid sample_model_field(std::span<const int> shape, std::span<const double> spacing,
                             const KernelModelParams& p, std::uint64_t seed);

struct CovarianceEstimate {
    std::vector<int> lag;
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// Ensemble covariance at lattice offsets: per realization the average over
/// all site pairs (s, s + lag) of the product of deviations from the per-site
/// ensemble mean, scaled by R / (R - 1); mean and standard error over the R
/// realizations. Throws std::invalid_argument for fewer than 2 fields, a
/// geometry mismatch, or a lag that does not fit in the grid.
std::vector<CovarianceEstimate> empirical_covariance(std::span<const FieldGrid> fields,
                                                     std::span<const std::vector<int>> lags);

/// Flat binary dump: "MKFD", u32 dims, u32 shape[dims], f64 spacing[dims],
/// f64 values[], all little-endian. Throws std::runtime_error on I/O failure.
void write_field(const std::filesystem::path& path, const FieldGrid& f);
FieldGrid read_field(const std::filesystem::path& path);

}  // namespace mlab
