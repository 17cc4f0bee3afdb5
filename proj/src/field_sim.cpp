#include "minkowski/field_sim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace mlab {

std::size_t FieldGrid::size() const {
    std::size_t s = 1;
    for (int e : shape) s *= static_cast<std::size_t>(e);
    return s;
}

std::size_t FieldGrid::index(std::span<const int> site) const {
    std::size_t k = 0;
    for (int a = 0; a < n; ++a) k = k * static_cast<std::size_t>(shape[a]) + site[a];
    return k;
}

void FieldGrid::validate() const {
    if (n < 1 || n > 3) throw std::invalid_argument("field: dimension must be 1, 2 or 3");
    if (static_cast<int>(shape.size()) != n || static_cast<int>(spacing.size()) != n)
        throw std::invalid_argument("field: shape/spacing length differs from dimension");
    for (int a = 0; a < n; ++a) {
        if (shape[a] < 2) throw std::invalid_argument("field: every extent must be >= 2");
        if (!(spacing[a] > 0.0)) throw std::invalid_argument("field: spacing must be > 0");
    }
    if (values.size() != size()) throw std::invalid_argument("field: value count mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite value");
}

bool FieldGrid::same_geometry(const FieldGrid& o) const {
    return n == o.n && shape == o.shape && spacing == o.spacing;
}

int gaussian_padding(double g, double spacing) {
    return static_cast<int>(std::ceil(6.0 / std::sqrt(2.0 * g) / spacing));
}

int transform_halo(double tau, double spacing) {
    if (tau == 0.0) return 0;
    return static_cast<int>(std::ceil(6.0 * std::sqrt(tau) / spacing));
}

int fft_size(int m) {
    for (int k = std::max(m, 1);; ++k) {
        int r = k;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return k;
    }
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(base_seed) ^ index);
}

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Circular convolution of `data` with `kernel` on a grid of extents `dims`;
// both arrays are row-major of the same size. Result replaces `data`.
void circular_convolve(std::vector<double>& data, const std::vector<double>& kernel,
                       const std::vector<int>& dims) {
    const int rank = static_cast<int>(dims.size());
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    const std::size_t half = total / dims.back() * (dims.back() / 2 + 1);

    double* real = fftw_alloc_real(total);
    fftw_complex* a = fftw_alloc_complex(half);
    fftw_complex* b = fftw_alloc_complex(half);
    fftw_plan fwd, inv;
    {
        std::lock_guard lock(planner_mutex());
        fwd = fftw_plan_dft_r2c(rank, dims.data(), real, a, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r(rank, dims.data(), a, real, FFTW_ESTIMATE);
    }
    std::copy(kernel.begin(), kernel.end(), real);
    fftw_execute_dft_r2c(fwd, real, b);
    std::copy(data.begin(), data.end(), real);
    fftw_execute_dft_r2c(fwd, real, a);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t k = 0; k < half; ++k) {
        const double re = a[k][0] * b[k][0] - a[k][1] * b[k][1];
        const double im = a[k][0] * b[k][1] + a[k][1] * b[k][0];
        a[k][0] = re * scale;
        a[k][1] = im * scale;
    }
    fftw_execute_dft_c2r(inv, a, real);
    std::copy(real, real + total, data.begin());
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    fftw_free(real);
    fftw_free(a);
    fftw_free(b);
}

// Separable kernel prod_a w_a(j_a) placed with wrap-around on `dims`;
// w_a is supported on |j| <= radius[a].
std::vector<double> separable_kernel(const std::vector<int>& dims, const std::vector<int>& radius,
                                     const std::vector<std::vector<double>>& taps) {
    const int rank = static_cast<int>(dims.size());
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    std::vector<double> k(total, 0.0);
    std::vector<int> j(rank, 0);
    // Walk the support box only.
    std::vector<int> off(rank);
    for (int a = 0; a < rank; ++a) off[a] = -radius[a];
    while (true) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int a = 0; a < rank; ++a) {
            w *= taps[a][off[a] + radius[a]];
            const int wrapped = (off[a] % dims[a] + dims[a]) % dims[a];
            idx = idx * dims[a] + wrapped;
        }
        k[idx] += w;
        int a = rank - 1;
        while (a >= 0 && ++off[a] > radius[a]) {
            off[a] = -radius[a];
            --a;
        }
        if (a < 0) break;
    }
    return k;
}

std::vector<double> gaussian_taps(int radius, double spacing, double variance) {
    std::vector<double> t(2 * radius + 1);
    for (int j = -radius; j <= radius; ++j) {
        const double r = j * spacing;
        t[j + radius] = std::exp(-r * r / (2.0 * variance));
    }
    return t;
}

// Copy the box [lo, lo + out_shape) of a row-major array with extents `dims`.
std::vector<double> crop(const std::vector<double>& src, const std::vector<int>& dims,
                         const std::vector<int>& lo, const std::vector<int>& out_shape) {
    const int rank = static_cast<int>(dims.size());
    std::size_t total = 1;
    for (int e : out_shape) total *= static_cast<std::size_t>(e);
    std::vector<double> out;
    out.reserve(total);
    std::vector<int> i(rank, 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t idx = 0;
        for (int a = 0; a < rank; ++a) idx = idx * dims[a] + (i[a] + lo[a]);
        out.push_back(src[idx]);
        for (int a = rank - 1; a >= 0; --a) {
            if (++i[a] < out_shape[a]) break;
            i[a] = 0;
        }
    }
    return out;
}

void check_geometry(std::span<const int> shape, std::span<const double> spacing) {
    if (shape.empty() || shape.size() > 3)
        throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
    if (spacing.size() != shape.size())
        throw std::invalid_argument("grid: spacing and shape differ in length");
    for (std::size_t a = 0; a < shape.size(); ++a) {
        if (shape[a] < 2) throw std::invalid_argument("grid: every extent must be >= 2");
        if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
            throw std::invalid_argument("grid: spacing must be > 0");
    }
}

}  // namespace

FieldGrid sample_gaussian_field(std::span<const int> shape, std::span<const double> spacing,
                                double g, std::uint64_t seed) {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("sample_gaussian_field: g must be > 0");
    check_geometry(shape, spacing);
    const int rank = static_cast<int>(shape.size());
    const double variance = 1.0 / (2.0 * g);

    std::vector<int> pad(rank), dims(rank);
    std::vector<std::vector<double>> taps(rank);
    double norm2 = 1.0;
    for (int a = 0; a < rank; ++a) {
        pad[a] = gaussian_padding(g, spacing[a]);
        dims[a] = fft_size(shape[a] + 2 * pad[a]);
        taps[a] = gaussian_taps(pad[a], spacing[a], variance);
        double s = 0.0;
        for (double t : taps[a]) s += t * t;
        norm2 *= s;
    }
    std::vector<double> kernel = separable_kernel(dims, pad, taps);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& k : kernel) k *= inv;

    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    std::vector<double> noise(total);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& w : noise) w = normal(rng);

    circular_convolve(noise, kernel, dims);

    FieldGrid f;
    f.n = rank;
    f.shape.assign(shape.begin(), shape.end());
    f.spacing.assign(spacing.begin(), spacing.end());
    f.values = crop(noise, dims, pad, f.shape);
    return f;
}

FieldGrid apply_quadratic_transform(const FieldGrid& x, const KernelModelParams& p, int halo) {
    if (!(p.tau >= 0.0)) throw std::invalid_argument("apply_quadratic_transform: tau must be >= 0");
    if (halo < 0) throw std::invalid_argument("apply_quadratic_transform: negative halo");
    x.validate();
    const int rank = x.n;
    std::vector<int> out_shape(rank), lo(rank, halo);
    for (int a = 0; a < rank; ++a) {
        out_shape[a] = x.shape[a] - 2 * halo;
        if (out_shape[a] < 2)
            throw std::invalid_argument("apply_quadratic_transform: halo leaves fewer than 2 sites");
    }

    std::vector<double> s;
    if (p.tau == 0.0 || p.delta == 0.0) {
        s = x.values;
    } else {
        // Radius `halo` keeps every cropped output clear of the wrap.
        std::vector<int> dims(rank), radius(rank, halo);
        std::vector<std::vector<double>> taps(rank);
        double cell = 1.0;
        for (int a = 0; a < rank; ++a) {
            dims[a] = fft_size(x.shape[a]);
            taps[a] = gaussian_taps(halo, x.spacing[a], p.tau);
            cell *= x.spacing[a] / std::sqrt(2.0 * std::numbers::pi * p.tau);
        }
        std::vector<double> kernel = separable_kernel(dims, radius, taps);
        for (double& k : kernel) k *= cell;
        std::size_t total = 1;
        for (int d : dims) total *= static_cast<std::size_t>(d);
        s.assign(total, 0.0);
        // Embed x at the origin of the (possibly larger) FFT grid.
        std::vector<int> i(rank, 0);
        for (std::size_t k = 0; k < x.values.size(); ++k) {
            std::size_t idx = 0;
            for (int a = 0; a < rank; ++a) idx = idx * dims[a] + i[a];
            s[idx] = x.values[k];
            for (int a = rank - 1; a >= 0; --a) {
                if (++i[a] < x.shape[a]) break;
                i[a] = 0;
            }
        }
        circular_convolve(s, kernel, dims);
        s = crop(s, dims, std::vector<int>(rank, 0), x.shape);
    }

    const double m = mean_delta(p);
    const double w = std::sqrt(omega_delta_sq(p));
    FieldGrid z;
    z.n = rank;
    z.shape = out_shape;
    z.spacing = x.spacing;
    const std::vector<double> xc = crop(x.values, x.shape, lo, out_shape);
    const std::vector<double> sc = crop(s, x.shape, lo, out_shape);
    z.values.resize(xc.size());
    for (std::size_t k = 0; k < xc.size(); ++k)
        z.values[k] = (xc[k] + p.delta * xc[k] * sc[k] - m) / w;
    return z;
}

FieldGrid sample_model_field(std::span<const int> shape, std::span<const double> spacing,
                             const KernelModelParams& p, std::uint64_t seed) {
    p.validate();
    check_geometry(shape, spacing);
    if (static_cast<int>(shape.size()) != p.n)
        throw std::invalid_argument("sample_model_field: model.n differs from grid dimension");
    int halo = 0;
    if (p.delta != 0.0)
        for (double h : spacing) halo = std::max(halo, transform_halo(p.tau, h));
    std::vector<int> ext(shape.begin(), shape.end());
    for (int& e : ext) e += 2 * halo;
    const FieldGrid x = sample_gaussian_field(ext, spacing, p.g, seed);
    return apply_quadratic_transform(x, p, halo);
}

std::vector<CovarianceEstimate> empirical_covariance(std::span<const FieldGrid> fields,
                                                     std::span<const std::vector<int>> lags) {
    if (fields.size() < 2) throw std::invalid_argument("empirical_covariance: need >= 2 fields");
    const FieldGrid& f0 = fields.front();
    for (const auto& f : fields)
        if (!f.same_geometry(f0) || f.values.size() != f0.size())
            throw std::invalid_argument("empirical_covariance: geometry mismatch");
    const std::size_t R = fields.size();
    const std::size_t S = f0.size();
    std::vector<double> mean(S, 0.0);
    for (const auto& f : fields)
        for (std::size_t k = 0; k < S; ++k) mean[k] += f.values[k];
    for (double& m : mean) m /= static_cast<double>(R);

    std::vector<CovarianceEstimate> out;
    for (const auto& lag : lags) {
        if (static_cast<int>(lag.size()) != f0.n)
            throw std::invalid_argument("empirical_covariance: lag dimension mismatch");
        std::vector<int> lo(f0.n), hi(f0.n);
        for (int a = 0; a < f0.n; ++a) {
            lo[a] = std::max(0, -lag[a]);
            hi[a] = f0.shape[a] - std::max(0, lag[a]);
            if (hi[a] <= lo[a]) throw std::invalid_argument("empirical_covariance: lag exceeds grid");
        }
        std::vector<double> per(R, 0.0);
        std::size_t pairs = 0;
        std::vector<int> s(lo), t(f0.n);
        while (true) {
            for (int a = 0; a < f0.n; ++a) t[a] = s[a] + lag[a];
            const std::size_t i = f0.index(s), j = f0.index(t);
            for (std::size_t r = 0; r < R; ++r)
                per[r] += (fields[r].values[i] - mean[i]) * (fields[r].values[j] - mean[j]);
            ++pairs;
            int a = f0.n - 1;
            while (a >= 0 && ++s[a] >= hi[a]) {
                s[a] = lo[a];
                --a;
            }
            if (a < 0) break;
        }
        const double scale = static_cast<double>(R) / static_cast<double>(R - 1) /
                             static_cast<double>(pairs);
        double m = 0.0;
        for (double& c : per) m += (c *= scale);
        m /= static_cast<double>(R);
        double v = 0.0;
        for (double c : per) v += (c - m) * (c - m);
        v /= static_cast<double>(R - 1);
        out.push_back({lag, m, std::sqrt(v / static_cast<double>(R))});
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'M', 'K', 'F', 'D'};

template <class T>
void put_le(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const FieldGrid& f) {
    f.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(kMagic, 4);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.n));
    for (int e : f.shape) put_le<std::uint32_t>(os, static_cast<std::uint32_t>(e));
    for (double h : f.spacing) put_le<double>(os, h);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

FieldGrid read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path.string() + ": not a field dump");
    FieldGrid f;
    f.n = static_cast<int>(get_le<std::uint32_t>(is));
    if (f.n < 1 || f.n > 3) throw std::runtime_error(path.string() + ": bad dimension");
    for (int a = 0; a < f.n; ++a) f.shape.push_back(static_cast<int>(get_le<std::uint32_t>(is)));
    for (int a = 0; a < f.n; ++a) f.spacing.push_back(get_le<double>(is));
    f.values.resize(f.size());
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error(path.string() + ": truncated");
    f.validate();
    return f;
}

}  // namespace mlab
