#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "minkowski/corr_kernel.hpp"
#include "minkowski/field_sim.hpp"

using namespace mlab;

namespace {

struct Moments {
    double mean, se;
};

// Per-realization site averages of f(Z), then mean and standard error over
// realizations; sites within a realization are correlated, realizations are not.
template <class F>
Moments ensemble_site_average(const std::vector<FieldGrid>& fields, F f) {
    std::vector<double> per;
    for (const auto& z : fields) {
        double s = 0.0;
        for (double v : z.values) s += f(v);
        per.push_back(s / static_cast<double>(z.values.size()));
    }
    double m = 0.0;
    for (double p : per) m += p;
    m /= per.size();
    double var = 0.0;
    for (double p : per) var += (p - m) * (p - m);
    var /= per.size() - 1;
    return {m, std::sqrt(var / per.size())};
}

}  // namespace

TEST_CASE("padding and sizes") {
    CHECK(gaussian_padding(50.0, 1.0 / 127.0) == 77);
    CHECK(transform_halo(0.1, 1.0 / 127.0) == 241);
    CHECK(transform_halo(0.0, 0.01) == 0);
    CHECK(fft_size(282) == 288);
    CHECK(fft_size(11) == 12);
    CHECK(fft_size(49) == 49);
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("gaussian field: determinism and validation") {
    const std::array<int, 2> shape{20, 24};
    const std::array<double, 2> h{1.0 / 127, 1.0 / 127};
    const FieldGrid a = sample_gaussian_field(shape, h, 50.0, 99);
    const FieldGrid b = sample_gaussian_field(shape, h, 50.0, 99);
    const FieldGrid c = sample_gaussian_field(shape, h, 50.0, 100);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.values.size() == 480);
    CHECK_NOTHROW(a.validate());
    CHECK_THROWS_AS(sample_gaussian_field(shape, h, 0.0, 1), std::invalid_argument);
    const std::array<int, 2> tiny{1, 5};
    CHECK_THROWS_AS(sample_gaussian_field(tiny, h, 50.0, 1), std::invalid_argument);
    const std::array<double, 2> bad{0.0, 0.1};
    CHECK_THROWS_AS(sample_gaussian_field(shape, bad, 50.0, 1), std::invalid_argument);
}

TEST_CASE("gaussian field: covariance") {
    const double g = 50.0, h = 1.0 / 127.0;
    const std::array<int, 2> shape{16, 16};
    const std::array<double, 2> sp{h, h};
    std::vector<FieldGrid> ens;
    for (int r = 0; r < 500; ++r) ens.push_back(sample_gaussian_field(shape, sp, g, derive_seed(5, r)));

    // Single-site variance and a lag-3 covariance at a fixed pair.
    const std::array<int, 2> s0{8, 8}, s3{8, 11};
    double v = 0, c = 0, v2 = 0, c2 = 0;
    for (const auto& f : ens) {
        const double x = f.values[f.index(s0)], y = f.values[f.index(s3)];
        v += x * x;
        v2 += x * x * x * x;
        c += x * y;
        c2 += x * x * y * y;
    }
    const double R = ens.size();
    v /= R;
    c /= R;
    const double se_v = std::sqrt((v2 / R - v * v) / R);
    const double se_c = std::sqrt((c2 / R - c * c) / R);
    CHECK(std::abs(v - 1.0) < 4 * se_v);
    const double target = std::exp(-g * 9 * h * h / 2);
    CHECK(std::abs(c - target) < 4 * se_c);

    const std::vector<std::vector<int>> lags{{0, 0}, {0, 3}, {3, 0}, {5, 5}};
    const auto est = empirical_covariance(ens, lags);
    CHECK(std::abs(est[0].estimate - 1.0) < 4 * est[0].stderr_);
    for (int k = 1; k < 4; ++k) {
        const double r2 = (lags[k][0] * lags[k][0] + lags[k][1] * lags[k][1]) * h * h;
        CHECK(std::abs(est[k].estimate - std::exp(-g * r2 / 2)) < 4 * est[k].stderr_);
    }
    // Stationarity proxy: same lag, different axes agree within mutual 4 SE.
    CHECK(std::abs(est[1].estimate - est[2].estimate) <
          4 * std::hypot(est[1].stderr_, est[2].stderr_));
}

TEST_CASE("empirical covariance: degenerate inputs") {
    const std::array<int, 1> shape{30};
    const std::array<double, 1> sp{0.02};
    const FieldGrid f = sample_gaussian_field(shape, sp, 20.0, 3);
    const std::vector<FieldGrid> dup{f, f, f};
    const std::vector<std::vector<int>> lag0{{0}};
    const auto e = empirical_covariance(dup, lag0);
    CHECK(e[0].stderr_ == 0.0);
    const std::vector<FieldGrid> one{f};
    CHECK_THROWS_AS(empirical_covariance(one, lag0), std::invalid_argument);
    const std::array<int, 1> other{31};
    const std::vector<FieldGrid> mixed{f, sample_gaussian_field(other, sp, 20.0, 3)};
    CHECK_THROWS_AS(empirical_covariance(mixed, lag0), std::invalid_argument);
    const std::vector<std::vector<int>> huge{{30}};
    CHECK_THROWS_AS(empirical_covariance(dup, huge), std::invalid_argument);
}

TEST_CASE("quadratic transform: identities") {
    const std::array<int, 2> shape{40, 40};
    const std::array<double, 2> sp{0.05, 0.05};
    const FieldGrid x = sample_gaussian_field(shape, sp, 50.0, 12);
    KernelModelParams p{50.0, 0.1, 0.0, 2};
    const FieldGrid z0 = apply_quadratic_transform(x, p, 7);
    CHECK(z0.shape == std::vector<int>{26, 26});
    for (int i = 0; i < 26; ++i)
        for (int j = 0; j < 26; ++j) {
            const std::array<int, 2> a{i, j}, b{i + 7, j + 7};
            CHECK(z0.values[z0.index(a)] == x.values[x.index(b)]);
        }
    // tau = 0: Y = X + delta X^2.
    KernelModelParams q{50.0, 0.0, 0.3, 2};
    const FieldGrid zq = apply_quadratic_transform(x, q, 0);
    const double w = std::sqrt(omega_delta_sq(q));
    for (std::size_t k = 0; k < x.values.size(); k += 37) {
        const double xv = x.values[k];
        CHECK(zq.values[k] == doctest::Approx((xv + 0.3 * xv * xv - 0.3) / w).epsilon(1e-14));
    }
    KernelModelParams neg{50.0, -0.1, 0.3, 2};
    CHECK_THROWS_AS(apply_quadratic_transform(x, neg, 3), std::invalid_argument);
    CHECK_THROWS_AS(apply_quadratic_transform(x, p, 20), std::invalid_argument);
}

TEST_CASE("quadratic transform: continuity in delta") {
    const std::array<int, 2> shape{24, 24};
    const std::array<double, 2> sp{0.05, 0.05};
    auto field = [&](double d) {
        return sample_model_field(shape, sp, KernelModelParams{50.0, 0.1, d, 2}, 77);
    };
    const FieldGrid z0 = field(0.0);
    auto maxdiff = [&](const FieldGrid& z) {
        double m = 0.0;
        for (std::size_t k = 0; k < z.values.size(); ++k) m = std::max(m, std::abs(z.values[k] - z0.values[k]));
        return m;
    };
    // z0 uses no halo, so compare against fields drawn with the same halo.
    const int halo = transform_halo(0.1, 0.05);
    std::array<int, 2> ext{24 + 2 * halo, 24 + 2 * halo};
    const FieldGrid x = sample_gaussian_field(ext, sp, 50.0, 77);
    auto transformed = [&](double d) { return apply_quadratic_transform(x, KernelModelParams{50.0, 0.1, d, 2}, halo); };
    CHECK(field(0.1).values == transformed(0.1).values);
    const FieldGrid base = transformed(0.0);
    auto md = [&](const FieldGrid& z) {
        double m = 0.0;
        for (std::size_t k = 0; k < z.values.size(); ++k) m = std::max(m, std::abs(z.values[k] - base.values[k]));
        return m;
    };
    const double ratio = md(transformed(0.1)) / md(transformed(0.01));
    CHECK(ratio > 7.0);
    CHECK(ratio < 13.0);
    CHECK(maxdiff(z0) == 0.0);
}

TEST_CASE("quadratic transform: standardisation and skewness") {
    const KernelModelParams p{50.0, 0.1, 0.5, 2};
    const std::array<int, 2> shape{32, 32};
    const std::array<double, 2> sp{0.05, 0.05};
    std::vector<FieldGrid> ens;
    for (int r = 0; r < 300; ++r) ens.push_back(sample_model_field(shape, sp, p, derive_seed(41, r)));
    const auto m1 = ensemble_site_average(ens, [](double z) { return z; });
    const auto m2 = ensemble_site_average(ens, [](double z) { return z * z; });
    const auto m3 = ensemble_site_average(ens, [](double z) { return z * z * z; });
    CHECK(std::abs(m1.mean) < 4 * m1.se);
    CHECK(std::abs(m2.mean - 1.0) < 4 * m2.se);
    CHECK(std::abs(m3.mean - kappa3_model(0, 0, 0, p)) < 4 * m3.se);
}

TEST_CASE("site fourth cumulant follows the complete four-point function") {
    // One-dimensional fields give many nearly independent sites cheaply.
    const KernelModelParams p{50.0, 0.1, 0.5, 1};
    const std::array<int, 1> shape{2000};
    const std::array<double, 1> sp{0.05};
    std::vector<FieldGrid> ens;
    for (int r = 0; r < 1000; ++r) ens.push_back(sample_model_field(shape, sp, p, derive_seed(43, r)));
    // E Z = 0 and E Z^2 = 1 by construction, so kappa_4 = E Z^4 - 3.
    const auto m4 = ensemble_site_average(ens, [](double z) { return z * z * z * z - 3.0; });
    const std::array<double, 6> origin{};
    const double complete = kappa4_model(origin, p, Kappa4Form::complete);
    const double printed = kappa4_model(origin, p, Kappa4Form::printed);
    MESSAGE("site kappa4 " << m4.mean << " +- " << m4.se << "; complete " << complete
                           << ", printed " << printed);
    CHECK(std::abs(m4.mean - complete) < 4 * m4.se);
    CHECK(std::abs(m4.mean - printed) > 4 * m4.se);
}

TEST_CASE("binary dump round trip") {
    const std::array<int, 3> shape{4, 5, 6};
    const std::array<double, 3> sp{0.1, 0.2, 0.3};
    const FieldGrid f = sample_gaussian_field(shape, sp, 3.0, 8);
    const auto path = std::filesystem::temp_directory_path() / "mlab_field_roundtrip.bin";
    write_field(path, f);
    CHECK(std::filesystem::file_size(path) == 4 + 4 + 3 * 4 + 3 * 8 + 120 * 8);
    const FieldGrid g = read_field(path);
    CHECK(g.shape == f.shape);
    CHECK(g.spacing == f.spacing);
    CHECK(g.values == f.values);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_field(path), std::runtime_error);
}
