#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "minkowski/ec_theory.hpp"
#include "minkowski/hermite.hpp"

using namespace mlab;
using std::numbers::pi;

namespace {

LKVector unit_square() {
    const std::vector<double> e{1.0, 1.0};
    return lk_rectangle(e);
}

CumulantSet sample_set() {
    CumulantSet c;
    c.gamma = 3.0;
    c.k0 = 0.3;
    c.k1 = -0.7;
    c.k11 = 1.1;
    c.K0 = 0.2;
    c.K1 = -0.4;
    c.K11a = 0.9;
    c.K11aa = 1.3;
    c.K111a = -2.1;
    c.K111d = 0.6;
    return c;
}

}  // namespace

TEST_CASE("first-order term") {
    const CumulantSet zero = CumulantSet::gaussian(2.0);
    for (int n = 0; n <= 4; ++n) CHECK(delta1(n, 0.7, zero) == 0.0);
    CumulantSet c = CumulantSet::gaussian(1.0);
    c.k0 = 0.1;
    CHECK(delta1(2, 0.0, c) == doctest::Approx(0.05).epsilon(1e-15));
    const CumulantSet s = sample_set();
    CHECK(delta1(0, 1.7, s) == doctest::Approx(s.k0 / 6.0 * hermite(2, 1.7)).epsilon(1e-15));
}

TEST_CASE("second-order term") {
    CHECK(delta2(3, 0.4, CumulantSet::gaussian(1.0)) == 0.0);
    CumulantSet c = CumulantSet::gaussian(1.0);
    c.k0 = 0.1;
    CHECK(delta2(2, 0.0, c) == doctest::Approx(0.0).epsilon(1e-15));
    CumulantSet d = CumulantSet::gaussian(2.0);
    d.k11 = 4.0 * 0.3;
    CHECK(delta2(1, 1.0, d) == 0.0);
    // Hand evaluation for n=2, x=0.5 of the sample set.
    const CumulantSet s = sample_set();
    const double g = s.gamma, x = 0.5;
    const double a1 = ((s.K11aa * 0.0 + 4.0 * s.K11a * 1.0) / (8 * g * g) -
                       s.k1 * s.k11 * 1.0 * (-2.0) / (4 * g * g * g)) * 2.0;
    const double b1 = (-s.K1 / (4 * g) + (0.0 + 2 * s.k0 * s.k11 * 1.0) / (24 * g * g)) * 2.0;
    const double b3 = s.K0 / 24 - s.k0 * s.k1 * 2.0 / (12 * g);
    const double b5 = s.k0 * s.k0 / 72;
    const double ref = a1 * hermite(1, x) + b1 * hermite(3, x) + b3 * hermite(5, x) +
                       b5 * hermite(7, x);
    CHECK(delta2(2, x, s) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("density values") {
    const CumulantSet g50 = CumulantSet::gaussian(50.0);
    CHECK(ec_density(2, 1.0, g50) == doctest::Approx(1.9255418445374472).epsilon(1e-14));
    CHECK(ec_density(1, 1.0, g50) == doctest::Approx(0.68258681148602174).epsilon(1e-14));
    CHECK(ec_density(0, 1.3, g50) == doctest::Approx(gaussian_tail(1.3)).epsilon(1e-15));
    CHECK(ec_density(1, 0.0, CumulantSet::gaussian(1.0)) ==
          doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-15));
    CHECK_THROWS_AS(ec_density(-1, 0.0, g50), std::domain_error);
}

TEST_CASE("expected Euler characteristic") {
    const CumulantSet g50 = CumulantSet::gaussian(50.0);
    const std::vector<double> point_edges{};
    CHECK(expected_ec(unit_square(), 1.0, g50) == doctest::Approx(3.4493707214409477).epsilon(1e-14));
    CHECK(expected_ec(unit_square(), -40.0, g50) == doctest::Approx(1.0).epsilon(1e-15));
    LKVector point;
    point.values = {1.0};
    CHECK(expected_ec(point, 0.8, g50) == doctest::Approx(gaussian_tail(0.8)).epsilon(1e-15));
}

TEST_CASE("expected curvatures of excursions") {
    const CumulantSet g50 = CumulantSet::gaussian(50.0);
    const auto sq = unit_square();
    for (double v : {-2.0, 0.0, 0.3, 2.5}) {
        const auto s = sample_set();
        CHECK(expected_lk_excursion(0, sq, v, s) == expected_ec(sq, v, s));
        CHECK(expected_lk_excursion(2, sq, v, g50) ==
              doctest::Approx(gaussian_tail(v)).epsilon(1e-15));
    }
    CHECK(expected_lk_excursion(1, sq, 0.0, g50) ==
          doctest::Approx(1.0 + std::sqrt(50.0) / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(expected_lk_excursion(3, sq, 0.0, g50), std::out_of_range);
    CHECK_THROWS_AS(expected_lk_excursion(-1, sq, 0.0, g50), std::out_of_range);
    // Minkowski normalisation: M_{n-k} = omega_{n-k} L_k / binom(n, k).
    CHECK(expected_minkowski(0, sq, 0.4, g50) ==
          doctest::Approx(pi * expected_ec(sq, 0.4, g50)).epsilon(1e-14));
    CHECK(expected_minkowski(2, sq, 0.4, g50) ==
          doctest::Approx(gaussian_tail(0.4)).epsilon(1e-14));
}

TEST_CASE("gaussian reduction") {
    for (double gamma : {0.5, 1.0, 50.0})
        for (int n = 1; n <= 6; ++n)
            for (double x = -4.0; x <= 4.0; x += 0.25) {
                const double ref = std::pow(gamma / (2 * pi), 0.5 * n) * gaussian_pdf(x) *
                                   hermite(n - 1, x);
                CHECK(std::abs(ec_density(n, x, CumulantSet::gaussian(gamma)) - ref) <= 1e-12);
            }
}

TEST_CASE("correction levels") {
    const auto s = sample_set();
    const double x = 0.9;
    const double scale = s.gamma / (2 * pi) * gaussian_pdf(x);
    CHECK(ec_density(2, x, s, Correction::none) ==
          doctest::Approx(scale * hermite(1, x)).epsilon(1e-15));
    CHECK(ec_density(2, x, s, Correction::skewness) ==
          doctest::Approx(scale * (hermite(1, x) + delta1(2, x, s))).epsilon(1e-14));
    CHECK(ec_density(2, x, s, Correction::skewness_kurtosis) ==
          doctest::Approx(scale * (hermite(1, x) + delta1(2, x, s) + delta2(2, x, s)))
              .epsilon(1e-14));
    CHECK(parse_correction("skewness+kurtosis") == Correction::skewness_kurtosis);
    CHECK(parse_correction("gaussian") == Correction::none);
    CHECK(correction_name(Correction::skewness) == "skewness");
    CHECK_THROWS_AS(parse_correction("kurtosis"), std::invalid_argument);
}

TEST_CASE("linearity") {
    CumulantSet a = CumulantSet::gaussian(2.0), b = a, ab = a;
    a.k0 = 0.2; a.k1 = -0.1; a.k11 = 0.4;
    b.k0 = -0.5; b.k1 = 0.3; b.k11 = 0.7;
    ab.k0 = a.k0 + b.k0; ab.k1 = a.k1 + b.k1; ab.k11 = a.k11 + b.k11;
    for (int n = 0; n <= 3; ++n)
        CHECK(delta1(n, 0.6, ab) == doctest::Approx(delta1(n, 0.6, a) + delta1(n, 0.6, b)));

    CumulantSet base = sample_set(), p = base, q = base, pq = base;
    p.K0 = 0.5; p.K1 = 0.2; p.K11a = -0.3; p.K11aa = 0.1; p.K111a = 0.7; p.K111d = -0.2;
    q.K0 = -0.1; q.K1 = 0.6; q.K11a = 0.2; q.K11aa = -0.8; q.K111a = 0.3; q.K111d = 0.9;
    pq.K0 = p.K0 + q.K0; pq.K1 = p.K1 + q.K1; pq.K11a = p.K11a + q.K11a;
    pq.K11aa = p.K11aa + q.K11aa; pq.K111a = p.K111a + q.K111a; pq.K111d = p.K111d + q.K111d;
    base.K0 = base.K1 = base.K11a = base.K11aa = base.K111a = base.K111d = 0.0;
    for (int n = 0; n <= 4; ++n) {
        const double lhs = delta2(n, -0.4, pq) - delta2(n, -0.4, base);
        const double rhs = (delta2(n, -0.4, p) - delta2(n, -0.4, base)) +
                           (delta2(n, -0.4, q) - delta2(n, -0.4, base));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("monotone far tail") {
    const CumulantSet g = CumulantSet::gaussian(50.0);
    double prev = expected_ec(unit_square(), 4.0, g);
    CHECK(prev > 0.0);
    for (double v = 4.1; v <= 8.0; v += 0.1) {
        const double cur = expected_ec(unit_square(), v, g);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("local power shift") {
    const auto sq = unit_square();
    CHECK(local_power_shift(0, sq, 0.3, CumulantSet::gaussian(5.0)) == 0.0);
    const auto s = sample_set();
    CHECK(local_power_shift(2, sq, 0.3, s) ==
          doctest::Approx(gaussian_pdf(0.3) * s.k0 / 6.0 * hermite(2, 0.3)).epsilon(1e-14));
    LKVector point;
    point.values = {1.0};
    CHECK(local_power_shift(0, point, -0.8, s) ==
          doctest::Approx(gaussian_pdf(-0.8) * s.k0 / 6.0 * hermite(2, -0.8)).epsilon(1e-14));
    // Matches the first-order part of the expected curvature.
    for (int k = 0; k <= 2; ++k) {
        const double diff = expected_lk_excursion(k, sq, 0.7, s, Correction::skewness) -
                            expected_lk_excursion(k, sq, 0.7, s, Correction::none);
        CHECK(local_power_shift(k, sq, 0.7, s) == doctest::Approx(diff).epsilon(1e-12));
    }
}

TEST_CASE("T_N statistic") {
    const std::vector<double> same{2.0, 2.0, 2.0};
    CHECK(tn_statistic(same, 2.0, 0.5) == 0.0);
    const std::vector<double> one{3.0};
    CHECK(tn_statistic(one, 1.0, 2.0) == doctest::Approx(1.0));
    const std::vector<double> four{1.5, 1.5, 0.5, 1.5};
    CHECK(tn_statistic(four, 1.0, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(tn_statistic(four, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tn_statistic(std::vector<double>{}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("cumulant validation") {
    CumulantSet c = CumulantSet::gaussian(0.0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.gamma = 1.0;
    c.K1 = NAN;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
