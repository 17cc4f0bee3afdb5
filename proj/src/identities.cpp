#include "minkowski/identities.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "minkowski/linalg.hpp"

namespace mlab {

std::vector<Rational> identity_sample_points(int n) {
    std::vector<Rational> xs;
    for (int j = 0; j <= n; ++j) xs.emplace_back(2 * j - n, 3);
    for (auto& x : xs) x.canonicalize();
    return xs;
}

Rational hermite_exact(int k, const Rational& x) {
    if (k < 0) throw std::domain_error("hermite_exact: degree must be >= 0");
    if (k == 0) return 1;
    Rational prev = 1;
    Rational cur = x;
    for (int j = 1; j < k; ++j) {
        Rational next = x * cur - j * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

Rational falling_factorial(int n, int m) {
    Rational f = 1;
    for (int i = 0; i < m; ++i) f *= (n - i);
    return f;
}

namespace {

int cycle_sum(const std::vector<int>& cycles) {
    int m = 0;
    for (int c : cycles) {
        if (c < 1) throw std::invalid_argument("cycle lengths must be positive");
        m += c;
    }
    return m;
}

Rational rational_pow(const Rational& base, int e) {
    Rational r = 1;
    if (e >= 0) {
        for (int i = 0; i < e; ++i) r *= base;
    } else {
        for (int i = 0; i < -e; ++i) r /= base;
    }
    return r;
}

// (-1/2)^{m-l} (n)_m He_{n-m}(x); zero once m > n.
Rational hermite_rhs(int n, int m, int l, const Rational& x) {
    if (m > n) return 0;
    return rational_pow(Rational(-1, 2), m - l) * falling_factorial(n, m) * hermite_exact(n - m, x);
}

Jet trace_product(int n, int cap, const std::vector<int>& cycles) {
    Jet p = Jet::constant(n, cap, 1);
    for (int c : cycles) p = p * trace_power(n, c, cap);
    return p;
}

// exp(a tr Theta^2 + b (tr Theta)^2)
Jet quadratic_exp(int n, int cap, const Rational& a, const Rational& b) {
    Jet tr1 = trace_power(n, 1, cap);
    Jet arg = trace_power(n, 2, cap) * a + (tr1 * tr1) * b;
    return jet_exp(arg);
}

void check_dim(int n) {
    if (n < 1 || n > kMaxJetDim) throw std::invalid_argument("identity checks need 1 <= n <= 4");
}

IdentityResult compare_plus_det(int n, const Jet& f, int m, int l, int rhs_sign) {
    IdentityResult res{true, {}};
    for (const auto& x : identity_sample_points(n)) {
        IdentitySample s{x, apply_det_operator(x, +1, f), hermite_rhs(n, m, l, x) * rhs_sign};
        if (s.lhs != s.rhs) res.holds = false;
        res.samples.push_back(std::move(s));
    }
    return res;
}

struct RKernel {
    Rational alpha;
    Rational beta_r;
};

RKernel r_kernel(int n, const Rational& gamma, const Rational& beta) {
    if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
    RKernel k{2 * gamma * gamma * (1 + beta), beta * gamma * gamma};
    if (k.alpha <= 0 || k.alpha + n * k.beta_r <= 0) {
        throw std::invalid_argument("psi_R^0 parameters violate alpha > 0, alpha + n beta > 0");
    }
    return k;
}

}  // namespace

IdentityResult verify_lemma_a1(int n, const std::vector<int>& cycles, int rhs_sign) {
    check_dim(n);
    const int m = cycle_sum(cycles);
    const int cap = n + m;
    Jet f = quadratic_exp(n, cap, 1, 0) * trace_product(n, cap, cycles);
    return compare_plus_det(n, f, m, static_cast<int>(cycles.size()), rhs_sign);
}

IdentityResult verify_lemma_a2(int n, const Rational& beta, const std::vector<int>& cycles,
                               int rhs_sign) {
    check_dim(n);
    const int m = cycle_sum(cycles);
    const int cap = n + m;
    Jet f = quadratic_exp(n, cap, 1 + beta, beta / 2) * trace_product(n, cap, cycles);
    return compare_plus_det(n, f, m, static_cast<int>(cycles.size()), rhs_sign);
}

IdentityResult verify_prop31(int n, const Rational& gamma, const Rational& beta,
                             const std::vector<int>& cycles, int rhs_sign) {
    check_dim(n);
    const RKernel k = r_kernel(n, gamma, beta);
    const int m = cycle_sum(cycles);
    const int l = static_cast<int>(cycles.size());
    const int cap = n + m;
    Jet f = quadratic_exp(n, cap, k.alpha / 2, k.beta_r / 2) * trace_product(n, cap, cycles);
    IdentityResult res{true, {}};
    for (const auto& x : identity_sample_points(n)) {
        Rational rhs = 0;
        if (m <= n) {
            rhs = rational_pow(Rational(-1), m) * rational_pow(gamma, n - m) *
                  rational_pow(Rational(-1, 2), m - l) * falling_factorial(n, m) *
                  hermite_exact(n - m, x);
        }
        IdentitySample s{x, det_diffop_apply(x, gamma, f), rhs * rhs_sign};
        if (s.lhs != s.rhs) res.holds = false;
        res.samples.push_back(std::move(s));
    }
    return res;
}

IdentityResult verify_loop_annihilation(int n, const Rational& gamma, const Rational& beta, int K,
                                        const std::vector<int>& cycles) {
    check_dim(n);
    if (K < 2) throw std::invalid_argument("loop length K must be >= 2");
    const RKernel k = r_kernel(n, gamma, beta);
    const int m = cycle_sum(cycles);
    const int cap = n + m + K;
    Jet loop = jet_pow(trace_power(n, 1, cap), K) -
               trace_power(n, K, cap) * rational_pow(Rational(-2), K - 1);
    Jet f = quadratic_exp(n, cap, k.alpha / 2, k.beta_r / 2) * trace_product(n, cap, cycles) * loop;
    IdentityResult res{true, {}};
    for (const auto& x : identity_sample_points(n)) {
        IdentitySample s{x, det_diffop_apply(x, gamma, f), 0};
        if (s.lhs != 0) res.holds = false;
        res.samples.push_back(std::move(s));
    }
    return res;
}

std::vector<std::vector<int>> cycle_multisets(int max_sum) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    // Non-increasing sequences with bounded sum.
    auto rec = [&](auto&& self, int remaining, int largest) -> void {
        out.push_back(current);
        for (int c = std::min(remaining, largest); c >= 1; --c) {
            current.push_back(c);
            self(self, remaining - c, c);
            current.pop_back();
        }
    };
    rec(rec, max_sum, max_sum);
    return out;
}

McEstimate goe_hermite_mc(int n, double x, std::int64_t samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("goe_hermite_mc: n must be >= 1");
    if (samples < 100) throw std::invalid_argument("goe_hermite_mc: need at least 100 samples");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sqrt2 = std::sqrt(2.0);
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) {
            a[i * n + i] = x + sqrt2 * normal(rng);
            for (int j = i + 1; j < n; ++j) {
                const double v = normal(rng);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        const double d = determinant(a, n);
        sum += d;
        sumsq += d * d;
    }
    const double ns = static_cast<double>(samples);
    const double mean = sum / ns;
    const double var = std::max(0.0, (sumsq - ns * mean * mean) / (ns - 1.0));
    return {mean, std::sqrt(var / ns)};
}

}  // namespace mlab
