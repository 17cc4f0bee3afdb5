#include "minkowski/corr_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mlab {

void KernelModelParams::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("model.g must be > 0");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("model.tau must be >= 0");
    if (!std::isfinite(delta)) throw std::invalid_argument("model.delta must be finite");
    if (n < 1) throw std::invalid_argument("model.n must be >= 1");
}

int edge_index(int N, int a, int b) {
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= N || a == b) throw std::out_of_range("edge_index: invalid vertex pair");
    return a * N - a * (a + 1) / 2 + (b - a - 1);
}

std::vector<std::array<Edge, 3>> directed_chains_4() {
    std::vector<std::array<Edge, 3>> out;
    std::array<int, 4> v{0, 1, 2, 3};
    auto edge = [](int a, int b) { return Edge{std::min(a, b), std::max(a, b)}; };
    do {
        out.push_back({edge(v[0], v[1]), edge(v[1], v[2]), edge(v[2], v[3])});
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

std::vector<std::array<Edge, 4>> loops_4() {
    std::set<std::array<Edge, 4>> seen;
    std::array<int, 4> v{0, 1, 2, 3};
    auto edge = [](int a, int b) { return Edge{std::min(a, b), std::max(a, b)}; };
    do {
        std::array<Edge, 4> e{edge(v[0], v[1]), edge(v[1], v[2]), edge(v[2], v[3]),
                              edge(v[3], v[0])};
        std::sort(e.begin(), e.end());
        seen.insert(e);
    } while (std::next_permutation(v.begin(), v.end()));
    return {seen.begin(), seen.end()};
}

double ExpSum::eval(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double arg = 0.0;
        for (int e = 0; e < arity(); ++e) arg += t.rate[e] * x[e];
        s += t.coef * std::exp(-arg);
    }
    return s;
}

double ExpSum::derivative_at_origin(std::span<const int> orders) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double v = t.coef;
        for (int e = 0; e < arity(); ++e)
            for (int k = 0; k < orders[e]; ++k) v *= -t.rate[e];
        s += v;
    }
    return s;
}

namespace {

struct Rates {
    double xx, xs, ss;     // decay rates of <X X>, <X S>, <S S>
    double fxs, fss;       // prefactors at zero separation
};

Rates rates(const KernelModelParams& p) {
    const double gt = p.g * p.tau;
    return {p.g, p.g / (1.0 + gt), p.g / (1.0 + 2.0 * gt), std::pow(1.0 + gt, -0.5 * p.n),
            std::pow(1.0 + 2.0 * gt, -0.5 * p.n)};
}

double rho_display(double x, const KernelModelParams& p) {
    const Rates r = rates(p);
    const double d2 = p.delta * p.delta;
    const double num = std::exp(-p.g * x) +
                       d2 * r.fss * std::exp(-2.0 * p.g * (1.0 + p.g * p.tau) /
                                             (1.0 + 2.0 * p.g * p.tau) * x) +
                       d2 * r.fxs * r.fxs * std::exp(-2.0 * r.xs * x);
    return num / omega_delta_sq(p);
}

double kappa3_display(std::span<const double> x, const KernelModelParams& p) {
    const Rates r = rates(p);
    const double d = p.delta;
    double pairs = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) pairs += r.fxs * std::exp(-r.xx * x[i]) * std::exp(-r.xs * x[j]);
    std::array<int, 3> perm{0, 1, 2};
    double perms = 0.0;
    do {
        perms += r.fxs * r.fss *
                 std::exp(-r.xx * x[perm[0]] - r.xs * x[perm[1]] - r.ss * x[perm[2]]);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double ring = 2.0 * r.fxs * r.fxs * r.fxs * std::exp(-r.xs * (x[0] + x[1] + x[2]));
    const double w = std::sqrt(omega_delta_sq(p));
    return (d * pairs + d * d * d * (perms + ring)) / (w * w * w);
}

double kappa4_printed_display(std::span<const double> x, const KernelModelParams& p) {
    const Rates r = rates(p);
    const double d2 = p.delta * p.delta;
    auto xe = [&](const Edge& e) { return x[edge_index(4, e[0], e[1])]; };
    double chains = 0.0;
    for (const auto& c : directed_chains_4())
        chains += r.fxs * r.fxs * std::exp(-r.xx * xe(c[0])) *
                  std::exp(-r.xs * (xe(c[1]) + xe(c[2])));
    double loops = 0.0;
    for (const auto& l : loops_4())
        loops += std::pow(r.fxs, 4) * std::exp(-r.xs * (xe(l[0]) + xe(l[1]) + xe(l[2]) + xe(l[3])));
    const double w2 = omega_delta_sq(p);
    return (2.0 * d2 * chains + 16.0 * d2 * d2 * loops) / (w2 * w2);
}

void require_nonnegative(std::span<const double> x, const char* who) {
    for (double v : x)
        if (!(v >= 0.0)) throw std::domain_error(std::string(who) + ": arguments must be >= 0");
}

// Connected Wick pairings of half-edges; vertex a carries X_a and, when
// quadratic, also S_a.
void enumerate_pairings(const std::vector<std::pair<int, int>>& half, std::vector<int>& mate,
                        const std::function<void(const std::vector<int>&)>& emit) {
    const auto it = std::find(mate.begin(), mate.end(), -1);
    if (it == mate.end()) {
        emit(mate);
        return;
    }
    const int i = static_cast<int>(it - mate.begin());
    for (int j = i + 1; j < static_cast<int>(half.size()); ++j) {
        if (mate[j] != -1 || half[j].first == half[i].first) continue;
        mate[i] = j;
        mate[j] = i;
        enumerate_pairings(half, mate, emit);
        mate[i] = -1;
        mate[j] = -1;
    }
}

}  // namespace

double omega_delta_sq(const KernelModelParams& p) {
    const Rates r = rates(p);
    const double d2 = p.delta * p.delta;
    return 1.0 + d2 * r.fss + d2 * r.fxs * r.fxs;
}

double mean_delta(const KernelModelParams& p) { return p.delta * rates(p).fxs; }

double rho_model(double x, const KernelModelParams& p) {
    if (!(x >= 0.0)) throw std::domain_error("rho_model: x must be >= 0");
    return rho_display(x, p);
}

double kappa3_model(double x12, double x13, double x23, const KernelModelParams& p) {
    const std::array<double, 3> x{x12, x13, x23};
    require_nonnegative(x, "kappa3_model");
    return kappa3_display(x, p);
}

double kappa4_model(std::span<const double, 6> x, const KernelModelParams& p, Kappa4Form form) {
    require_nonnegative(x, "kappa4_model");
    if (form == Kappa4Form::printed) return kappa4_printed_display(x, p);
    return wick_cumulant(4, p).eval(x);
}

ExpSum wick_cumulant(int N, const KernelModelParams& p) {
    if (N < 2 || N > 4) throw std::invalid_argument("wick_cumulant: N must be 2, 3 or 4");
    const Rates r = rates(p);
    const double norm = std::pow(omega_delta_sq(p), -0.5 * N);
    ExpSum out{N, {}};
    for (unsigned quad = 0; quad < (1u << N); ++quad) {
        std::vector<std::pair<int, int>> half;  // (vertex, 0 = X / 1 = S)
        for (int a = 0; a < N; ++a) {
            half.emplace_back(a, 0);
            if ((quad >> a) & 1u) half.emplace_back(a, 1);
        }
        if (half.size() % 2 != 0) continue;
        const double dpow = std::pow(p.delta, std::popcount(quad));
        std::vector<int> mate(half.size(), -1);
        enumerate_pairings(half, mate, [&](const std::vector<int>& m) {
            std::vector<int> parent(N);
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](int a) {
                while (parent[a] != a) a = parent[a] = parent[parent[a]];
                return a;
            };
            ExpTerm t;
            t.coef = dpow * norm;
            for (std::size_t i = 0; i < m.size(); ++i) {
                const std::size_t j = static_cast<std::size_t>(m[i]);
                if (j < i) continue;
                const auto [a, ka] = half[i];
                const auto [b, kb] = half[j];
                parent[find(a)] = find(b);
                const int e = edge_index(N, a, b);
                const int s_count = ka + kb;
                if (s_count == 0) {
                    t.rate[e] += r.xx;
                } else if (s_count == 1) {
                    t.rate[e] += r.xs;
                    t.coef *= r.fxs;
                } else {
                    t.rate[e] += r.ss;
                    t.coef *= r.fss;
                }
            }
            for (int a = 1; a < N; ++a)
                if (find(a) != find(0)) return;
            out.terms.push_back(t);
        });
    }
    return out;
}

ExpSum printed_kappa4(const KernelModelParams& p) {
    const Rates r = rates(p);
    const double d2 = p.delta * p.delta;
    const double w2 = omega_delta_sq(p);
    ExpSum out{4, {}};
    for (const auto& c : directed_chains_4()) {
        ExpTerm t;
        t.coef = 2.0 * d2 * r.fxs * r.fxs / (w2 * w2);
        t.rate[edge_index(4, c[0][0], c[0][1])] += r.xx;
        t.rate[edge_index(4, c[1][0], c[1][1])] += r.xs;
        t.rate[edge_index(4, c[2][0], c[2][1])] += r.xs;
        out.terms.push_back(t);
    }
    for (const auto& l : loops_4()) {
        ExpTerm t;
        t.coef = 16.0 * d2 * d2 * std::pow(r.fxs, 4) / (w2 * w2);
        for (const auto& e : l) t.rate[edge_index(4, e[0], e[1])] += r.xs;
        out.terms.push_back(t);
    }
    return out;
}

namespace {

// Representative loop-free derivative patterns.
constexpr std::array<int, 1> kRho1{1};
constexpr std::array<int, 3> kK1{1, 0, 0};
constexpr std::array<int, 3> kK11{1, 1, 0};
constexpr std::array<int, 6> kKK1{1, 0, 0, 0, 0, 0};
constexpr std::array<int, 6> kKK11a{1, 1, 0, 0, 0, 0};
constexpr std::array<int, 6> kKK11aa{1, 0, 0, 0, 0, 1};
constexpr std::array<int, 6> kKK111a{1, 1, 0, 0, 1, 0};
constexpr std::array<int, 6> kKK111d{1, 1, 1, 0, 0, 0};

}  // namespace

CumulantSet analytic_cumulants(const KernelModelParams& p, Kappa4Form form) {
    p.validate();
    const ExpSum rho = wick_cumulant(2, p);
    const ExpSum k3 = wick_cumulant(3, p);
    const ExpSum k4 = form == Kappa4Form::printed ? printed_kappa4(p) : wick_cumulant(4, p);
    constexpr std::array<int, 6> zero{};
    CumulantSet c;
    c.gamma = -rho.derivative_at_origin(kRho1);
    c.k0 = k3.derivative_at_origin(std::span(zero).first<3>());
    c.k1 = k3.derivative_at_origin(kK1);
    c.k11 = k3.derivative_at_origin(kK11);
    c.K0 = k4.derivative_at_origin(zero);
    c.K1 = k4.derivative_at_origin(kKK1);
    c.K11a = k4.derivative_at_origin(kKK11a);
    c.K11aa = k4.derivative_at_origin(kKK11aa);
    c.K111a = k4.derivative_at_origin(kKK111a);
    c.K111d = k4.derivative_at_origin(kKK111d);
    return c;
}

namespace {

using ModelFn = std::function<double(std::span<const double>)>;

// Central-difference mixed partial at the origin, first order in each
// variable flagged in `orders`.
double central_mixed(const ModelFn& f, int arity, std::span<const int> orders, double h) {
    std::vector<int> vars;
    for (int e = 0; e < arity; ++e)
        if (orders[e] == 1) vars.push_back(e);
    const int r = static_cast<int>(vars.size());
    std::vector<double> x(arity, 0.0);
    if (r == 0) return f(x);
    double s = 0.0;
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        double sign = 1.0;
        std::fill(x.begin(), x.end(), 0.0);
        for (int i = 0; i < r; ++i) {
            const bool minus = (mask >> i) & 1u;
            x[vars[i]] = minus ? -h : h;
            if (minus) sign = -sign;
        }
        s += sign * f(x);
    }
    return s / std::pow(2.0 * h, r);
}

double richardson(const ModelFn& f, int arity, std::span<const int> orders, double h) {
    const double coarse = central_mixed(f, arity, orders, h);
    const double fine = central_mixed(f, arity, orders, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

CumulantSet fd_cumulants(const KernelModelParams& p, double h, Kappa4Form form) {
    p.validate();
    if (!(h > 0.0) || !(h < 0.1 / p.g)) {
        throw std::invalid_argument("fd_cumulants: step must satisfy 0 < h < 0.1 / g");
    }
    const ModelFn rho = [&](std::span<const double> x) { return rho_display(x[0], p); };
    const ModelFn k3 = [&](std::span<const double> x) { return kappa3_display(x, p); };
    const ExpSum complete4 = form == Kappa4Form::complete ? wick_cumulant(4, p) : ExpSum{};
    const ModelFn k4 = [&](std::span<const double> x) {
        return form == Kappa4Form::printed ? kappa4_printed_display(x, p) : complete4.eval(x);
    };
    constexpr std::array<int, 6> zero{};
    CumulantSet c;
    c.gamma = -richardson(rho, 1, kRho1, h);
    c.k0 = central_mixed(k3, 3, std::span(zero).first<3>(), h);
    c.k1 = richardson(k3, 3, kK1, h);
    c.k11 = richardson(k3, 3, kK11, h);
    c.K0 = central_mixed(k4, 6, zero, h);
    c.K1 = richardson(k4, 6, kKK1, h);
    c.K11a = richardson(k4, 6, kKK11a, h);
    c.K11aa = richardson(k4, 6, kKK11aa, h);
    c.K111a = richardson(k4, 6, kKK111a, h);
    c.K111d = richardson(k4, 6, kKK111d, h);
    return c;
}

CurvatureMoments curvature_moments(const KernelModelParams& p) {
    const ExpSum rho = wick_cumulant(2, p);
    constexpr std::array<int, 1> first{1};
    constexpr std::array<int, 1> second{2};
    const double r1 = rho.derivative_at_origin(first);
    const double r2 = rho.derivative_at_origin(second);
    return {2.0 * r2, r2 - r1 * r1};
}

bool in_positivity_window(const KernelModelParams& p) {
    const auto m = curvature_moments(p);
    return m.alpha > 0.0 && m.alpha + p.n * m.beta > 0.0;
}

}  // namespace mlab
