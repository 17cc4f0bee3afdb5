// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "minkowski/corr_kernel.hpp"
#include "minkowski/ec_theory.hpp"
#include "minkowski/excursion_mf.hpp"
#include "minkowski/geometry.hpp"
#include "minkowski/harness.hpp"
#include "minkowski/hermite.hpp"
#include "minkowski/identities.hpp"

using namespace mlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& run) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = run();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        o.pass = false;
        o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s budget)";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmtd(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

Outcome identities() {
    int total = 0, bad = 0;
    std::string first;
    for (const auto& l : identity_battery(1, 1000)) {
        if (l.id == "goe_mc") continue;
        ++total;
        if (!l.pass) {
            ++bad;
            if (first.empty()) first = l.id + " " + l.params + " " + l.detail;
        }
    }
    return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) +
                          " exact identity groups" + (first.empty() ? "" : "; first failure " + first)};
}

Outcome goe() {
    int ok = 0, total = 0;
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
        for (int x = 0; x <= 2; ++x) {
            const auto e = goe_hermite_mc(n, x, 100000, derive_seed(0x60e, n * 10 + x));
            const double z = std::abs(e.mean - hermite(n, x)) / e.stderr_;
            worst = std::max(worst, z);
            ++total;
            if (z < 4.0) ++ok;
        }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " within 4 SE, max |z| " + fmtd(worst)};
}

FieldGrid random_field(std::vector<int> shape, std::mt19937_64& rng) {
    FieldGrid f;
    f.n = static_cast<int>(shape.size());
    f.shape = shape;
    f.spacing.assign(f.n, 1.0);
    std::size_t N = 1;
    for (int e : shape) N *= e;
    std::normal_distribution<double> nd;
    for (std::size_t k = 0; k < N; ++k) f.values.push_back(nd(rng));
    return f;
}

// Midpoints between consecutive distinct values plus one level outside each end.
std::vector<double> inter_value_thresholds(const FieldGrid& f) {
    std::vector<double> v = f.values;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> t{v.front() - 1.0};
    for (std::size_t i = 0; i + 1 < v.size(); ++i) t.push_back(0.5 * (v[i] + v[i + 1]));
    t.push_back(v.back() + 1.0);
    return t;
}

Outcome sweep_vs_brute() {
    std::mt19937_64 rng(31337);
    long checks = 0, bad = 0;
    auto run = [&](std::vector<int> shape, int count) {
        for (int r = 0; r < count; ++r) {
            const FieldGrid f = random_field(shape, rng);
            const ECCurve c = ec_curve_sweep(f);
            for (double v : inter_value_thresholds(f)) {
                ++checks;
                if (c.at(v) != ec_bruteforce(f, v)) ++bad;
            }
        }
    };
    run({8, 8}, 100);
    run({5, 5, 5}, 20);
    return {bad == 0, std::to_string(checks - bad) + "/" + std::to_string(checks) + " thresholds equal"};
}

ExperimentConfig desk_config(double delta, double tau) {
    ExperimentConfig cfg;
    cfg.model = {50.0, tau, delta, 2};
    cfg.shape = {128, 128};
    cfg.extent = {1.0, 1.0};
    cfg.count = 200;
    cfg.v_min = -3.0;
    cfg.v_max = 3.0;
    cfg.v_step = 0.5;
    return cfg;
}

CompareReport end_to_end(const ExperimentConfig& cfg) {
    const int jobs = std::max(1u, std::thread::hardware_concurrency());
    std::ostringstream th, sm;
    write_theory_csv(th, cfg, theory_table(cfg));
    write_sim_csv(sm, cfg, simulate(cfg, jobs));
    std::istringstream ti(th.str()), si(sm.str());
    return compare_tables(read_csv(ti), read_csv(si), cfg.correction);
}

Outcome gaussian_end_to_end() {
    const CompareReport r = end_to_end(desk_config(0.0, 0.0));
    const auto& s = r.summary[0];
    return {s.within_4se >= 12, std::to_string(s.within_4se) + "/" + std::to_string(s.points) +
                                    " thresholds within 4 SE, sum z^2 " + fmtd(s.sum_z2)};
}

Outcome correction_ordering() {
    const CompareReport r = end_to_end(desk_config(0.5, 0.1));
    const double none = r.summary[0].sum_z2, skew = r.summary[1].sum_z2, full = r.summary[2].sum_z2;
    const bool pass = full <= skew && skew <= none && skew <= 0.8 * none;
    return {pass, "sum z^2 none " + fmtd(none) + ", skewness " + fmtd(skew) + ", skewness+kurtosis " +
                      fmtd(full) + "; skewness improvement " + fmtd(100.0 * (1.0 - skew / none)) + "%"};
}

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

Outcome cumulant_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ug(1.0, 100.0), ut(0.0, 0.5), ud(-0.8, 0.8);
    double worst = 0.0;
    bool ok = true;
    for (int draw = 0; draw < 20; ++draw) {
        const KernelModelParams p{ug(rng), ut(rng), ud(rng), 1 + draw % 3};
        const CumulantSet a = analytic_cumulants(p);
        const CumulantSet f = fd_cumulants(p, 0.04 / p.g);
        const double pairs[][2] = {{a.gamma, f.gamma}, {a.k0, f.k0},       {a.k1, f.k1},
                                   {a.k11, f.k11},     {a.K0, f.K0},       {a.K1, f.K1},
                                   {a.K11a, f.K11a},   {a.K11aa, f.K11aa}, {a.K111a, f.K111a}};
        for (auto [x, y] : pairs) {
            const double rel = std::abs(x - y) / std::max(std::abs(x), 1e-300);
            if (x != 0.0) worst = std::max(worst, rel);
            if (!rel_close(x, y, 1e-6) && std::abs(x - y) > 1e-12) ok = false;
        }
        // Identically zero in the model; compared on the scale of its sibling.
        if (std::abs(f.K111d - a.K111d) > 1e-6 * std::abs(a.K111a)) ok = false;

        const ExpSum k3 = wick_cumulant(3, p);
        const double d3 = k3.derivative_at_origin(std::array{1, 0, 0});
        for (int e = 1; e < 3; ++e) {
            std::array<int, 3> o{};
            o[e] = 1;
            if (!rel_close(k3.derivative_at_origin(o), d3, 1e-10)) ok = false;
        }
        const ExpSum k4 = wick_cumulant(4, p);
        const double d4 = k4.derivative_at_origin(std::array{1, 0, 0, 0, 0, 0});
        for (int e = 1; e < 6; ++e) {
            std::array<int, 6> o{};
            o[e] = 1;
            if (!rel_close(k4.derivative_at_origin(o), d4, 1e-10)) ok = false;
        }
    }
    return {ok, "20 draws, max relative error " + fmtd(worst) + "; slot symmetry 3 + 6 to 1e-10"};
}

Outcome tube() {
    const auto lines = tube_battery(1000000, 7);
    int ok = 0;
    double worst = 0.0;
    for (const auto& t : lines) {
        if (t.pass) ++ok;
        if (t.stderr_ > 0) worst = std::max(worst, std::abs(t.estimate - t.steiner) / t.stderr_);
    }
    return {ok == static_cast<int>(lines.size()),
            std::to_string(ok) + "/" + std::to_string(lines.size()) + " within 4 SE, max |z| " + fmtd(worst)};
}

Outcome reductions() {
    bool ok = true;
    double worst = 0.0;
    const double pi = 3.141592653589793238462643383279502884;
    for (double gamma : {1.0, 2.5, 50.0}) {
        const CumulantSet z = CumulantSet::gaussian(gamma);
        for (int n = 1; n <= 6; ++n)
            for (double x = -4.0; x <= 4.0; x += 0.25) {
                const double want = std::pow(gamma, 0.5 * n) * std::pow(2 * pi, -0.5 * n) *
                                    gaussian_pdf(x) * hermite(n - 1, x);
                for (Correction c : {Correction::none, Correction::skewness, Correction::skewness_kurtosis}) {
                    const double got = ec_density(n, x, z, c);
                    const double err = std::abs(got - want) / std::max(std::abs(want), 1e-300);
                    if (want != 0.0) worst = std::max(worst, err);
                    if (std::abs(got - want) > 1e-12 * std::abs(want) + 1e-300) ok = false;
                }
            }
        for (double x = -6.0; x <= 6.0; x += 0.25)
            if (!rel_close(ec_density(0, x, z), gaussian_tail(x), 1e-12)) ok = false;
    }
    KernelModelParams p;
    const CumulantSet c = analytic_cumulants(p);
    for (auto e : std::vector<std::vector<double>>{{1.0}, {1.0, 1.0}, {0.5, 1.0, 2.0}}) {
        const LKVector lk = lk_rectangle(e);
        for (double v = -3.0; v <= 3.0; v += 0.5)
            for (Correction lvl : {Correction::none, Correction::skewness, Correction::skewness_kurtosis}) {
                const double a = expected_lk_excursion(0, lk, v, c, lvl);
                const double b = expected_ec(lk, v, c, lvl);
                if (std::memcmp(&a, &b, sizeof a) != 0) ok = false;
            }
    }
    return {ok, "Gaussian closed form n<=6 max relative error " + fmtd(worst) +
                    "; Xi_0 tail; LK_0 bitwise equal to E chi"};
}

}  // namespace

int main() {
    report(1, "exact identity battery", 30, identities);
    report(2, "random-matrix Hermite Monte Carlo", 10, goe);
    report(3, "EC sweep vs brute force", 60, sweep_vs_brute);
    report(4, "Gaussian end-to-end", 600, gaussian_end_to_end);
    report(5, "non-Gaussian correction ordering", 0, correction_ordering);
    report(6, "cumulant finite-difference oracle", 0, cumulant_oracle);
    report(7, "Steiner tube volumes", 30, tube);
    report(8, "zero-cumulant reductions", 0, reductions);
    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
