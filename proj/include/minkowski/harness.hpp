#pragma once

// Experiment configuration, ensemble execution and the report/CSV plumbing
// behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minkowski/corr_kernel.hpp"
#include "minkowski/ec_theory.hpp"
#include "minkowski/excursion_mf.hpp"

namespace mlab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeader = "# minkowski-lab v0.1.0 schema=1";

/// Validation failure; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    KernelModelParams model;
    Kappa4Form kappa4 = Kappa4Form::complete;
    /// Direct cumulant entry; overrides the model for theory curves.
    std::optional<CumulantSet> cumulants;

    std::vector<int> shape{128, 128};
    std::vector<double> extent{1.0, 1.0};

    int count = 200;
    std::uint64_t base_seed = 20240601;

    double v_min = -3.0;
    double v_max = 3.0;
    double v_step = 0.5;

    /// Level whose consistency decides the compare verdict.
    Correction correction = Correction::skewness_kurtosis;

    std::string out_dir = "out";
    bool dump_fields = false;
    bool minkowski = true;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    std::vector<double> spacing() const;
    std::vector<double> v_grid() const;
    LKVector lk() const;
    /// The direct entry if present, otherwise the model's analytic cumulants.
    CumulantSet cumulant_set() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// key = value lines under [model], [cumulants], [grid], [ensemble],
/// [thresholds], [theory] and [output]; '#' starts a comment.
/// Throws ConfigError on syntax errors, unknown keys or invalid values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

/// Runs task(i) for i in [0, count) on `jobs` threads. Exceptions are
/// rethrown after all workers stop.
void run_parallel(int count, int jobs, const std::function<void(int)>& task);

struct TheoryRow {
    Correction level = Correction::none;
    double v = 0.0;
    std::vector<double> xi;    // Xi_0 .. Xi_n
    double e_chi = 0.0;
    std::vector<double> e_lk;  // E[L_k(E_v)], k = 0 .. n
};

std::vector<TheoryRow> theory_table(const ExperimentConfig& cfg);
void write_theory_csv(std::ostream& os, const ExperimentConfig& cfg,
                      const std::vector<TheoryRow>& rows);

struct SimRow {
    double v = 0.0;
    double chi_mean = 0.0;
    double chi_se = 0.0;
    // 2-D only.
    double area_mean = 0.0;
    double area_se = 0.0;
    double half_boundary_mean = 0.0;
    double half_boundary_se = 0.0;
};

struct SimResult {
    bool has_mf = false;
    std::vector<SimRow> rows;
};

/// Draws cfg.count realizations of the model field with seeds
/// derive_seed(cfg.base_seed, i); if `dump_dir` is set, writes
/// field_<i>.bin there.
SimResult simulate(const ExperimentConfig& cfg, int jobs,
                   const std::optional<std::filesystem::path>& dump_dir = std::nullopt);
void write_sim_csv(std::ostream& os, const ExperimentConfig& cfg, const SimResult& sim);

/// Minimal CSV reader: skips '#' lines, first remaining line is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};
CsvTable read_csv(std::istream& is);

struct CompareRow {
    Correction level = Correction::none;
    double v = 0.0;
    double theory = 0.0;
    double sim_mean = 0.0;
    double sim_se = 0.0;
    double z = 0.0;
};

struct CompareSummary {
    Correction level = Correction::none;
    double sum_z2 = 0.0;
    int within_4se = 0;
    int points = 0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    std::vector<CompareSummary> summary;
    /// sum z^2 non-increasing from gaussian to skewness to skewness+kurtosis.
    bool ordered = false;
    /// |z| <= 4 at >= 90% of thresholds for the configured level.
    bool consistent = false;
    Correction best = Correction::none;
};

/// z = (sim mean - theory) / se per threshold and level.
/// Throws std::invalid_argument when the v grids differ.
CompareReport compare_tables(const CsvTable& theory, const CsvTable& sim, Correction level);
void write_compare_csv(std::ostream& os, const CompareReport& r);
void print_compare_report(std::ostream& os, const CompareReport& r);

struct IdentityLine {
    std::string id;
    std::string params;
    bool pass = false;
    std::string detail;
};

/// The exact determinant identities and the random-matrix Monte Carlo. `fault_sign`
/// other than +1 flips the right-hand side of the unit-kernel identity (self-test).
std::vector<IdentityLine> identity_battery(int fault_sign = 1, std::int64_t mc_samples = 100000);

struct TubeLine {
    int n = 0;
    double rho = 0.0;
    double steiner = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    bool pass = false;
};

/// Rectangles of dimension 1..3 at radii 0.1, 0.5, 1.0.
std::vector<TubeLine> tube_battery(std::int64_t samples, std::uint64_t seed);

/// Expected chi at the three levels with the simulation band, as SVG.
/// `sim` may be empty. Throws std::invalid_argument on malformed tables.
std::string plot_svg(const CsvTable& theory, const CsvTable* sim);

}  // namespace mlab
