// minkowski-lab: theory curves, lattice simulations and checks for the
// Euler characteristic of weakly non-Gaussian excursion sets.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "minkowski/harness.hpp"

namespace fs = std::filesystem;
using namespace mlab;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kCheckFailed = 2;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
    std::string out;
};

ExperimentConfig resolve(const Options& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.seed) cfg.base_seed = *o.seed;
    if (!o.out.empty()) cfg.out_dir = o.out;
    cfg.validate();
    return cfg;
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / name;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error(p.string() + ": cannot open for writing");
    os << s;
    if (!os) throw std::runtime_error(p.string() + ": write failed");
}

CsvTable load_csv(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error(p.string() + ": cannot open");
    try {
        return read_csv(is);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(p.string() + ": " + e.what());
    }
}

int cmd_theory(const Options& o) {
    const ExperimentConfig cfg = resolve(o);
    std::ostringstream ss;
    write_theory_csv(ss, cfg, theory_table(cfg));
    const fs::path p = out_path(cfg, "theory.csv");
    write_text(p, ss.str());
    std::cout << "wrote " << p.string() << "\n";
    return kOk;
}

int cmd_simulate(const Options& o) {
    const ExperimentConfig cfg = resolve(o);
    const int jobs = o.jobs > 0 ? o.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::optional<fs::path> dump;
    if (cfg.dump_fields) dump = fs::path(cfg.out_dir) / "fields";
    const SimResult sim = simulate(cfg, jobs, dump);
    std::ostringstream ss;
    write_sim_csv(ss, cfg, sim);
    const fs::path p = out_path(cfg, "simulate.csv");
    write_text(p, ss.str());
    std::cout << "wrote " << p.string() << " (" << cfg.count << " realizations, " << jobs
              << " jobs)\n";
    return kOk;
}

int cmd_compare(const Options& o, const std::string& theory_csv, const std::string& sim_csv) {
    const ExperimentConfig cfg = resolve(o);
    const fs::path tp = theory_csv.empty() ? fs::path(cfg.out_dir) / "theory.csv" : fs::path(theory_csv);
    const fs::path sp = sim_csv.empty() ? fs::path(cfg.out_dir) / "simulate.csv" : fs::path(sim_csv);
    const CompareReport rep = compare_tables(load_csv(tp), load_csv(sp), cfg.correction);
    std::ostringstream ss;
    write_compare_csv(ss, rep);
    write_text(out_path(cfg, "compare.csv"), ss.str());
    print_compare_report(std::cout, rep);
    return rep.consistent ? kOk : kCheckFailed;
}

int cmd_identities(bool inject_fault, std::int64_t mc_samples) {
    const auto lines = identity_battery(inject_fault ? -1 : 1, mc_samples);
    int failed = 0;
    for (const auto& l : lines) {
        std::cout << (l.pass ? "PASS " : "FAIL ") << l.id << " " << l.params;
        if (!l.detail.empty()) std::cout << "  " << l.detail;
        std::cout << "\n";
        if (!l.pass) ++failed;
    }
    std::cout << lines.size() - failed << "/" << lines.size() << " passed\n";
    return failed ? kCheckFailed : kOk;
}

int cmd_tube_check(std::int64_t samples, const Options& o) {
    const auto lines = tube_battery(samples, o.seed.value_or(7));
    int failed = 0;
    std::cout << "n,rho,steiner,mc,se,verdict\n";
    for (const auto& t : lines) {
        std::cout << t.n << "," << t.rho << "," << t.steiner << "," << t.estimate << ","
                  << t.stderr_ << "," << (t.pass ? "pass" : "fail") << "\n";
        if (!t.pass) ++failed;
    }
    return failed ? kCheckFailed : kOk;
}

int cmd_plotdata(const Options& o, const std::string& theory_csv, const std::string& sim_csv) {
    const ExperimentConfig cfg = resolve(o);
    const fs::path tp = theory_csv.empty() ? fs::path(cfg.out_dir) / "theory.csv" : fs::path(theory_csv);
    const CsvTable theory = load_csv(tp);
    std::optional<CsvTable> sim;
    if (!sim_csv.empty()) {
        sim = load_csv(sim_csv);
    } else if (const fs::path dp = fs::path(cfg.out_dir) / "simulate.csv"; fs::exists(dp)) {
        sim = load_csv(dp);
    }
    const fs::path p = out_path(cfg, "plot.svg");
    write_text(p, plot_svg(theory, sim ? &*sim : nullptr));
    std::cout << "wrote " << p.string() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minkowski-lab " + std::string(kVersion) +
                 ": Euler characteristic of excursion sets, theory vs lattice simulation"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Options o;
    app.add_option("--config", o.config, "experiment config file");
    app.add_option("--seed", o.seed, "override ensemble.base_seed");
    app.add_option("--jobs", o.jobs, "worker threads (default: logical cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", o.out, "output directory (overrides output.dir)");

    auto* theory = app.add_subcommand("theory", "expected chi and LK curves at three correction levels");
    auto* simulate_cmd = app.add_subcommand("simulate", "ensemble of lattice fields; mean EC/MF curves");
    auto* compare = app.add_subcommand("compare", "z-scores of simulation against theory");
    std::string theory_csv, sim_csv;
    compare->add_option("theory_csv", theory_csv);
    compare->add_option("sim_csv", sim_csv);
    auto* identities = app.add_subcommand("identities", "exact determinant/Hermite identity battery");
    bool inject = false;
    std::int64_t mc_samples = 100000;
    identities->add_flag("--inject-fault", inject, "flip one right-hand side (self-test)");
    identities->add_option("--mc-samples", mc_samples)->check(CLI::Range(std::int64_t{100}, std::int64_t{1} << 40));
    auto* tube = app.add_subcommand("tube-check", "Monte Carlo tube volumes against Steiner");
    std::int64_t tube_samples = 1000000;
    tube->add_option("--samples", tube_samples)->check(CLI::Range(std::int64_t{1000}, std::int64_t{1} << 40));
    auto* plot = app.add_subcommand("plotdata", "SVG overlay of theory curves and simulation band");
    std::string plot_theory, plot_sim;
    plot->add_option("theory_csv", plot_theory);
    plot->add_option("sim_csv", plot_sim);
    for (auto* sub : {theory, simulate_cmd, compare, identities, tube, plot}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*theory) return cmd_theory(o);
        if (*simulate_cmd) return cmd_simulate(o);
        if (*compare) return cmd_compare(o, theory_csv, sim_csv);
        if (*identities) return cmd_identities(inject, mc_samples);
        if (*tube) return cmd_tube_check(tube_samples, o);
        if (*plot) return cmd_plotdata(o, plot_theory, plot_sim);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
