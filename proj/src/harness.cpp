#include "minkowski/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "minkowski/geometry.hpp"
#include "minkowski/hermite.hpp"
#include "minkowski/identities.hpp"

namespace mlab {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Shortest text that parses back to the same double.
std::string fmt_exact(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
    const int n = static_cast<int>(shape.size());
    if (n < 1 || n > 3) throw ConfigError("grid.shape: need 1 to 3 extents");
    for (int e : shape)
        if (e < 2) throw ConfigError("grid.shape: every extent must be >= 2");
    if (extent.size() != shape.size())
        throw ConfigError("grid.extent: must have as many entries as grid.shape");
    for (double e : extent)
        if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("grid.extent: entries must be > 0");
    if (!(model.g > 0.0) || !std::isfinite(model.g)) throw ConfigError("model.g: must be > 0");
    if (!(model.tau >= 0.0) || !std::isfinite(model.tau))
        throw ConfigError("model.tau: must be >= 0");
    if (!std::isfinite(model.delta)) throw ConfigError("model.delta: must be finite");
    if (model.n != n) throw ConfigError("model.n: must equal the number of grid.shape entries");
    if (!in_positivity_window(model))
        throw ConfigError("model: curvature moments violate alpha > 0, alpha + n beta > 0");
    if (cumulants) {
        if (!(cumulants->gamma > 0.0) || !std::isfinite(cumulants->gamma))
            throw ConfigError("cumulants.gamma: must be > 0");
        try {
            cumulants->validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("cumulants: ") + e.what());
        }
    }
    if (count < 1) throw ConfigError("ensemble.count: must be >= 1");
    if (!std::isfinite(v_min) || !std::isfinite(v_max) || !(v_min < v_max))
        throw ConfigError("thresholds.v_min: must be < thresholds.v_max");
    if (!(v_step > 0.0)) throw ConfigError("thresholds.step: must be > 0");
    if ((v_max - v_min) / v_step > 1e6) throw ConfigError("thresholds.step: too many thresholds");
    if (out_dir.empty()) throw ConfigError("output.dir: must not be empty");
}

std::vector<double> ExperimentConfig::spacing() const {
    std::vector<double> h;
    for (std::size_t a = 0; a < shape.size(); ++a) h.push_back(extent[a] / (shape[a] - 1));
    return h;
}

std::vector<double> ExperimentConfig::v_grid() const {
    std::vector<double> v;
    const int k = static_cast<int>(std::floor((v_max - v_min) / v_step + 1e-9));
    for (int i = 0; i <= k; ++i) v.push_back(v_min + i * v_step);
    return v;
}

LKVector ExperimentConfig::lk() const { return lk_rectangle(extent); }

CumulantSet ExperimentConfig::cumulant_set() const {
    if (cumulants) return *cumulants;
    return analytic_cumulants(model, kappa4);
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    CumulantSet cum;
    bool have_cum = false;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"model", "cumulants", "grid", "ensemble",
                                          "thresholds", "theory", "output"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* s) { return section == s; }) == std::end(known))
                throw ConfigError(section + ": unknown section");
            if (section == "cumulants") have_cum = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(key + ": key outside any section");
        const std::string path = section + "." + key;

        if (section == "model") {
            if (key == "g") cfg.model.g = parse_double(path, val);
            else if (key == "tau") cfg.model.tau = parse_double(path, val);
            else if (key == "delta") cfg.model.delta = parse_double(path, val);
            else if (key == "n") cfg.model.n = static_cast<int>(parse_int(path, val));
            else if (key == "kappa4") {
                if (val == "complete") cfg.kappa4 = Kappa4Form::complete;
                else if (val == "printed") cfg.kappa4 = Kappa4Form::printed;
                else throw ConfigError(path + ": expected complete or printed");
            } else throw ConfigError(path + ": unknown key");
        } else if (section == "cumulants") {
            static const std::map<std::string, double CumulantSet::*> fields{
                {"gamma", &CumulantSet::gamma}, {"k0", &CumulantSet::k0},
                {"k1", &CumulantSet::k1},       {"k11", &CumulantSet::k11},
                {"K0", &CumulantSet::K0},       {"K1", &CumulantSet::K1},
                {"K11a", &CumulantSet::K11a},   {"K11aa", &CumulantSet::K11aa},
                {"K111a", &CumulantSet::K111a}, {"K111d", &CumulantSet::K111d}};
            const auto it = fields.find(key);
            if (it == fields.end()) throw ConfigError(path + ": unknown key");
            cum.*(it->second) = parse_double(path, val);
        } else if (section == "grid") {
            if (key == "shape") {
                cfg.shape.clear();
                for (const auto& s : split(val, ','))
                    cfg.shape.push_back(static_cast<int>(parse_int(path, s)));
            } else if (key == "extent") {
                cfg.extent.clear();
                for (const auto& s : split(val, ',')) cfg.extent.push_back(parse_double(path, s));
            } else throw ConfigError(path + ": unknown key");
        } else if (section == "ensemble") {
            if (key == "count") cfg.count = static_cast<int>(parse_int(path, val));
            else if (key == "base_seed") cfg.base_seed = parse_u64(path, val);
            else throw ConfigError(path + ": unknown key");
        } else if (section == "thresholds") {
            if (key == "v_min") cfg.v_min = parse_double(path, val);
            else if (key == "v_max") cfg.v_max = parse_double(path, val);
            else if (key == "step") cfg.v_step = parse_double(path, val);
            else throw ConfigError(path + ": unknown key");
        } else if (section == "theory") {
            if (key == "correction") {
                try {
                    cfg.correction = parse_correction(val);
                } catch (const std::invalid_argument&) {
                    throw ConfigError(path + ": expected gaussian, skewness or skewness+kurtosis");
                }
            } else throw ConfigError(path + ": unknown key");
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else if (key == "dump_fields") cfg.dump_fields = parse_bool(path, val);
            else if (key == "minkowski") cfg.minkowski = parse_bool(path, val);
            else throw ConfigError(path + ": unknown key");
        }
    }
    if (have_cum) cfg.cumulants = cum;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[model]\n"
       << "g = " << fmt_exact(cfg.model.g) << "\n"
       << "tau = " << fmt_exact(cfg.model.tau) << "\n"
       << "delta = " << fmt_exact(cfg.model.delta) << "\n"
       << "n = " << cfg.model.n << "\n"
       << "kappa4 = " << (cfg.kappa4 == Kappa4Form::complete ? "complete" : "printed") << "\n";
    if (cfg.cumulants) {
        const CumulantSet& c = *cfg.cumulants;
        os << "\n[cumulants]\n"
           << "gamma = " << fmt_exact(c.gamma) << "\n"
           << "k0 = " << fmt_exact(c.k0) << "\n"
           << "k1 = " << fmt_exact(c.k1) << "\n"
           << "k11 = " << fmt_exact(c.k11) << "\n"
           << "K0 = " << fmt_exact(c.K0) << "\n"
           << "K1 = " << fmt_exact(c.K1) << "\n"
           << "K11a = " << fmt_exact(c.K11a) << "\n"
           << "K11aa = " << fmt_exact(c.K11aa) << "\n"
           << "K111a = " << fmt_exact(c.K111a) << "\n"
           << "K111d = " << fmt_exact(c.K111d) << "\n";
    }
    os << "\n[grid]\nshape = ";
    for (std::size_t a = 0; a < cfg.shape.size(); ++a) os << (a ? ", " : "") << cfg.shape[a];
    os << "\nextent = ";
    for (std::size_t a = 0; a < cfg.extent.size(); ++a)
        os << (a ? ", " : "") << fmt_exact(cfg.extent[a]);
    os << "\n\n[ensemble]\n"
       << "count = " << cfg.count << "\n"
       << "base_seed = " << cfg.base_seed << "\n"
       << "\n[thresholds]\n"
       << "v_min = " << fmt_exact(cfg.v_min) << "\n"
       << "v_max = " << fmt_exact(cfg.v_max) << "\n"
       << "step = " << fmt_exact(cfg.v_step) << "\n"
       << "\n[theory]\n"
       << "correction = " << correction_name(cfg.correction) << "\n"
       << "\n[output]\n"
       << "dir = " << cfg.out_dir << "\n"
       << "dump_fields = " << (cfg.dump_fields ? "true" : "false") << "\n"
       << "minkowski = " << (cfg.minkowski ? "true" : "false") << "\n";
    return os.str();
}

void run_parallel(int count, int jobs, const std::function<void(int)>& task) {
    jobs = std::max(1, std::min(jobs, count));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<TheoryRow> theory_table(const ExperimentConfig& cfg) {
    cfg.validate();
    const CumulantSet c = cfg.cumulant_set();
    const LKVector lk = cfg.lk();
    const int n = lk.dim();
    std::vector<TheoryRow> rows;
    for (Correction level :
         {Correction::none, Correction::skewness, Correction::skewness_kurtosis}) {
        for (double v : cfg.v_grid()) {
            TheoryRow r;
            r.level = level;
            r.v = v;
            for (int d = 0; d <= n; ++d) r.xi.push_back(ec_density(d, v, c, level));
            r.e_chi = expected_ec(lk, v, c, level);
            for (int k = 0; k <= n; ++k) r.e_lk.push_back(expected_lk_excursion(k, lk, v, c, level));
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

void write_theory_csv(std::ostream& os, const ExperimentConfig& cfg,
                      const std::vector<TheoryRow>& rows) {
    const int n = static_cast<int>(cfg.shape.size());
    const CumulantSet c = cfg.cumulant_set();
    os << kCsvHeader << "\n";
    os << "# expected counts on the full domain; gamma=" << fmt(c.gamma) << "\n";
    os << "level,v";
    for (int d = 0; d <= n; ++d) os << ",Xi_" << d;
    os << ",E_chi";
    for (int k = 0; k <= n; ++k) os << ",E_LK_" << k;
    os << "\n";
    for (const auto& r : rows) {
        os << correction_name(r.level) << "," << fmt(r.v);
        for (double x : r.xi) os << "," << fmt(x);
        os << "," << fmt(r.e_chi);
        for (double x : r.e_lk) os << "," << fmt(x);
        os << "\n";
    }
}

SimResult simulate(const ExperimentConfig& cfg, int jobs,
                   const std::optional<std::filesystem::path>& dump_dir) {
    cfg.validate();
    const std::vector<double> vg = cfg.v_grid();
    const std::vector<double> h = cfg.spacing();
    const bool mf = cfg.minkowski && cfg.shape.size() == 2;
    std::vector<std::vector<double>> chi(cfg.count), area(cfg.count), half(cfg.count);
    if (dump_dir) std::filesystem::create_directories(*dump_dir);

    run_parallel(cfg.count, jobs, [&](int r) {
        const FieldGrid f =
            sample_model_field(cfg.shape, h, cfg.model, derive_seed(cfg.base_seed, r));
        if (dump_dir) {
            char name[32];
            std::snprintf(name, sizeof name, "field_%05d.bin", r);
            write_field(*dump_dir / name, f);
        }
        const ECCurve curve = ec_curve_sweep(f);
        for (double v : vg) {
            chi[r].push_back(static_cast<double>(curve.at(v)));
            if (mf) {
                const MF2D m = mf2d_estimate(f, v, curve);
                area[r].push_back(m.area);
                half[r].push_back(m.half_boundary);
            }
        }
    });

    SimResult res;
    res.has_mf = mf;
    const auto tc = mean_table(chi, vg);
    std::vector<MeanRow> ta, tb;
    if (mf) {
        ta = mean_table(area, vg);
        tb = mean_table(half, vg);
    }
    for (std::size_t i = 0; i < vg.size(); ++i) {
        SimRow row;
        row.v = vg[i];
        row.chi_mean = tc[i].mean;
        row.chi_se = tc[i].stderr_;
        if (mf) {
            row.area_mean = ta[i].mean;
            row.area_se = ta[i].stderr_;
            row.half_boundary_mean = tb[i].mean;
            row.half_boundary_se = tb[i].stderr_;
        }
        res.rows.push_back(row);
    }
    return res;
}

void write_sim_csv(std::ostream& os, const ExperimentConfig& cfg, const SimResult& sim) {
    os << kCsvHeader << "\n";
    os << "# realizations=" << cfg.count << " base_seed=" << cfg.base_seed << " shape=";
    for (std::size_t a = 0; a < cfg.shape.size(); ++a) os << (a ? "x" : "") << cfg.shape[a];
    os << "\n";
    os << "v,chi_mean,chi_se";
    if (sim.has_mf) os << ",area_mean,area_se,half_boundary_mean,half_boundary_se";
    os << "\n";
    for (const auto& r : sim.rows) {
        os << fmt(r.v) << "," << fmt(r.chi_mean) << "," << fmt(r.chi_se);
        if (sim.has_mf)
            os << "," << fmt(r.area_mean) << "," << fmt(r.area_se) << ","
               << fmt(r.half_boundary_mean) << "," << fmt(r.half_boundary_se);
        os << "\n";
    }
}

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = split(line, ',');
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != t.header.size())
                throw std::invalid_argument("csv: row has " + std::to_string(cells.size()) +
                                            " cells, header has " +
                                            std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) throw std::invalid_argument("csv: no header line");
    return t;
}

namespace {

double cell(const CsvTable& t, std::size_t row, const std::string& col) {
    const int c = t.column(col);
    if (c < 0) throw std::invalid_argument("csv: missing column '" + col + "'");
    const std::string& s = t.rows[row][static_cast<std::size_t>(c)];
    if (s == "nan") return std::nan("");
    try {
        std::size_t pos = 0;
        const double d = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("csv: bad number '" + s + "' in column " + col);
    }
}

constexpr Correction kLevels[] = {Correction::none, Correction::skewness,
                                  Correction::skewness_kurtosis};

// (v, E_chi) of one level from a theory table.
std::vector<std::pair<double, double>> theory_curve(const CsvTable& t, Correction level) {
    const int lc = t.column("level");
    if (lc < 0) throw std::invalid_argument("csv: missing column 'level'");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (parse_correction(t.rows[i][static_cast<std::size_t>(lc)]) != level) continue;
        out.emplace_back(cell(t, i, "v"), cell(t, i, "E_chi"));
    }
    return out;
}

}  // namespace

CompareReport compare_tables(const CsvTable& theory, const CsvTable& sim, Correction level) {
    CompareReport rep;
    std::vector<double> sv;
    for (std::size_t i = 0; i < sim.rows.size(); ++i) sv.push_back(cell(sim, i, "v"));
    for (Correction lv : kLevels) {
        const auto curve = theory_curve(theory, lv);
        if (curve.size() != sv.size())
            throw std::invalid_argument("compare: theory and simulation grids differ in length");
        CompareSummary s;
        s.level = lv;
        for (std::size_t i = 0; i < sv.size(); ++i) {
            if (std::abs(curve[i].first - sv[i]) > 1e-9)
                throw std::invalid_argument("compare: threshold grids differ at v=" + fmt(sv[i]));
            CompareRow r;
            r.level = lv;
            r.v = sv[i];
            r.theory = curve[i].second;
            r.sim_mean = cell(sim, i, "chi_mean");
            r.sim_se = cell(sim, i, "chi_se");
            const double diff = r.sim_mean - r.theory;
            if (r.sim_se > 0.0) r.z = diff / r.sim_se;
            else r.z = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
            s.sum_z2 += r.z * r.z;
            if (std::abs(r.z) <= 4.0) ++s.within_4se;
            ++s.points;
            rep.rows.push_back(r);
        }
        rep.summary.push_back(s);
    }
    rep.ordered = rep.summary[2].sum_z2 <= rep.summary[1].sum_z2 &&
                  rep.summary[1].sum_z2 <= rep.summary[0].sum_z2;
    const auto& chosen = rep.summary[static_cast<int>(level)];
    rep.consistent = chosen.points > 0 && chosen.within_4se >= 0.9 * chosen.points;
    rep.best = std::min_element(rep.summary.begin(), rep.summary.end(),
                                [](const auto& a, const auto& b) { return a.sum_z2 < b.sum_z2; })
                   ->level;
    return rep;
}

void write_compare_csv(std::ostream& os, const CompareReport& r) {
    os << kCsvHeader << "\n";
    os << "level,v,theory,sim_mean,sim_se,z\n";
    for (const auto& row : r.rows)
        os << correction_name(row.level) << "," << fmt(row.v) << "," << fmt(row.theory) << ","
           << fmt(row.sim_mean) << "," << fmt(row.sim_se) << "," << fmt(row.z) << "\n";
}

void print_compare_report(std::ostream& os, const CompareReport& r) {
    os << "# raw expected counts on the whole domain\n";
    os << std::left << std::setw(20) << "level" << std::setw(14) << "sum_z2"
       << "within_4se\n";
    for (const auto& s : r.summary)
    {
        std::ostringstream z;
        z << std::fixed << std::setprecision(3) << s.sum_z2;
        os << std::setw(20) << correction_name(s.level) << std::setw(14) << z.str()
           << s.within_4se << "/" << s.points << "\n";
    }
    os << "best=" << correction_name(r.best) << " ordered=" << (r.ordered ? "yes" : "no")
       << " verdict=" << (r.consistent ? "consistent" : "inconsistent") << "\n";
}

std::vector<IdentityLine> identity_battery(int fault_sign, std::int64_t mc_samples) {
    std::vector<IdentityLine> out;
    const auto multisets = cycle_multisets(4);
    auto describe = [](const std::vector<int>& c) {
        std::string s = "{";
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
        return s + "}";
    };
    auto run = [&](const std::string& id, const std::string& params, auto&& check) {
        IdentityLine line{id, params, true, ""};
        for (const auto& c : multisets) {
            if (!check(c)) {
                line.pass = false;
                line.detail = "fails for cycles " + describe(c);
                break;
            }
        }
        out.push_back(std::move(line));
    };
    const Rational betas[] = {Rational(0), Rational(1, 3), Rational(-1, 5)};
    const Rational gammas[] = {Rational(1, 2), Rational(1), Rational(3)};
    for (int n = 1; n <= 3; ++n) {
        const std::string ns = "n=" + std::to_string(n);
        run("unit_kernel", ns, [&](const auto& c) { return bool(verify_lemma_a1(n, c, fault_sign)); });
        for (const auto& b : betas)
            run("coupled_kernel", ns + " beta=" + b.get_str(),
                [&](const auto& c) { return bool(verify_lemma_a2(n, b, c)); });
        for (const auto& b : betas)
            for (const auto& g : gammas)
                run("scaled_kernel", ns + " beta=" + b.get_str() + " gamma=" + g.get_str(),
                    [&](const auto& c) { return bool(verify_prop31(n, g, b, c)); });
        for (int K = 2; K <= 3; ++K)
            for (const auto& b : betas)
                for (const auto& g : gammas)
                    run("loop_annihilation",
                        ns + " K=" + std::to_string(K) + " beta=" + b.get_str() +
                            " gamma=" + g.get_str(),
                        [&](const auto& c) {
                            return bool(verify_loop_annihilation(n, g, b, K, c));
                        });
    }
    for (int n = 1; n <= 3; ++n) {
        for (int x = 0; x <= 2; ++x) {
            const auto est = goe_hermite_mc(n, x, mc_samples, derive_seed(0x60e, n * 10 + x));
            const double target = hermite(n, x);
            const double dev = std::abs(est.mean - target);
            std::ostringstream d;
            d << "mean=" << fmt(est.mean) << " target=" << fmt(target) << " se=" << fmt(est.stderr_);
            out.push_back({"goe_mc", "n=" + std::to_string(n) + " x=" + std::to_string(x),
                           dev < 4.0 * est.stderr_, d.str()});
        }
    }
    return out;
}

std::vector<TubeLine> tube_battery(std::int64_t samples, std::uint64_t seed) {
    const std::vector<std::vector<double>> boxes{{1.5}, {1.0, 2.0}, {1.0, 0.5, 2.0}};
    std::vector<TubeLine> out;
    int k = 0;
    for (const auto& e : boxes) {
        for (double rho : {0.1, 0.5, 1.0}) {
            TubeLine t;
            t.n = static_cast<int>(e.size());
            t.rho = rho;
            t.steiner = steiner_tube_volume(lk_rectangle(e), rho);
            const auto est = mc_tube_volume(e, rho, samples, derive_seed(seed, k++));
            t.estimate = est.estimate;
            t.stderr_ = est.stderr_;
            // In 1-D the sampling box is the tube itself and the estimate is exact.
            t.pass = std::abs(t.estimate - t.steiner) <= 4.0 * t.stderr_ + 1e-12 * t.steiner;
            out.push_back(t);
        }
    }
    return out;
}

std::string plot_svg(const CsvTable& theory, const CsvTable* sim) {
    struct Series {
        std::string label, colour, dash;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> curves;
    const char* colours[] = {"#1f77b4", "#2ca02c", "#d62728"};
    const char* dashes[] = {"2,3", "6,3,2,3", "6,4"};
    for (int i = 0; i < 3; ++i)
        curves.push_back({std::string(correction_name(kLevels[i])), colours[i], dashes[i],
                          theory_curve(theory, kLevels[i])});
    std::vector<std::array<double, 3>> band;  // v, mean, se
    if (sim)
        for (std::size_t i = 0; i < sim->rows.size(); ++i) {
            double se = cell(*sim, i, "chi_se");
            if (std::isnan(se)) se = 0.0;
            band.push_back({cell(*sim, i, "v"), cell(*sim, i, "chi_mean"), se});
        }

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    auto grow = [&](double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    };
    for (const auto& s : curves)
        for (auto [x, y] : s.pts) grow(x, y);
    for (const auto& b : band) {
        grow(b[0], b[1] - b[2]);
        grow(b[0], b[1] + b[2]);
    }
    if (!std::isfinite(x0)) throw std::invalid_argument("plot: no data points");
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
    const double W = 640, H = 420, L = 60, R = 20, T = 20, B = 50;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << py(0.0 < y0 ? y0 : (0.0 > y1 ? y1 : 0.0))
       << "\" x2=\"" << W - R << "\" y2=\"" << py(0.0 < y0 ? y0 : (0.0 > y1 ? y1 : 0.0))
       << "\" stroke=\"#999\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">v</text>\n";
    os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
       << ")\" text-anchor=\"middle\">E chi(v)</text>\n";
    os << "<text x=\"" << L << "\" y=\"" << H - 32 << "\">" << fmt(x0) << "</text>\n";
    os << "<text x=\"" << W - R << "\" y=\"" << H - 32 << "\" text-anchor=\"end\">" << fmt(x1)
       << "</text>\n";
    os << "<text x=\"" << L - 5 << "\" y=\"" << py(y1) + 4 << "\" text-anchor=\"end\">" << fmt(y1)
       << "</text>\n";
    os << "<text x=\"" << L - 5 << "\" y=\"" << py(y0) << "\" text-anchor=\"end\">" << fmt(y0)
       << "</text>\n";
    if (!band.empty()) {
        os << "<polygon fill=\"#bbbbbb\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
        for (const auto& b : band) os << px(b[0]) << "," << py(b[1] + b[2]) << " ";
        for (auto it = band.rbegin(); it != band.rend(); ++it)
            os << px((*it)[0]) << "," << py((*it)[1] - (*it)[2]) << " ";
        os << "\"/>\n";
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
        for (const auto& b : band) os << px(b[0]) << "," << py(b[1]) << " ";
        os << "\"><title>simulation</title></polyline>\n";
    }
    for (const auto& s : curves) {
        os << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-dasharray=\""
           << s.dash << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.pts) os << px(x) << "," << py(y) << " ";
        os << "\"><title>" << s.label << "</title></polyline>\n";
    }
    double ly = T + 10;
    auto legend = [&](const std::string& label, const std::string& colour, const std::string& dash) {
        os << "<line x1=\"" << W - 190 << "\" y1=\"" << ly << "\" x2=\"" << W - 160 << "\" y2=\""
           << ly << "\" stroke=\"" << colour << "\" stroke-dasharray=\"" << dash
           << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << W - 155 << "\" y=\"" << ly + 4 << "\">" << label << "</text>\n";
        ly += 16;
    };
    if (!band.empty()) legend("simulation", "black", "none");
    for (const auto& s : curves) legend(s.label, s.colour, s.dash);
    os << "</svg>\n";
    return os.str();
}

}  // namespace mlab
