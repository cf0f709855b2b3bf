#include "spinfact/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "spinfact/analysis.hpp"
#include "spinfact/solutions.hpp"

namespace spinfact {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

class KeyTable {
  public:
    KeyTable(std::map<std::string, RawEntry> entries, std::string filename)
        : entries_(std::move(entries)), filename_(std::move(filename)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(key, 0, "required key missing in " + filename_);
        used_.insert(it->first);
        return trim(it->second.value);
    }

    std::string get_string_or(const std::string& key, const std::string& fallback) {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) {
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, line_of(key), "expected a real number, got '" + raw + "'");
        }
    }

    double get_double_or(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    int get_int(const std::string& key) {
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const int v = std::stoi(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, line_of(key), "expected an integer, got '" + raw + "'");
        }
    }

    int get_int_or(const std::string& key, int fallback) {
        return has(key) ? get_int(key) : fallback;
    }

    // spin_j accepts "0.5", "1/2", "3/2", ...
    double get_half_integer(const std::string& key) {
        const std::string raw = get_string(key);
        const std::size_t slash = raw.find('/');
        try {
            if (slash != std::string::npos) {
                const double num = std::stod(raw.substr(0, slash));
                const double den = std::stod(raw.substr(slash + 1));
                return num / den;
            }
            return std::stod(raw);
        } catch (const std::exception&) {
            throw ConfigError(key, line_of(key), "expected a (half-)integer like 0.5 or 3/2, got '" +
                                                     raw + "'");
        }
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : entries_) {
            if (!used_.count(key)) {
                throw ConfigError(key, entry.line, "unknown or unused key for this field family");
            }
        }
    }

  private:
    std::map<std::string, RawEntry> entries_;
    std::set<std::string> used_;
    std::string filename_;
};

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string token = trim(item);
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

}  // namespace

double ScenarioConfig::effective_tolerance() const {
    if (tolerance > 0.0) return tolerance;
    return stepper == Stepper::ExpMidpoint ? 1e-6 : 1e-9;
}

ScenarioConfig parse_scenario_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open config file: " + filename);

    std::map<std::string, RawEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(stripped, lineno, "expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("(empty)", lineno, "empty key");
        if (entries.count(key)) {
            throw ConfigError(key, lineno, "duplicate key (first at line " +
                                               std::to_string(entries[key].line) + ")");
        }
        entries[key] = RawEntry{value, lineno};
    }

    KeyTable table(std::move(entries), filename);
    ScenarioConfig config;

    config.name = table.get_string("name");
    if (config.name.empty() ||
        config.name.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") != std::string::npos) {
        throw ConfigError("name", table.line_of("name"),
                          "must be a non-empty identifier ([A-Za-z0-9_-])");
    }

    config.spin_j = table.get_half_integer("spin_j");
    {
        const double two_j = 2.0 * config.spin_j;
        if (!(config.spin_j > 0.0) || std::abs(two_j - std::round(two_j)) > 1e-9) {
            throw ConfigError("spin_j", table.line_of("spin_j"),
                              "must be a positive multiple of 1/2");
        }
    }

    const std::string family = table.get_string("field");
    if (family == "static") {
        config.family = FieldFamily::Static;
        config.axis = {table.get_double_or("nx", 0.0), table.get_double_or("ny", 0.0),
                       table.get_double_or("nz", 1.0)};
        if (config.axis.norm() < 1e-12) {
            throw ConfigError("nx", table.line_of("nx"), "static axis must be non-zero");
        }
        config.axis.normalize();
        config.kB = table.get_double("kB");
    } else if (family == "precession") {
        config.family = FieldFamily::Precession;
        config.theta = table.get_double("theta");
        config.omega = table.get_double("omega");
        config.kB = table.get_double("kB");
    } else if (family == "class_i") {
        config.family = FieldFamily::ClassI;
        config.path_kind = table.get_string("path");
        if (config.path_kind == "precession") {
            config.theta = table.get_double("theta");
            config.omega = table.get_double("omega");
        } else if (config.path_kind == "spiral") {
            config.lambda = table.get_double("lambda");
            config.c1 = table.get_double("c1");
            config.sign = table.get_int_or("sign", +1);
        } else if (config.path_kind == "csv") {
            config.path_csv = table.get_string("path_csv");
        } else {
            throw ConfigError("path", table.line_of("path"),
                              "unknown path kind '" + config.path_kind +
                                  "' (precession | spiral | csv)");
        }
    } else if (family == "class_ii_spiral") {
        config.family = FieldFamily::ClassIISpiral;
        config.lambda = table.get_double("lambda");
        config.c1 = table.get_double("c1");
        config.c2 = table.get_double("c2");
        config.sign = table.get_int_or("sign", +1);
        if (!(config.lambda > 0.0)) {
            throw ConfigError("lambda", table.line_of("lambda"), "must be > 0");
        }
        if (!(config.c1 * config.c1 > config.lambda * config.lambda)) {
            throw ConfigError("c1", table.line_of("c1"), "class_ii_spiral requires c1^2 > lambda^2");
        }
    } else if (family == "tabulated") {
        config.family = FieldFamily::Tabulated;
        config.path_csv = table.get_string("path_csv");
        config.kB0 = table.get_double("kB0");
        config.kB_cos_amp = table.get_double_or("kB_cos_amp", 0.0);
        config.kB_cos_freq = table.get_double_or("kB_cos_freq", 0.0);
        config.kB_sin_amp = table.get_double_or("kB_sin_amp", 0.0);
        config.kB_sin_freq = table.get_double_or("kB_sin_freq", 0.0);
    } else {
        throw ConfigError("field", table.line_of("field"),
                          "unknown field family '" + family +
                              "' (static | precession | class_i | class_ii_spiral | tabulated)");
    }

    config.t_end = table.get_double("t_end");
    if (!(config.t_end > 0.0)) {
        throw ConfigError("t_end", table.line_of("t_end"), "must be > 0");
    }
    config.steps = table.get_int("steps");
    if (config.steps < 2) {
        throw ConfigError("steps", table.line_of("steps"), "must be >= 2");
    }
    config.stepper = [&] {
        const std::string s = table.get_string_or("stepper", "exp-midpoint");
        try {
            return parse_stepper(s);
        } catch (const std::exception& e) {
            throw ConfigError("stepper", table.line_of("stepper"), e.what());
        }
    }();
    config.tolerance = table.get_double_or("tolerance", 0.0);
    if (table.has("tolerance") && !(config.tolerance > 0.0)) {
        throw ConfigError("tolerance", table.line_of("tolerance"), "must be > 0");
    }

    if (config.family == FieldFamily::ClassIISpiral) {
        const double bound = std::numbers::pi / (2.0 * config.lambda);
        if (!(config.t_end < bound)) {
            throw ConfigError("t_end", table.line_of("t_end"),
                              "class_ii_spiral requires t_end < pi/(2 lambda) = " +
                                  format_float(bound));
        }
    }

    for (const std::string& token : split_csv_list(table.get_string_or("outputs", "residuals"))) {
        if (token == "traces") config.outputs.push_back(OutputKind::Traces);
        else if (token == "residuals") config.outputs.push_back(OutputKind::Residuals);
        else if (token == "transitions") config.outputs.push_back(OutputKind::Transitions);
        else if (token == "berry") config.outputs.push_back(OutputKind::Berry);
        else if (token == "resonance_scan") config.outputs.push_back(OutputKind::ResonanceScan);
        else {
            throw ConfigError("outputs", table.line_of("outputs"),
                              "unknown output '" + token +
                                  "' (traces | residuals | transitions | berry | resonance_scan)");
        }
    }
    const bool wants_scan =
        std::find(config.outputs.begin(), config.outputs.end(), OutputKind::ResonanceScan) !=
        config.outputs.end();
    if (wants_scan) {
        if (config.family != FieldFamily::Precession) {
            throw ConfigError("outputs", table.line_of("outputs"),
                              "resonance_scan requires field = precession");
        }
        config.scan_kB_min = table.get_double("scan_kB_min");
        config.scan_kB_max = table.get_double("scan_kB_max");
        config.scan_points = table.get_int_or("scan_points", 41);
        if (!(config.scan_kB_max > config.scan_kB_min)) {
            throw ConfigError("scan_kB_max", table.line_of("scan_kB_max"),
                              "must exceed scan_kB_min");
        }
        if (config.scan_points < 3) {
            throw ConfigError("scan_points", table.line_of("scan_points"), "must be >= 3");
        }
    }

    table.reject_unused();
    return config;
}

FieldSpec make_field(const ScenarioConfig& config) {
    FieldSpec field;
    field.k = 1.0;
    switch (config.family) {
        case FieldFamily::Static: {
            const Eigen::Vector3d axis = config.axis;
            const double kB = config.kB;
            const PathSample frozen{axis, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
            field.path = DirectionPath(PathKind::Analytic, [frozen](double) { return frozen; });
            field.B = [kB](double) { return kB; };
            return field;
        }
        case FieldFamily::Precession: {
            field.path = make_precession_path(config.theta, config.omega);
            const double kB = config.kB;
            field.B = [kB](double) { return kB; };
            return field;
        }
        case FieldFamily::ClassI: {
            DirectionPath path;
            if (config.path_kind == "precession") {
                path = make_precession_path(config.theta, config.omega);
            } else if (config.path_kind == "spiral") {
                path = class_ii_spiral_path(config.lambda, config.c1, config.sign);
            } else {
                path = load_tabulated_path_csv(config.path_csv);
            }
            return class_i_field(path);
        }
        case FieldFamily::ClassIISpiral: {
            DirectionPath path = class_ii_spiral_path(config.lambda, config.c1, config.sign);
            return class_ii_field(path, config.c2);
        }
        case FieldFamily::Tabulated: {
            field.path = load_tabulated_path_csv(config.path_csv);
            const double b0 = config.kB0, ca = config.kB_cos_amp, cf = config.kB_cos_freq,
                         sa = config.kB_sin_amp, sf = config.kB_sin_freq;
            field.B = [b0, ca, cf, sa, sf](double t) {
                return b0 + ca * std::cos(cf * t) + sa * std::sin(sf * t);
            };
            return field;
        }
    }
    throw std::logic_error("make_field: unhandled family");
}

std::string format_float(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", value);
    return buf;
}

namespace {

struct CheckRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

void print_rows(const std::vector<CheckRow>& rows, std::ostream& out) {
    for (const auto& row : rows) {
        out << (row.pass ? "[PASS] " : "[FAIL] ") << row.name;
        if (!row.detail.empty()) out << ": " << row.detail;
        out << "\n";
    }
}

bool all_pass(const std::vector<CheckRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no newline translation
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

void write_angles_csv(const std::filesystem::path& path, const FactorizationResult& result) {
    std::ofstream out = open_output(path);
    out << "t,beta,phi,arclen,speed,residual\n";
    for (int k = 0; k <= result.grid.steps; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out << format_float(result.grid.node(k)) << ',' << format_float(result.angles.beta[i]) << ','
            << format_float(result.phi[i]) << ',' << format_float(result.angles.arclen[i]) << ','
            << format_float(result.angles.speed[i]) << ',' << format_float(result.residual[i])
            << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::string& symbol,
                     const PropagatorTrace& trace) {
    std::ofstream out = open_output(path);
    const int dim = static_cast<int>(trace.unitaries.front().rows());
    out << 't';
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            out << ',' << symbol << "_re_" << r << '_' << c << ',' << symbol << "_im_" << r << '_'
                << c;
        }
    }
    out << '\n';
    for (int k = 0; k <= trace.grid.steps; ++k) {
        out << format_float(trace.grid.node(k));
        const Eigen::MatrixXcd& u = trace.at(k);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                out << ',' << format_float(u(r, c).real()) << ',' << format_float(u(r, c).imag());
            }
        }
        out << '\n';
    }
}

void write_transitions_csv(const std::filesystem::path& path, const TransitionTable& table) {
    std::ofstream out = open_output(path);
    const int dim = static_cast<int>(table.P.front().rows());
    out << 't';
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) out << ",P_" << r << '_' << c;
    }
    out << '\n';
    for (int k = 0; k <= table.grid.steps; ++k) {
        out << format_float(table.grid.node(k));
        const Eigen::MatrixXd& p = table.P[static_cast<std::size_t>(k)];
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) out << ',' << format_float(p(r, c));
        }
        out << '\n';
    }
}

void write_berry_csv(const std::filesystem::path& path, const BerryPhaseReport& report, double j) {
    std::ofstream out = open_output(path);
    out << "m,measured_phase,expected_phase,circle_distance\n";
    for (std::size_t i = 0; i < report.measured_phase.size(); ++i) {
        out << format_float(j - static_cast<double>(i)) << ',' << format_float(report.measured_phase[i])
            << ',' << format_float(report.expected_phase[i]) << ','
            << format_float(report.circle_distance[i]) << '\n';
    }
}

void write_resonance_csv(const std::filesystem::path& path, const ResonanceScanResult& scan) {
    std::ofstream out = open_output(path);
    out << "kB,fixed_axis_peak,moving_axis_peak\n";
    for (std::size_t i = 0; i < scan.kB.size(); ++i) {
        out << format_float(scan.kB[i]) << ',' << format_float(scan.fixed_axis_peak[i]) << ','
            << format_float(scan.moving_axis_peak[i]) << '\n';
    }
}

bool wants(const ScenarioConfig& config, OutputKind kind) {
    return std::find(config.outputs.begin(), config.outputs.end(), kind) != config.outputs.end();
}

// Family-specific invariant checks shared by run (summary verdicts) and verify.
std::vector<CheckRow> invariant_checks(const ScenarioConfig& config, const FieldSpec& field,
                                       const SpinRep& rep, const FactorizationResult& result) {
    std::vector<CheckRow> rows;
    const double tol = config.effective_tolerance();

    rows.push_back({"residual max <= " + format_float(tol),
                    result.max_residual() <= tol,
                    "max ||U - A D N||_F = " + format_float(result.max_residual())});

    double drift = 0.0;
    for (const PropagatorTrace* trace : {&result.U, &result.A, &result.D, &result.N}) {
        drift = std::max(drift, trace->max_unitarity_drift());
    }
    rows.push_back({"unitarity of U, A, D, N <= 1e-10", drift <= 1e-10,
                    "max ||T^+ T - I||_F = " + format_float(drift)});

    // Third generator component vanishes identically.
    {
        GeneratorFunction gen = nonadiabatic_generator(
            result.angles,
            CumulativeIntegral([field](double t) { return -field.kB(t); }, result.grid),
            field.path);
        bool exact = true;
        for (int k = 0; k <= 16; ++k) {
            if (gen(result.grid.t_end * k / 16.0).z() != 0.0) exact = false;
        }
        rows.push_back({"non-adiabatic generator has w3 = 0 exactly", exact, ""});
    }

    const bool sudden = [&] {
        for (int k = 0; k <= result.grid.steps; ++k) {
            if (std::abs(field.kB(result.grid.node(k))) != 0.0) return false;
        }
        return true;
    }();
    if (sudden) {
        double err_n = 0.0, err_u = 0.0;
        for (int k = 0; k <= result.grid.steps; ++k) {
            const auto i = static_cast<std::size_t>(k);
            err_n = std::max(err_n,
                             (result.N.unitaries[i] - result.A.unitaries[i].adjoint()).norm());
            err_u = std::max(
                err_u, (result.U.unitaries[i] -
                        Eigen::MatrixXcd::Identity(rep.dim, rep.dim)).norm());
        }
        rows.push_back({"sudden limit: N = A^-1", err_n <= 1e-8,
                        "max ||N - A^+||_F = " + format_float(err_n)});
        rows.push_back(
            {"sudden limit: U = I", err_u <= 1e-8, "max ||U - I||_F = " + format_float(err_u)});
    }

    if (config.family == FieldFamily::ClassI) {
        double gap = 0.0, err = 0.0;
        for (int k = 0; k <= result.grid.steps; ++k) {
            const auto i = static_cast<std::size_t>(k);
            gap = std::max(gap, std::abs(result.angles.beta[i] - result.phi[i]));
            err = std::max(err, (result.N.unitaries[i] -
                                 class_i_closed_n(result.angles.arclen[i], rep)).norm());
        }
        rows.push_back({"class i: beta - phi = 0", gap <= 1e-6,
                        "max |beta - phi| = " + format_float(gap)});
        rows.push_back({"class i: N matches exp(i S2 l)", err <= tol,
                        "max ||N - closed||_F = " + format_float(err)});
    }

    if (config.family == FieldFamily::ClassIISpiral) {
        double speed_err = 0.0, line_err = 0.0, err = 0.0;
        for (int k = 0; k <= result.grid.steps; ++k) {
            const auto i = static_cast<std::size_t>(k);
            const double t = result.grid.node(k);
            speed_err = std::max(speed_err, std::abs(result.angles.speed[i] - config.c1));
            line_err = std::max(
                line_err, std::abs(result.angles.beta[i] - result.phi[i] - config.c2 * t));
            err = std::max(err, (result.N.unitaries[i] -
                                 class_ii_closed_n(config.c1, config.c2, t, rep)).norm());
        }
        rows.push_back({"class ii: |n'| = c1", speed_err <= 1e-8,
                        "max deviation = " + format_float(speed_err)});
        rows.push_back({"class ii: beta - phi = c2 t", line_err <= 1e-6,
                        "max deviation = " + format_float(line_err)});
        rows.push_back({"class ii: N matches closed form", err <= tol,
                        "max ||N - closed||_F = " + format_float(err)});
    }

    if (config.family == FieldFamily::Static) {
        rows.push_back({"static field: residual <= 1e-12", result.max_residual() <= 1e-12,
                        "max residual = " + format_float(result.max_residual())});
    }

    return rows;
}

TimeGrid effective_grid(const ScenarioConfig& config, const RunOptions& options) {
    const int steps = options.steps_override.value_or(config.steps);
    if (steps < 2) throw std::runtime_error("steps override must be >= 2");
    if (config.family == FieldFamily::ClassIISpiral) {
        const double bound = std::numbers::pi / (2.0 * config.lambda);
        if (!(config.t_end < bound)) {
            throw std::runtime_error("class_ii_spiral requires t_end < pi/(2 lambda)");
        }
    }
    return TimeGrid(config.t_end, steps);
}

}  // namespace

int run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& log) {
    const auto t_start = std::chrono::steady_clock::now();

    ScenarioConfig effective = config;
    if (options.stepper_override) effective.stepper = *options.stepper_override;
    if (options.steps_override) effective.steps = *options.steps_override;

    const TimeGrid grid = effective_grid(effective, RunOptions{});
    const SpinRep rep = spin_matrices(effective.spin_j);
    const FieldSpec field = make_field(effective);

    const FactorizationResult result =
        factorize(field, rep, grid, effective.stepper, options.jobs);

    std::filesystem::create_directories(options.out_dir);
    const std::filesystem::path dir(options.out_dir);
    const std::string base = effective.name;

    if (wants(effective, OutputKind::Residuals)) {
        write_angles_csv(dir / (base + "_angles.csv"), result);
    }
    if (wants(effective, OutputKind::Traces)) {
        write_trace_csv(dir / (base + "_trace_U.csv"), "U", result.U);
        write_trace_csv(dir / (base + "_trace_A.csv"), "A", result.A);
        write_trace_csv(dir / (base + "_trace_D.csv"), "D", result.D);
        write_trace_csv(dir / (base + "_trace_N.csv"), "N", result.N);
    }
    if (wants(effective, OutputKind::Transitions)) {
        write_transitions_csv(dir / (base + "_transitions.csv"),
                              transition_probabilities(result.N, rep));
    }
    if (wants(effective, OutputKind::Berry)) {
        const BerryPhaseReport report = berry_phase_check(field.path, rep, effective.t_end,
                                                          effective.steps, effective.stepper);
        write_berry_csv(dir / (base + "_berry.csv"), report, rep.j);
    }
    if (wants(effective, OutputKind::ResonanceScan)) {
        std::vector<double> kBs(static_cast<std::size_t>(effective.scan_points));
        for (int i = 0; i < effective.scan_points; ++i) {
            kBs[static_cast<std::size_t>(i)] =
                effective.scan_kB_min + (effective.scan_kB_max - effective.scan_kB_min) * i /
                                            (effective.scan_points - 1);
        }
        const ResonanceScanResult scan =
            resonance_scan(effective.theta, effective.omega, kBs, rep, effective.t_end,
                           effective.steps, effective.stepper, options.jobs);
        write_resonance_csv(dir / (base + "_resonance.csv"), scan);
    }

    const std::vector<CheckRow> rows = invariant_checks(effective, field, rep, result);
    {
        std::ofstream summary = open_output(dir / (base + "_summary.txt"));
        summary << "scenario " << base << "\n";
        summary << "stepper " << stepper_name(effective.stepper) << "\n";
        summary << "steps " << grid.steps << "\n";
        summary << "tolerance " << format_float(effective.effective_tolerance()) << "\n";
        summary << "max_residual " << format_float(result.max_residual()) << "\n";
        if (result.anchor.anchor_index > 0) {
            summary << "frame_anchor_shifted_to_node " << result.anchor.anchor_index << "\n";
        }
        print_rows(rows, summary);
    }

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t_start);
    log << "run " << base << ": " << grid.steps << " steps, "
        << stepper_name(effective.stepper) << ", " << elapsed.count() << " ms, max residual "
        << format_float(result.max_residual()) << "\n";
    if (result.anchor.anchor_index > 0) {
        log << "note: frame anchor shifted to node " << result.anchor.anchor_index
            << " (stationary start)\n";
    }

    return all_pass(rows) ? 0 : 2;
}

int verify_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& out) {
    ScenarioConfig effective = config;
    if (options.stepper_override) effective.stepper = *options.stepper_override;
    if (options.steps_override) effective.steps = *options.steps_override;

    const TimeGrid grid = effective_grid(effective, RunOptions{});
    const SpinRep rep = spin_matrices(effective.spin_j);

    std::vector<CheckRow> rows;

    // Representation checks for the configured spin.
    {
        const Eigen::MatrixXcd c12 = rep.S1 * rep.S2 - rep.S2 * rep.S1 -
                                     std::complex<double>(0, 1) * rep.S3;
        const Eigen::MatrixXcd c23 = rep.S2 * rep.S3 - rep.S3 * rep.S2 -
                                     std::complex<double>(0, 1) * rep.S1;
        const Eigen::MatrixXcd c31 = rep.S3 * rep.S1 - rep.S1 * rep.S3 -
                                     std::complex<double>(0, 1) * rep.S2;
        const double comm = std::max({c12.cwiseAbs().maxCoeff(), c23.cwiseAbs().maxCoeff(),
                                      c31.cwiseAbs().maxCoeff()});
        rows.push_back({"algebra: commutation relations", comm <= 1e-12,
                        "max entry defect = " + format_float(comm)});

        const double herm = std::max({(rep.S1 - rep.S1.adjoint()).cwiseAbs().maxCoeff(),
                                      (rep.S2 - rep.S2.adjoint()).cwiseAbs().maxCoeff(),
                                      (rep.S3 - rep.S3.adjoint()).cwiseAbs().maxCoeff()});
        rows.push_back(
            {"algebra: Hermiticity", herm <= 1e-14, "max entry defect = " + format_float(herm)});

        const Eigen::MatrixXcd casimir = rep.S1 * rep.S1 + rep.S2 * rep.S2 + rep.S3 * rep.S3 -
                                         rep.j * (rep.j + 1.0) *
                                             Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
        rows.push_back({"algebra: Casimir = j(j+1) I", casimir.cwiseAbs().maxCoeff() <= 1e-12,
                        "max entry defect = " + format_float(casimir.cwiseAbs().maxCoeff())});
    }

    const FieldSpec field = make_field(effective);
    const FactorizationResult result =
        factorize(field, rep, grid, effective.stepper, options.jobs);
    for (CheckRow& row : invariant_checks(effective, field, rep, result)) {
        rows.push_back(std::move(row));
    }

    if (wants(effective, OutputKind::Berry)) {
        const BerryPhaseReport report = berry_phase_check(field.path, rep, effective.t_end,
                                                          effective.steps, effective.stepper);
        rows.push_back({"berry: A(T) eigenphases match exp(-i m Omega)",
                        report.max_discrepancy <= effective.effective_tolerance(),
                        "max circle distance = " + format_float(report.max_discrepancy) +
                            ", Omega = " + format_float(report.solid_angle)});
    }

    print_rows(rows, out);
    out << (all_pass(rows) ? "verify: all checks passed\n" : "verify: CHECKS FAILED\n");
    return all_pass(rows) ? 0 : 2;
}

}  // namespace spinfact
