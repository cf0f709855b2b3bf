#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinfact/factorization.hpp"
#include "spinfact/field.hpp"
#include "spinfact/propagator.hpp"

namespace spinfact {

// Config-file problem: carries the offending key and line for the CLI to
// report precisely.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, int line, const std::string& message)
        : std::runtime_error("config key '" + key + "' (line " + std::to_string(line) +
                             "): " + message),
          key_(std::move(key)),
          line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

  private:
    std::string key_;
    int line_;
};

enum class FieldFamily { Static, Precession, ClassI, ClassIISpiral, Tabulated };
enum class OutputKind { Traces, Residuals, Transitions, Berry, ResonanceScan };

// One scenario per file, "key = value" lines, '#' comments.
// The full key set is documented in the README.
struct ScenarioConfig {
    std::string name;
    double spin_j = 0.5;
    FieldFamily family = FieldFamily::Static;

    // static
    Eigen::Vector3d axis{0.0, 0.0, 1.0};
    // precession / class_i precession path
    double theta = 0.0;
    double omega = 0.0;
    // constant coupling (static, precession)
    double kB = 0.0;
    // class_i / tabulated path source
    std::string path_kind;  // "precession" | "spiral" | "csv"
    std::string path_csv;
    // spiral parameters (class_i spiral path, class_ii_spiral)
    double lambda = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    int sign = +1;
    // tabulated kB law: kB0 + cos_amp cos(cos_freq t) + sin_amp sin(sin_freq t)
    double kB0 = 0.0;
    double kB_cos_amp = 0.0, kB_cos_freq = 0.0;
    double kB_sin_amp = 0.0, kB_sin_freq = 0.0;

    double t_end = 0.0;
    int steps = 0;
    Stepper stepper = Stepper::ExpMidpoint;
    double tolerance = 0.0;  // 0 = stepper default (1e-6 midpoint, 1e-9 magnus4)
    std::vector<OutputKind> outputs;

    // resonance_scan output
    double scan_kB_min = 0.0, scan_kB_max = 0.0;
    int scan_points = 41;

    double effective_tolerance() const;
};

ScenarioConfig parse_scenario_file(const std::string& filename);

// Build the field described by the config (loads CSV paths as needed).
FieldSpec make_field(const ScenarioConfig& config);

struct RunOptions {
    std::string out_dir = ".";
    int jobs = 1;
    std::optional<Stepper> stepper_override;
    std::optional<int> steps_override;
};

// Execute the scenario and write the requested output files into
// options.out_dir. Data files are byte-deterministic; run metadata goes to
// `log` only. Returns 0 when every residual/tolerance check passes, 2 on a
// check failure. Config and IO problems throw (the CLI maps them to exit 1).
int run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);

// Execute only the invariant suite (algebra, unitarity, residual,
// closed-form matches where the family has one) and print one verdict line
// per check to `out`. No trace files are written. Returns 0/2 like run.
int verify_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& out);

// Scientific notation with 17 significant digits (round-trip exact).
std::string format_float(double value);

}  // namespace spinfact
