#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gcmetro/detection.hpp"
#include "gcmetro/states.hpp"

namespace gcmetro::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNonConvergence = 3, kValidationFailure = 4 };

enum class SweepVar { PHI, KAPPA, ZETA_ABS, TRANSMISSION };
enum class OutputFormat { CSV, JSON };

std::string_view to_string(SweepVar v);
SweepVar sweep_var_from_string(std::string_view s);
DetectionScheme scheme_from_string(std::string_view s);

struct SweepSpec {
    SweepVar variable = SweepVar::PHI;
    double start = 0;
    double stop = 1;
    long steps = 2;

    double at(long i) const;
};

/// Beam splitters used for the homodyne columns and for qfi_b/qfi_c when
/// they differ from the intensity setup.
struct HomodyneSetup {
    double kappa = 0;
    double kappa_p = 0;
};

struct RunConfig {
    AlgebraParams params;
    complex zeta{1.0, 0.0};
    double tail_tol = kDefaultTailTol;

    double kappa;
    double kappa_p;
    double phi;  // working point for non-phi sweeps
    PhaseScenario scenario = PhaseScenario::B;
    std::optional<double> phi_L;  // unset = auto
    double eta = 1;
    double gamma_abs = 1;  // local-oscillator amplitude; accepted and ignored
    std::optional<HomodyneSetup> homodyne;

    std::optional<SweepSpec> sweep;
    std::string out_path;  // empty = stdout
    OutputFormat format = OutputFormat::CSV;

    DetectionScheme scheme = DetectionScheme::DIFFERENCE;  // optimize target
    long grid = 721;

    std::optional<long> oracle_cutoff;
    std::string inject_fault;  // test hook for validate: "a1-sign"

    RunConfig();
};

/// Reads a JSON config. Unknown keys and wrong types raise ConfigError naming
/// the field; malformed JSON names the line and column.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

/// Range checks on every field. Throws ConfigError / InvalidParams / InvalidEfficiency.
void validate_config(const RunConfig& cfg);

struct SweepRow {
    double x = 0;
    double dphi_df = 0, dphi_sing = 0, dphi_hom_b = 0, dphi_hom_c = 0;
    double qcrb_a = 0, qcrb_b = 0, qcrb_c = 0;
    double qfi_a = 0, qfi_b = 0, qfi_c = 0;
};

/// Row at the config's working point with the swept variable set to x.
SweepRow compute_row(const RunConfig& cfg, SweepVar var, double x);
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const SweepSpec& sweep);

/// Empty string for non-finite values, otherwise %.17g.
std::string format_number(double v);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);

/// Rows whose finite dphi falls below the matching QCRB by more than slack.
std::vector<std::string> row_bound_violations(const SweepRow& row, double slack = 1e-9);

struct OptimizeResult {
    DetectionScheme scheme = DetectionScheme::DIFFERENCE;
    double phi_opt = 0;
    double dphi_min = 0;
};

/// dphi(phi) for one scheme at the config's working point.
double scheme_dphi(const RunConfig& cfg, DetectionScheme scheme, double phi);

/// Grid phi_i = pi i / (grid + 1), i = 1..grid, then golden-section refinement
/// around the best grid point to an interval below 1e-8.
/// Throws NoFiniteValue when every grid point diverges.
OptimizeResult optimize_phase(const RunConfig& cfg, DetectionScheme scheme, long grid = 721);

struct RatioEntry {
    DetectionScheme scheme;
    OptimizeResult gha, su;
    std::optional<double> ratio;  // unset when either optimum is infinite
};

/// Optimizes every scheme for both states and forms R = dphi_gha / dphi_su.
std::vector<RatioEntry> compute_ratios(const RunConfig& gha, const RunConfig& su);

struct ValidationItem {
    std::string quantity;
    double worst_delta = 0;
    std::string worst_at;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    double tolerance = 1e-8;
    bool passed() const;
    const ValidationItem* worst() const;
};

/// Analytic vs oracle on {GHA, SU11} x {pi/4, pi/2, 3pi/4}^2 x {0.3, 1, 2} x {B, C}
/// with the config's zeta and deformation parameters.
ValidationReport run_validation(const RunConfig& cfg);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gcmetro::cli
