#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gcmetro/cli.hpp"
#include "gcmetro/error.hpp"
#include "gcmetro/fisher.hpp"

namespace gcmetro::cli {

namespace {

struct Flags {
    std::string config;
    std::string kind, scenario, phi_l, sweep, out, format, scheme, inject_fault, dump_coeffs;
    double zeta_re = 0, zeta_im = 0, a = 0, k = 0, d = 0, e = 0, r = 0;
    double kappa = 0, kappa_p = 0, transmission = 0, transmission_p = 0, phi = 0, eta = 0;
    double hom_kappa = 0, hom_kappa_p = 0, start = 0, stop = 0, tail_tol = 0, gamma_abs = 0;
    long steps = 0, grid = 0, oracle_cutoff = 0;
    // The same flag is registered on every subcommand.
    std::multimap<std::string, CLI::Option*> opt;

    bool given(const std::string& name) const {
        auto [lo, hi] = opt.equal_range(name);
        return std::any_of(lo, hi, [](const auto& kv) { return kv.second->count() > 0; });
    }
};

void add_common(CLI::App* app, Flags& f) {
    auto add = [&](const std::string& name, auto& target, const std::string& help) {
        f.opt.emplace(name, app->add_option("--" + name, target, help));
    };
    add("config", f.config, "JSON config file");
    add("kind", f.kind, "gha | su11");
    add("zeta-re", f.zeta_re, "Re zeta");
    add("zeta-im", f.zeta_im, "Im zeta");
    add("a", f.a, "deformation a");
    add("k", f.k, "deformation k");
    add("d", f.d, "deformation d");
    add("e", f.e, "deformation e");
    add("r", f.r, "admissibility r in [0, 1] (strict mode)");
    add("tail-tol", f.tail_tol, "coefficient tail tolerance");
    add("kappa", f.kappa, "first beam splitter angle");
    add("kappa-prime", f.kappa_p, "second beam splitter angle");
    add("transmission", f.transmission, "first beam splitter |t|^2");
    add("transmission-prime", f.transmission_p, "second beam splitter |t'|^2");
    add("phi", f.phi, "working-point phase");
    add("scenario", f.scenario, "b | c");
    add("eta", f.eta, "detection efficiency");
    add("phi-l", f.phi_l, "auto | radians");
    add("gamma-abs", f.gamma_abs, "local-oscillator amplitude (ignored)");
    add("hom-kappa", f.hom_kappa, "first beam splitter for the homodyne columns");
    add("hom-kappa-prime", f.hom_kappa_p, "second beam splitter for the homodyne columns");
    add("sweep", f.sweep, "phi | kappa | zeta_abs | transmission");
    add("start", f.start, "sweep start");
    add("stop", f.stop, "sweep stop");
    add("steps", f.steps, "sweep points");
    add("out", f.out, "output file (default stdout)");
    add("format", f.format, "csv | json");
}

RunConfig build_config(const Flags& f) {
    RunConfig c = f.given("config") ? load_config(f.config) : RunConfig{};
    if (f.given("kind")) c.params.kind = algebra_kind_from_string(f.kind);
    if (f.given("zeta-re")) c.zeta.real(f.zeta_re);
    if (f.given("zeta-im")) c.zeta.imag(f.zeta_im);
    if (f.given("a")) c.params.a = f.a;
    if (f.given("k")) c.params.k = f.k;
    if (f.given("d")) c.params.d = f.d;
    if (f.given("e")) c.params.e = f.e;
    if (f.given("r")) c.params.r = f.r;
    if (f.given("tail-tol")) c.tail_tol = f.tail_tol;
    if (f.given("kappa") && f.given("transmission"))
        throw ConfigError("give --kappa or --transmission, not both");
    if (f.given("kappa")) c.kappa = f.kappa;
    if (f.given("transmission")) c.kappa = BeamSplitterAngle::from_transmission(f.transmission).kappa();
    if (f.given("kappa-prime") && f.given("transmission-prime"))
        throw ConfigError("give --kappa-prime or --transmission-prime, not both");
    if (f.given("kappa-prime")) c.kappa_p = f.kappa_p;
    if (f.given("transmission-prime"))
        c.kappa_p = BeamSplitterAngle::from_transmission(f.transmission_p).kappa();
    if (f.given("phi")) c.phi = f.phi;
    if (f.given("scenario")) {
        if (f.scenario == "b" || f.scenario == "B")
            c.scenario = PhaseScenario::B;
        else if (f.scenario == "c" || f.scenario == "C")
            c.scenario = PhaseScenario::C;
        else
            throw ConfigError("--scenario must be b or c");
    }
    if (f.given("eta")) c.eta = f.eta;
    if (f.given("phi-l")) {
        if (f.phi_l == "auto") {
            c.phi_L.reset();
        } else {
            try {
                std::size_t used = 0;
                c.phi_L = std::stod(f.phi_l, &used);
                if (used != f.phi_l.size()) throw std::invalid_argument("trailing text");
            } catch (const std::exception&) {
                throw ConfigError("--phi-l must be 'auto' or a number");
            }
        }
    }
    if (f.given("gamma-abs")) c.gamma_abs = f.gamma_abs;
    if (f.given("hom-kappa") || f.given("hom-kappa-prime")) {
        HomodyneSetup h = c.homodyne.value_or(HomodyneSetup{c.kappa, c.kappa_p});
        if (f.given("hom-kappa")) h.kappa = f.hom_kappa;
        if (f.given("hom-kappa-prime")) h.kappa_p = f.hom_kappa_p;
        c.homodyne = h;
    }
    if (f.given("out")) c.out_path = f.out;
    if (f.given("format")) {
        if (f.format == "csv")
            c.format = OutputFormat::CSV;
        else if (f.format == "json")
            c.format = OutputFormat::JSON;
        else
            throw ConfigError("--format must be csv or json");
    }
    if (f.given("scheme")) c.scheme = scheme_from_string(f.scheme);
    if (f.given("grid")) c.grid = f.grid;
    if (f.given("oracle-cutoff")) c.oracle_cutoff = f.oracle_cutoff;
    if (f.given("inject-fault")) c.inject_fault = f.inject_fault;
    return c;
}

SweepSpec default_sweep(SweepVar v) {
    switch (v) {
        case SweepVar::PHI: return {v, 0.0, std::numbers::pi, 721};
        case SweepVar::KAPPA: return {v, 0.0, std::numbers::pi, 101};
        case SweepVar::TRANSMISSION: return {v, 0.0, 1.0, 101};
        case SweepVar::ZETA_ABS: return {v, 0.0, 3.0, 101};
    }
    return {};
}

void apply_sweep_flags(const Flags& f, RunConfig& c, SweepVar fallback) {
    if (f.given("sweep")) {
        const SweepVar v = sweep_var_from_string(f.sweep);
        if (!c.sweep || c.sweep->variable != v) c.sweep = default_sweep(v);
    } else if (!c.sweep) {
        c.sweep = default_sweep(fallback);
    }
    if (f.given("start")) c.sweep->start = f.start;
    if (f.given("stop")) c.sweep->stop = f.stop;
    if (f.given("steps")) c.sweep->steps = f.steps;
}

// Writes to --out when set, otherwise to the given stream.
class Sink {
  public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& get() { return *os_; }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

void emit_rows(const RunConfig& c, const std::vector<SweepRow>& rows, std::ostream& out) {
    Sink sink(c.out_path, out);
    if (c.format == OutputFormat::JSON)
        write_json(sink.get(), rows);
    else
        write_csv(sink.get(), rows);
}

int cmd_moments(const RunConfig& c, const Flags& f, std::ostream& out) {
    const CoherentState st = build_coherent_state(c.params, c.zeta, c.tail_tol);
    const ModeMoments m = moments(st);
    const NormalizationCheck nc = normalization_crosscheck(st);
    const std::pair<const char*, double> fields[] = {
        {"mean_n", m.mean_n},           {"mean_n2", m.mean_n2},
        {"var_n", m.var_n},             {"exp_b_re", m.exp_b.real()},
        {"exp_b_im", m.exp_b.imag()},   {"exp_b2_re", m.exp_b2.real()},
        {"exp_b2_im", m.exp_b2.imag()}, {"exp_nb_re", m.exp_nb.real()},
        {"exp_nb_im", m.exp_nb.imag()}, {"cutoff", static_cast<double>(st.cutoff())},
        {"tail_bound", st.tail_bound},  {"normalization", st.normalization},
        {"closed_form_deviation", nc.rel_deviation}};
    {
        Sink sink(c.out_path, out);
        std::ostream& os = sink.get();
        if (c.format == OutputFormat::JSON) {
            os << "{\n  \"kind\": \"" << to_string(c.params.kind) << '"';
            for (const auto& [name, v] : fields) {
                const std::string s = format_number(v);
                os << ",\n  \"" << name << "\": " << (s.empty() ? "null" : s);
            }
            os << "\n}\n";
        } else {
            os << "quantity,value\n";
            for (const auto& [name, v] : fields) os << name << ',' << format_number(v) << '\n';
        }
    }
    if (f.given("dump-coeffs")) {
        std::ofstream dump(f.dump_coeffs, std::ios::binary | std::ios::trunc);
        if (!dump) throw ConfigError("cannot open coefficient file '" + f.dump_coeffs + "'");
        write_coefficients_csv(dump, st);
    }
    return kOk;
}

int cmd_optimize(const RunConfig& c, std::ostream& out) {
    const OptimizeResult r = optimize_phase(c, c.scheme, c.grid);
    Sink sink(c.out_path, out);
    std::ostream& os = sink.get();
    if (c.format == OutputFormat::JSON)
        os << "{\n  \"scheme\": \"" << to_string(r.scheme) << "\",\n  \"phi_opt\": "
           << format_number(r.phi_opt) << ",\n  \"dphi_min\": " << format_number(r.dphi_min) << "\n}\n";
    else
        os << "scheme,phi_opt,dphi_min\n"
           << to_string(r.scheme) << ',' << format_number(r.phi_opt) << ',' << format_number(r.dphi_min)
           << '\n';
    return kOk;
}

int cmd_ratio(const RunConfig& c, std::ostream& out) {
    RunConfig gha = c, su = c;
    gha.params.kind = AlgebraKind::GHA;
    su.params.kind = AlgebraKind::SU11;
    const std::vector<RatioEntry> entries = compute_ratios(gha, su);
    Sink sink(c.out_path, out);
    std::ostream& os = sink.get();
    auto cell = [&](double v, const char* empty) {
        const std::string s = format_number(v);
        return s.empty() ? std::string(empty) : s;
    };
    if (c.format == OutputFormat::JSON) {
        os << "{\n  \"ratios\": [";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const RatioEntry& e = entries[i];
            os << (i ? ",\n" : "\n") << "    {\"scheme\": \"" << to_string(e.scheme)
               << "\", \"phi_opt_gha\": " << cell(e.gha.phi_opt, "null")
               << ", \"dphi_gha\": " << cell(e.gha.dphi_min, "null")
               << ", \"phi_opt_su\": " << cell(e.su.phi_opt, "null")
               << ", \"dphi_su\": " << cell(e.su.dphi_min, "null")
               << ", \"ratio\": " << (e.ratio ? format_number(*e.ratio) : "null") << '}';
        }
        os << "\n  ]\n}\n";
    } else {
        os << "scheme,phi_opt_gha,dphi_gha,phi_opt_su,dphi_su,ratio\n";
        for (const RatioEntry& e : entries)
            os << to_string(e.scheme) << ',' << format_number(e.gha.phi_opt) << ','
               << format_number(e.gha.dphi_min) << ',' << format_number(e.su.phi_opt) << ','
               << format_number(e.su.dphi_min) << ',' << (e.ratio ? format_number(*e.ratio) : "") << '\n';
    }
    return kOk;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
    const ValidationReport rep = run_validation(c);
    Sink sink(c.out_path, out);
    std::ostream& os = sink.get();
    char line[256];
    std::snprintf(line, sizeof line, "%-26s %-12s %s\n", "quantity", "worst_delta", "status");
    os << line;
    for (const ValidationItem& i : rep.items) {
        std::snprintf(line, sizeof line, "%-26s %-12.3e %s\n", i.quantity.c_str(), i.worst_delta,
                      i.worst_delta < rep.tolerance ? "ok" : "FAIL");
        os << line;
    }
    if (rep.passed()) {
        os << "PASS: all deltas below " << format_number(rep.tolerance) << '\n';
        return kOk;
    }
    const ValidationItem* w = rep.worst();
    os << "FAIL: worst offender " << w->quantity << " (" << format_number(w->worst_delta) << " at "
       << w->worst_at << ")\n";
    return kValidationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deformed coherent states in Mach-Zehnder phase estimation", "gcmetro"};
    app.require_subcommand(1);
    Flags f;
    CLI::App* moments_cmd = app.add_subcommand("moments", "single-mode moments of the input state");
    CLI::App* qfi_cmd = app.add_subcommand("qfi", "QFIs and QCRBs versus |t|^2 or kappa");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "phase sensitivities versus phi");
    CLI::App* opt_cmd = app.add_subcommand("optimize", "optimal working point for one scheme");
    CLI::App* ratio_cmd = app.add_subcommand("ratio", "GHA versus su(1,1) performance ratios");
    CLI::App* val_cmd = app.add_subcommand("validate", "analytic formulas versus the Fock-space oracle");
    for (CLI::App* sub : {moments_cmd, qfi_cmd, sweep_cmd, opt_cmd, ratio_cmd, val_cmd}) add_common(sub, f);
    f.opt.emplace("dump-coeffs", moments_cmd->add_option("--dump-coeffs", f.dump_coeffs, "coefficient CSV path"));
    f.opt.emplace("scheme", opt_cmd->add_option("--scheme", f.scheme, "df | sing | hom_b | hom_c"));
    for (CLI::App* sub : {opt_cmd, ratio_cmd})
        f.opt.emplace("grid", sub->add_option("--grid", f.grid, "coarse grid points on (0, pi)"));
    f.opt.emplace("oracle-cutoff", val_cmd->add_option("--oracle-cutoff", f.oracle_cutoff, "per-mode Fock cutoff"));
    f.opt.emplace("inject-fault", val_cmd->add_option("--inject-fault", f.inject_fault, "test hook: a1-sign"));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kOk : kConfigError;
    }

    try {
        RunConfig c = build_config(f);
        if (qfi_cmd->parsed()) apply_sweep_flags(f, c, SweepVar::TRANSMISSION);
        if (sweep_cmd->parsed()) apply_sweep_flags(f, c, SweepVar::PHI);
        validate_config(c);

        if (moments_cmd->parsed()) return cmd_moments(c, f, out);
        if (qfi_cmd->parsed() || sweep_cmd->parsed()) {
            emit_rows(c, run_sweep(c, *c.sweep), out);
            return kOk;
        }
        if (opt_cmd->parsed()) return cmd_optimize(c, out);
        if (ratio_cmd->parsed()) return cmd_ratio(c, out);
        if (val_cmd->parsed()) return cmd_validate(c, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidParams& e) {
        err << "invalid parameters: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidEfficiency& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const CutoffTooSmall& e) {
        err << "oracle cutoff too small: " << e.what() << '\n';
        return kConfigError;
    } catch (const NonPositiveLadder& e) {
        err << "inadmissible spectrum: " << e.what() << '\n';
        return kConfigError;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNonConvergence;
    }
    return kOk;
}

}  // namespace gcmetro::cli
