#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "gcmetro/cli.hpp"
#include "gcmetro/error.hpp"
#include "gcmetro/fisher.hpp"

namespace gcmetro::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError("field '" + path + "': expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("field '" + path + "." + key + "': unknown key");
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("field '" + path + "." + key + "': expected a number");
    return v.get<double>();
}

long integer(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + path + "." + key + "': expected an integer");
    return v.get<long>();
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError("field '" + path + "." + key + "': expected a string");
    return v.get<std::string>();
}

template <class F>
auto with_field(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("field '" + field + "': " + e.what());
    }
}

PhaseScenario scenario_from_string(const std::string& s) {
    if (s == "b" || s == "B") return PhaseScenario::B;
    if (s == "c" || s == "C") return PhaseScenario::C;
    throw ConfigError("scenario must be 'b' or 'c', got '" + s + "'");
}

}  // namespace

std::string_view to_string(SweepVar v) {
    switch (v) {
        case SweepVar::PHI: return "phi";
        case SweepVar::KAPPA: return "kappa";
        case SweepVar::ZETA_ABS: return "zeta_abs";
        case SweepVar::TRANSMISSION: return "transmission";
    }
    return "?";
}

SweepVar sweep_var_from_string(std::string_view s) {
    if (s == "phi") return SweepVar::PHI;
    if (s == "kappa") return SweepVar::KAPPA;
    if (s == "zeta_abs") return SweepVar::ZETA_ABS;
    if (s == "transmission") return SweepVar::TRANSMISSION;
    throw ConfigError("sweep variable must be phi, kappa, zeta_abs or transmission, got '" +
                      std::string(s) + "'");
}

DetectionScheme scheme_from_string(std::string_view s) {
    if (s == "df" || s == "difference") return DetectionScheme::DIFFERENCE;
    if (s == "sing" || s == "single") return DetectionScheme::SINGLE;
    if (s == "hom_b") return DetectionScheme::HOMODYNE_B;
    if (s == "hom_c") return DetectionScheme::HOMODYNE_C;
    throw ConfigError("scheme must be df, sing, hom_b or hom_c, got '" + std::string(s) + "'");
}

double SweepSpec::at(long i) const {
    if (i == steps - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

RunConfig::RunConfig()
    : kappa(std::numbers::pi / 2), kappa_p(std::numbers::pi / 2), phi(std::numbers::pi / 2) {
    params.kind = AlgebraKind::GHA;
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    check_keys(j, "$", {"state", "interferometer", "homodyne", "sweep", "output", "optimize", "oracle"});

    if (j.contains("state")) {
        const json& s = j["state"];
        check_keys(s, "state", {"kind", "zeta_re", "zeta_im", "a", "k", "d", "e", "r", "tail_tol"});
        if (s.contains("kind"))
            cfg.params.kind = with_field("state.kind", [&] {
                return algebra_kind_from_string(text(s, "kind", "state"));
            });
        double re = cfg.zeta.real(), im = cfg.zeta.imag();
        if (s.contains("zeta_re")) re = number(s, "zeta_re", "state");
        if (s.contains("zeta_im")) im = number(s, "zeta_im", "state");
        cfg.zeta = {re, im};
        if (s.contains("a")) cfg.params.a = number(s, "a", "state");
        if (s.contains("k")) cfg.params.k = number(s, "k", "state");
        if (s.contains("d")) cfg.params.d = number(s, "d", "state");
        if (s.contains("e")) cfg.params.e = number(s, "e", "state");
        if (s.contains("r")) cfg.params.r = number(s, "r", "state");
        if (s.contains("tail_tol")) cfg.tail_tol = number(s, "tail_tol", "state");
    }

    if (j.contains("interferometer")) {
        const json& s = j["interferometer"];
        const std::string p = "interferometer";
        check_keys(s, p, {"kappa", "kappa_prime", "transmission", "transmission_prime", "phi",
                          "scenario", "phi_l", "eta", "gamma_abs"});
        if (s.contains("kappa") && s.contains("transmission"))
            throw ConfigError("field 'interferometer': give kappa or transmission, not both");
        if (s.contains("kappa_prime") && s.contains("transmission_prime"))
            throw ConfigError("field 'interferometer': give kappa_prime or transmission_prime, not both");
        if (s.contains("kappa")) cfg.kappa = number(s, "kappa", p);
        if (s.contains("kappa_prime")) cfg.kappa_p = number(s, "kappa_prime", p);
        if (s.contains("transmission"))
            cfg.kappa = with_field("interferometer.transmission", [&] {
                return BeamSplitterAngle::from_transmission(number(s, "transmission", p)).kappa();
            });
        if (s.contains("transmission_prime"))
            cfg.kappa_p = with_field("interferometer.transmission_prime", [&] {
                return BeamSplitterAngle::from_transmission(number(s, "transmission_prime", p)).kappa();
            });
        if (s.contains("phi")) cfg.phi = number(s, "phi", p);
        if (s.contains("scenario"))
            cfg.scenario = with_field("interferometer.scenario", [&] {
                return scenario_from_string(text(s, "scenario", p));
            });
        if (s.contains("phi_l")) {
            const json& v = s["phi_l"];
            if (v.is_string() && v.get<std::string>() == "auto")
                cfg.phi_L.reset();
            else if (v.is_number())
                cfg.phi_L = v.get<double>();
            else
                throw ConfigError("field 'interferometer.phi_l': expected \"auto\" or a number");
        }
        if (s.contains("eta")) cfg.eta = number(s, "eta", p);
        if (s.contains("gamma_abs")) cfg.gamma_abs = number(s, "gamma_abs", p);
    }

    if (j.contains("homodyne")) {
        const json& s = j["homodyne"];
        check_keys(s, "homodyne", {"kappa", "kappa_prime"});
        HomodyneSetup h{cfg.kappa, cfg.kappa_p};
        if (s.contains("kappa")) h.kappa = number(s, "kappa", "homodyne");
        if (s.contains("kappa_prime")) h.kappa_p = number(s, "kappa_prime", "homodyne");
        cfg.homodyne = h;
    }

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        check_keys(s, "sweep", {"variable", "start", "stop", "steps"});
        SweepSpec sw;
        if (s.contains("variable"))
            sw.variable = with_field("sweep.variable", [&] {
                return sweep_var_from_string(text(s, "variable", "sweep"));
            });
        if (s.contains("start")) sw.start = number(s, "start", "sweep");
        if (s.contains("stop")) sw.stop = number(s, "stop", "sweep");
        if (s.contains("steps")) sw.steps = integer(s, "steps", "sweep");
        cfg.sweep = sw;
    }

    if (j.contains("output")) {
        const json& s = j["output"];
        check_keys(s, "output", {"path", "format"});
        if (s.contains("path")) cfg.out_path = text(s, "path", "output");
        if (s.contains("format")) {
            const std::string f = text(s, "format", "output");
            if (f == "csv")
                cfg.format = OutputFormat::CSV;
            else if (f == "json")
                cfg.format = OutputFormat::JSON;
            else
                throw ConfigError("field 'output.format': expected csv or json");
        }
    }

    if (j.contains("optimize")) {
        const json& s = j["optimize"];
        check_keys(s, "optimize", {"scheme", "grid"});
        if (s.contains("scheme"))
            cfg.scheme = with_field("optimize.scheme", [&] {
                return scheme_from_string(text(s, "scheme", "optimize"));
            });
        if (s.contains("grid")) cfg.grid = integer(s, "grid", "optimize");
    }

    if (j.contains("oracle")) {
        const json& s = j["oracle"];
        check_keys(s, "oracle", {"cutoff"});
        if (s.contains("cutoff")) cfg.oracle_cutoff = integer(s, "cutoff", "oracle");
    }
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        long line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("malformed JSON at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const RunConfig& cfg) {
    validate_params(cfg.params);
    if (!std::isfinite(cfg.zeta.real()) || !std::isfinite(cfg.zeta.imag()))
        throw ConfigError("field 'state.zeta': must be finite");
    if (!(cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0))
        throw ConfigError("field 'state.tail_tol': must lie in (0, 1)");
    InterferometerConfig ic{cfg.kappa, cfg.kappa_p, cfg.phi, cfg.scenario, cfg.phi_L, cfg.eta};
    validate(ic);
    if (cfg.homodyne) {
        BeamSplitterAngle{cfg.homodyne->kappa};
        BeamSplitterAngle{cfg.homodyne->kappa_p};
    }
    if (cfg.sweep) {
        const SweepSpec& s = *cfg.sweep;
        if (s.steps < 2) throw ConfigError("field 'sweep.steps': must be at least 2");
        if (!(s.start < s.stop)) throw ConfigError("field 'sweep': start must be below stop");
        switch (s.variable) {
            case SweepVar::PHI:
                if (!std::isfinite(s.start) || !std::isfinite(s.stop))
                    throw ConfigError("field 'sweep': phase range must be finite");
                break;
            case SweepVar::KAPPA:
                BeamSplitterAngle{s.start};
                BeamSplitterAngle{s.stop};
                break;
            case SweepVar::TRANSMISSION:
                BeamSplitterAngle::from_transmission(s.start);
                BeamSplitterAngle::from_transmission(s.stop);
                break;
            case SweepVar::ZETA_ABS:
                if (!(s.start >= 0.0) || !std::isfinite(s.stop))
                    throw ConfigError("field 'sweep': |zeta| range must be finite and non-negative");
                break;
        }
    }
    if (cfg.grid < 3) throw ConfigError("field 'optimize.grid': must be at least 3");
    if (cfg.oracle_cutoff && *cfg.oracle_cutoff < 0)
        throw ConfigError("field 'oracle.cutoff': must be non-negative");
}

}  // namespace gcmetro::cli
