#include "boomid/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "boomid/io.hpp"

namespace boomid {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Collects every violation instead of failing fast.
class Validator {
public:
    std::vector<std::string> errors;

    void unknown_keys(const json& obj, const std::string& prefix,
                      const std::vector<std::string>& allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
                errors.push_back(prefix + it.key() + ": unknown key");
        }
    }

    double number(json& obj, const std::string& prefix, const std::string& key,
                  double fallback, double min, bool min_exclusive = false,
                  double max = std::numeric_limits<double>::infinity()) {
        if (!obj.contains(key)) {
            obj[key] = fallback;
            return fallback;
        }
        if (!obj[key].is_number()) {
            errors.push_back(prefix + key + ": must be a number");
            return fallback;
        }
        const double v = obj[key].get<double>();
        if (!std::isfinite(v) || v > max || (min_exclusive ? !(v > min) : !(v >= min))) {
            errors.push_back(prefix + key + ": out of range");
            return fallback;
        }
        return v;
    }

    long long integer(json& obj, const std::string& prefix, const std::string& key,
                      long long fallback, long long min) {
        if (!obj.contains(key)) {
            obj[key] = fallback;
            return fallback;
        }
        if (!obj[key].is_number_integer()) {
            errors.push_back(prefix + key + ": must be an integer");
            return fallback;
        }
        const long long v = obj[key].get<long long>();
        if (v < min) {
            errors.push_back(prefix + key + ": must be >= " + std::to_string(min));
            return fallback;
        }
        return v;
    }

    std::string string_field(json& obj, const std::string& prefix, const std::string& key,
                             const std::string& fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) {
                errors.push_back(prefix + key + ": required");
                return fallback;
            }
            obj[key] = fallback;
            return fallback;
        }
        if (!obj[key].is_string()) {
            errors.push_back(prefix + key + ": must be a string");
            return fallback;
        }
        return obj[key].get<std::string>();
    }

    bool boolean(json& obj, const std::string& prefix, const std::string& key, bool fallback) {
        if (!obj.contains(key)) {
            obj[key] = fallback;
            return fallback;
        }
        if (!obj[key].is_boolean()) {
            errors.push_back(prefix + key + ": must be a boolean");
            return fallback;
        }
        return obj[key].get<bool>();
    }

    json& object(json& obj, const std::string& prefix, const std::string& key) {
        if (!obj.contains(key)) obj[key] = json::object();
        if (!obj[key].is_object()) {
            errors.push_back(prefix + key + ": must be an object");
            obj[key] = json::object();
        }
        return obj[key];
    }
};

void validate_inversion_options(Validator& v, json& cfg) {
    json& o = v.object(cfg, "", "options");
    v.unknown_keys(o, "options.", {"magnitude_floor", "regularization_eps", "detrend"});
    const double floor = v.number(o, "options.", "magnitude_floor", 0.0, 0.0);
    const double eps = v.number(o, "options.", "regularization_eps", 0.0, 0.0);
    v.boolean(o, "options.", "detrend", true);
    if (floor > 0.0 && eps > 0.0)
        v.errors.push_back("options: at most one of magnitude_floor/regularization_eps may be nonzero");
}

void validate_band(Validator& v, json& cfg, const char* key, double lo_def, double hi_def) {
    json& b = v.object(cfg, "", key);
    const std::string prefix = std::string(key) + ".";
    v.unknown_keys(b, prefix, {"lo_hz", "hi_hz"});
    const double lo = v.number(b, prefix, "lo_hz", lo_def, 0.0);
    const double hi = v.number(b, prefix, "hi_hz", hi_def, 0.0);
    if (!(lo < hi)) v.errors.push_back(prefix + "lo_hz: must be below " + prefix + "hi_hz");
}

void validate_synth(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "plant_json", "noise_std", "seed",
                             "grid", "params", "n_levels", "dataset_csv", "records"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "plant_json", "");
    v.number(cfg, "", "noise_std", 0.0, 0.0);
    v.integer(cfg, "", "seed", 0, 0);
    v.string_field(cfg, "", "dataset_csv", "frf_dataset.csv");

    json& g = v.object(cfg, "", "grid");
    v.unknown_keys(g, "grid.", {"f_lo_hz", "df_hz", "n_bins"});
    v.number(g, "grid.", "f_lo_hz", 0.0625, 0.0);
    v.number(g, "grid.", "df_hz", 0.0078125, 0.0, true);
    v.integer(g, "grid.", "n_bins", 1600, 2);

    if (cfg.contains("params")) {
        if (!cfg["params"].is_array() || cfg["params"].empty()) {
            v.errors.push_back("params: must be a non-empty array of numbers");
        } else {
            double prev = -std::numeric_limits<double>::infinity();
            for (const auto& e : cfg["params"]) {
                if (!e.is_number()) { v.errors.push_back("params: must be numbers"); break; }
                if (!(e.get<double>() > prev)) {
                    v.errors.push_back("params: must be strictly increasing");
                    break;
                }
                prev = e.get<double>();
            }
        }
    } else {
        v.integer(cfg, "", "n_levels", 15, 1);
    }

    if (!cfg.contains("records")) cfg["records"] = json::array();
    if (!cfg["records"].is_array()) {
        v.errors.push_back("records: must be an array");
        cfg["records"] = json::array();
    }
    std::size_t idx = 0;
    for (auto& rec : cfg["records"]) {
        const std::string prefix = "records[" + std::to_string(idx++) + "].";
        if (!rec.is_object()) { v.errors.push_back(prefix + ": must be an object"); continue; }
        v.unknown_keys(rec, prefix, {"name", "shape", "f0_hz", "f1_hz", "freq_hz",
                                     "duration_s", "sample_rate_hz", "rms", "param", "seed"});
        v.string_field(rec, prefix, "name", "rec" + std::to_string(idx), false);
        const std::string shape = v.string_field(rec, prefix, "shape", "", true);
        if (shape == "chirp") {
            v.number(rec, prefix, "f0_hz", 1.0, 0.0, true);
            v.number(rec, prefix, "f1_hz", 100.0, 0.0, true);
        } else if (shape == "sine" || shape == "triangle" || shape == "square") {
            v.number(rec, prefix, "freq_hz", 10.0, 0.0, true);
        } else if (!shape.empty()) {
            v.errors.push_back(prefix + "shape: must be one of chirp/sine/triangle/square");
        }
        v.number(rec, prefix, "duration_s", 16.0, 0.0, true);
        v.number(rec, prefix, "sample_rate_hz", 256.0, 0.0, true);
        v.number(rec, prefix, "rms", 0.0016, 0.0, true);
        v.number(rec, prefix, "param", 0.0016, 0.0, true);
        v.integer(rec, prefix, "seed", 0, 0);
    }
}

void validate_frf(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "inputs", "n_blocks",
                             "smooth", "decimate", "band", "keep", "dataset_csv"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "dataset_csv", "frf_dataset.csv");
    v.integer(cfg, "", "n_blocks", 1, 1);

    json& s = v.object(cfg, "", "smooth");
    v.unknown_keys(s, "smooth.", {"sigma_bins"});
    v.number(s, "smooth.", "sigma_bins", 8.0, 0.0);

    json& d = v.object(cfg, "", "decimate");
    v.unknown_keys(d, "decimate.", {"factor"});
    v.integer(d, "decimate.", "factor", 8, 1);

    validate_band(v, cfg, "band", 3.0, 70.0);
    validate_band(v, cfg, "keep", 0.0, 1e12);

    if (!cfg.contains("inputs") || !cfg["inputs"].is_array() || cfg["inputs"].empty()) {
        v.errors.push_back("inputs: required non-empty array");
        cfg["inputs"] = json::array();
    }
    std::size_t idx = 0;
    for (auto& in : cfg["inputs"]) {
        const std::string prefix = "inputs[" + std::to_string(idx++) + "].";
        if (!in.is_object()) { v.errors.push_back(prefix + ": must be an object"); continue; }
        v.unknown_keys(in, prefix, {"force_csv", "velocity_csv"});
        v.string_field(in, prefix, "force_csv", "", true);
        v.string_field(in, prefix, "velocity_csv", "", true);
    }
}

void validate_fit_vf(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "dataset_csv", "param_index",
                             "order_r", "tol", "max_iters", "enforce_stability",
                             "relaxed", "model_json"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "dataset_csv", "", true);
    v.string_field(cfg, "", "model_json", "vf_model.json");
    v.integer(cfg, "", "param_index", 0, 0);
    const long long r = v.integer(cfg, "", "order_r", 20, 2);
    if (r % 2 != 0) v.errors.push_back("order_r: must be even");
    v.number(cfg, "", "tol", 1e-6, 0.0, true);
    v.integer(cfg, "", "max_iters", 30, 1);
    v.boolean(cfg, "", "enforce_stability", true);
    v.boolean(cfg, "", "relaxed", false);
}

void validate_fit_paaa(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "dataset_csv", "tol_rel",
                             "max_l", "max_q", "model_json"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "dataset_csv", "", true);
    v.string_field(cfg, "", "model_json", "paaa_model.json");
    v.number(cfg, "", "tol_rel", 1e-8, 0.0, true);
    v.integer(cfg, "", "max_l", 0, 0);
    v.integer(cfg, "", "max_q", 0, 0);
}

void validate_invert(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "velocity_csv", "model_json",
                             "param", "force_extrapolation", "options", "force_csv"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "velocity_csv", "", true);
    v.string_field(cfg, "", "model_json", "", true);
    v.string_field(cfg, "", "force_csv", "force_est.csv");
    if (cfg.contains("param") && !cfg["param"].is_number())
        v.errors.push_back("param: must be a number");
    v.boolean(cfg, "", "force_extrapolation", false);
    validate_inversion_options(v, cfg);
}

void validate_xval(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "models", "tests",
                             "options", "force_extrapolation", "xval_csv"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "xval_csv", "xval.csv");
    v.boolean(cfg, "", "force_extrapolation", false);
    validate_inversion_options(v, cfg);

    if (!cfg.contains("models") || !cfg["models"].is_array() || cfg["models"].empty()) {
        v.errors.push_back("models: required non-empty array");
        cfg["models"] = json::array();
    }
    std::size_t idx = 0;
    for (auto& m : cfg["models"]) {
        const std::string prefix = "models[" + std::to_string(idx++) + "].";
        if (!m.is_object()) { v.errors.push_back(prefix + ": must be an object"); continue; }
        v.unknown_keys(m, prefix, {"model_json", "param"});
        v.string_field(m, prefix, "model_json", "", true);
        if (m.contains("param") && !m["param"].is_number())
            v.errors.push_back(prefix + "param: must be a number");
    }
    if (!cfg.contains("tests") || !cfg["tests"].is_array() || cfg["tests"].empty()) {
        v.errors.push_back("tests: required non-empty array");
        cfg["tests"] = json::array();
    }
    idx = 0;
    for (auto& t : cfg["tests"]) {
        const std::string prefix = "tests[" + std::to_string(idx++) + "].";
        if (!t.is_object()) { v.errors.push_back(prefix + ": must be an object"); continue; }
        v.unknown_keys(t, prefix, {"force_csv", "velocity_csv", "param"});
        v.string_field(t, prefix, "force_csv", "", true);
        v.string_field(t, prefix, "velocity_csv", "", true);
        if (!t.contains("param") || !t["param"].is_number())
            v.errors.push_back(prefix + "param: required number");
    }
}

void validate_report(Validator& v, json& cfg) {
    v.unknown_keys(cfg, "", {"format_version", "out_dir", "xval_csv", "report_md", "summary_csv"});
    v.string_field(cfg, "", "out_dir", ".");
    v.string_field(cfg, "", "xval_csv", "", true);
    v.string_field(cfg, "", "report_md", "report.md");
    v.string_field(cfg, "", "summary_csv", "report_summary.csv");
}

} // namespace

config_error::config_error(std::vector<std::string> v)
    : std::runtime_error("config validation failed: " + join(v, "; ")), violations(std::move(v)) {}

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds = {"synth", "frf", "fit-vf", "fit-paaa",
                                                  "invert", "xval", "report"};
    return cmds;
}

std::string RunConfig::dump_canonical() const {
    return json.dump(2) + "\n";
}

RunConfig validate_config(const std::string& command, const nlohmann::json& raw) {
    if (!raw.is_object()) throw config_error({"config root must be a JSON object"});

    Validator v;
    json cfg = raw;
    const long long ver = v.integer(cfg, "", "format_version", kConfigFormatVersion, 1);
    if (ver != kConfigFormatVersion)
        v.errors.push_back("format_version: unsupported version " + std::to_string(ver));

    if (command == "synth") validate_synth(v, cfg);
    else if (command == "frf") validate_frf(v, cfg);
    else if (command == "fit-vf") validate_fit_vf(v, cfg);
    else if (command == "fit-paaa") validate_fit_paaa(v, cfg);
    else if (command == "invert") validate_invert(v, cfg);
    else if (command == "xval") validate_xval(v, cfg);
    else if (command == "report") validate_report(v, cfg);
    else throw config_error({"unknown subcommand '" + command + "'"});

    if (!v.errors.empty()) throw config_error(std::move(v.errors));

    RunConfig rc;
    rc.command = command;
    rc.json = std::move(cfg);
    rc.digest = fnv1a_digest(rc.command + "\n" + rc.json.dump());
    return rc;
}

RunConfig load_config(const std::string& command, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error({"cannot open config file " + path});
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error({std::string("JSON parse error: ") + e.what()});
    }
    return validate_config(command, raw);
}

} // namespace boomid
