// boomid: frequency-response identification and force-inversion pipeline.
//
// Subcommands: synth, frf, fit-vf, fit-paaa, invert, xval, report. Each one
// takes a JSON config, validates it fully, and writes its outputs
// atomically. Exit codes: 0 success, 1 module-level numeric error, 2
// validation error (single machine-parsable line on stderr).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "boomid/config.hpp"
#include "boomid/errors.hpp"
#include "boomid/frf.hpp"
#include "boomid/invert.hpp"
#include "boomid/io.hpp"
#include "boomid/paaa.hpp"
#include "boomid/plant.hpp"
#include "boomid/signal.hpp"
#include "boomid/vecfit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string effective_out_dir(const boomid::RunConfig& cfg) {
    const std::string configured = cfg.json.at("out_dir").get<std::string>();
    if (configured != ".") return configured;
    if (const char* env = std::getenv("BOOMID_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return ".";
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void require_input_file(const std::string& path) {
    if (!fs::exists(path))
        throw boomid::config_error({"missing input file: " + path});
}

std::map<std::string, std::string> provenance_of(const boomid::RunConfig& cfg) {
    return {{"tool_version", boomid::kToolVersion}, {"config_digest", cfg.digest}};
}

void echo_config(const boomid::RunConfig& cfg, const std::string& dir,
                 const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = cfg.command;
    manifest["config"] = cfg.json;
    manifest["config_digest"] = cfg.digest;
    manifest["tool_version"] = boomid::kToolVersion;
    manifest["outputs"] = outputs;
    boomid::atomic_write(out_path(dir, cfg.command + ".manifest.json"),
                         manifest.dump(2) + "\n");
}

boomid::ParametricPlant plant_from(const boomid::RunConfig& cfg) {
    const std::string path = cfg.json.at("plant_json").get<std::string>();
    boomid::ParametricPlant plant;
    if (path.empty()) {
        plant = boomid::default_boom_plant();
    } else {
        require_input_file(path);
        plant = boomid::read_plant_json(path);
    }
    plant.noise_std = cfg.json.at("noise_std").get<double>();
    return plant;
}

int cmd_synth(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    const boomid::ParametricPlant plant = plant_from(cfg);
    std::vector<std::string> outputs;

    const auto& grid_cfg = cfg.json.at("grid");
    std::vector<double> grid(grid_cfg.at("n_bins").get<std::size_t>());
    const double f_lo = grid_cfg.at("f_lo_hz").get<double>();
    const double df = grid_cfg.at("df_hz").get<double>();
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = f_lo + static_cast<double>(i) * df;

    std::vector<double> params;
    if (cfg.json.contains("params")) {
        params = cfg.json.at("params").get<std::vector<double>>();
    } else {
        const auto n = cfg.json.at("n_levels").get<std::size_t>();
        for (std::size_t k = 0; k < n; ++k) {
            const double t = n == 1 ? 0.0
                                    : static_cast<double>(k) / static_cast<double>(n - 1);
            params.push_back(plant.modal.p_min + t * (plant.modal.p_max - plant.modal.p_min));
        }
    }

    boomid::FrfDataset ds;
    ds.freq_hz = grid;
    ds.params = params;
    ds.values.resize(grid.size() * params.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        for (std::size_t k = 0; k < params.size(); ++k)
            ds.at(j, k) = boomid::plant_frf_at(plant, grid[j], params[k]);
    ds.meta["tool_version"] = boomid::kToolVersion;
    ds.meta["config_digest"] = cfg.digest;
    ds.meta["source"] = "synthetic plant";

    const std::string ds_path = out_path(dir, cfg.json.at("dataset_csv").get<std::string>());
    boomid::write_frf_dataset(ds_path, ds);
    outputs.push_back(ds_path);

    for (const auto& rec : cfg.json.at("records")) {
        const std::string name = rec.at("name").get<std::string>();
        const std::string shape = rec.at("shape").get<std::string>();
        const double dur = rec.at("duration_s").get<double>();
        const double fs = rec.at("sample_rate_hz").get<double>();
        const double rms = rec.at("rms").get<double>();
        boomid::TimeSeries force;
        if (shape == "chirp") {
            force = boomid::gen_chirp(rec.at("f0_hz").get<double>(),
                                      rec.at("f1_hz").get<double>(), dur, fs, rms);
        } else {
            const auto tag = shape == "sine" ? boomid::WaveShape::sine
                             : shape == "triangle" ? boomid::WaveShape::triangle
                                                   : boomid::WaveShape::square;
            force = boomid::gen_periodic(tag, rec.at("freq_hz").get<double>(), dur, fs, rms);
        }
        const double p = rec.at("param").get<double>();
        const auto seed = rec.at("seed").get<std::uint64_t>();
        boomid::TimeSeries vel = boomid::simulate_response(plant, force, p, seed);

        const std::string f_path = out_path(dir, "force_" + name + ".csv");
        const std::string v_path = out_path(dir, "velocity_" + name + ".csv");
        boomid::write_timeseries_csv(f_path, force);
        boomid::write_timeseries_csv(v_path, vel);
        outputs.push_back(f_path);
        outputs.push_back(v_path);
    }

    echo_config(cfg, dir, outputs);
    return 0;
}

int cmd_frf(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    std::vector<boomid::TimeSeries> forces, vels;
    for (const auto& in : cfg.json.at("inputs")) {
        const std::string f = in.at("force_csv").get<std::string>();
        const std::string v = in.at("velocity_csv").get<std::string>();
        require_input_file(f);
        require_input_file(v);
        forces.push_back(boomid::read_timeseries_csv(f));
        vels.push_back(boomid::read_timeseries_csv(v));
    }

    boomid::FrfPipelineOptions opts;
    opts.n_blocks = cfg.json.at("n_blocks").get<std::size_t>();
    opts.smooth_sigma_bins = cfg.json.at("smooth").at("sigma_bins").get<double>();
    opts.decimate_factor = cfg.json.at("decimate").at("factor").get<std::size_t>();
    opts.band_lo_hz = cfg.json.at("band").at("lo_hz").get<double>();
    opts.band_hi_hz = cfg.json.at("band").at("hi_hz").get<double>();
    opts.keep_lo_hz = cfg.json.at("keep").at("lo_hz").get<double>();
    opts.keep_hi_hz = cfg.json.at("keep").at("hi_hz").get<double>();

    boomid::FrfDataset ds = boomid::estimate_dataset(forces, vels, opts);
    ds.meta["tool_version"] = boomid::kToolVersion;
    ds.meta["config_digest"] = cfg.digest;
    ds.meta["band_lo_hz"] = boomid::format_double(opts.band_lo_hz);
    ds.meta["band_hi_hz"] = boomid::format_double(opts.band_hi_hz);

    const std::string ds_path = out_path(dir, cfg.json.at("dataset_csv").get<std::string>());
    boomid::write_frf_dataset(ds_path, ds);
    echo_config(cfg, dir, {ds_path});
    return 0;
}

int cmd_fit_vf(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    const std::string ds_path = cfg.json.at("dataset_csv").get<std::string>();
    require_input_file(ds_path);
    const boomid::FrfDataset ds = boomid::read_frf_dataset(ds_path);

    const auto col = cfg.json.at("param_index").get<std::size_t>();
    if (col >= ds.n_params())
        throw boomid::config_error({"param_index: dataset has only " +
                                    std::to_string(ds.n_params()) + " columns"});
    std::vector<boomid::cplx> values(ds.n_freq());
    for (std::size_t j = 0; j < ds.n_freq(); ++j) values[j] = ds.at(j, col);

    boomid::VfOptions opts;
    opts.tol = cfg.json.at("tol").get<double>();
    opts.max_iters = cfg.json.at("max_iters").get<int>();
    opts.enforce_stability = cfg.json.at("enforce_stability").get<bool>();
    opts.relaxed = cfg.json.at("relaxed").get<bool>();

    auto [model, diag] = boomid::vf_fit(ds.freq_hz, values,
                                        cfg.json.at("order_r").get<int>(), {}, opts);

    auto prov = provenance_of(cfg);
    prov["param_n_rms"] = boomid::format_double(ds.params[col]);
    prov["band_lo_hz"] = boomid::format_double(ds.freq_hz.front());
    prov["band_hi_hz"] = boomid::format_double(ds.freq_hz.back());
    prov["iterations"] = std::to_string(diag.iterations);
    prov["converged"] = diag.converged ? "true" : "false";
    prov["weighted_ls_error"] = boomid::format_double(diag.final_weighted_ls_error);

    const std::string model_path = out_path(dir, cfg.json.at("model_json").get<std::string>());
    boomid::write_pole_residue_json(model_path, model, prov);
    echo_config(cfg, dir, {model_path});
    return 0;
}

int cmd_fit_paaa(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    const std::string ds_path = cfg.json.at("dataset_csv").get<std::string>();
    require_input_file(ds_path);
    const boomid::FrfDataset ds = boomid::read_frf_dataset(ds_path);

    boomid::PaaaOptions opts;
    opts.tol_rel = cfg.json.at("tol_rel").get<double>();
    opts.max_l = cfg.json.at("max_l").get<std::size_t>();
    opts.max_q = cfg.json.at("max_q").get<std::size_t>();

    auto [model, diag] = boomid::paaa_fit(ds, opts);

    std::ifstream raw(ds_path, std::ios::binary);
    std::string ds_content((std::istreambuf_iterator<char>(raw)),
                           std::istreambuf_iterator<char>());
    auto prov = provenance_of(cfg);
    prov["training_data_digest"] = boomid::fnv1a_digest(ds_content);
    prov["achieved_tol_rel"] =
        boomid::format_double(diag.error_history.empty() ? 0.0 : diag.error_history.back());
    prov["stopped_reason"] = diag.stopped_reason == boomid::PaaaStop::tolerance ? "tolerance"
                             : diag.stopped_reason == boomid::PaaaStop::max_order
                                 ? "max_order"
                                 : "ls_stagnation";

    const std::string model_path = out_path(dir, cfg.json.at("model_json").get<std::string>());
    boomid::write_paaa_json(model_path, model, prov);
    echo_config(cfg, dir, {model_path});
    return 0;
}

boomid::FrfFunction load_model_function(const std::string& model_path, const json* param,
                                        bool force_extrapolation) {
    require_input_file(model_path);
    std::ifstream in(model_path);
    const json j = json::parse(in);
    const std::string type = j.at("type").get<std::string>();
    if (type == "pole_residue") {
        auto model = std::make_shared<boomid::PoleResidueModel>(
            boomid::read_pole_residue_json(model_path));
        return [model](double f) {
            return boomid::pr_evaluate_at(*model, boomid::cplx(0.0, 2.0 * 3.14159265358979323846 * f));
        };
    }
    if (type == "paaa") {
        if (param == nullptr || !param->is_number())
            throw boomid::config_error({"param: required for parametric models"});
        const boomid::ParametricBarycentricModel model = boomid::read_paaa_json(model_path);
        auto slice = std::make_shared<boomid::FrfSlice>(
            boomid::slice_at_param(model, param->get<double>(), force_extrapolation));
        return [slice](double f) { return (*slice)(f); };
    }
    throw boomid::config_error({model_path + ": unknown model type '" + type + "'"});
}

int cmd_invert(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    const std::string vel_path = cfg.json.at("velocity_csv").get<std::string>();
    require_input_file(vel_path);
    const boomid::TimeSeries vel = boomid::read_timeseries_csv(vel_path);

    const json* param = cfg.json.contains("param") ? &cfg.json.at("param") : nullptr;
    const boomid::FrfFunction frf =
        load_model_function(cfg.json.at("model_json").get<std::string>(), param,
                            cfg.json.at("force_extrapolation").get<bool>());

    boomid::InversionOptions opts;
    opts.magnitude_floor = cfg.json.at("options").at("magnitude_floor").get<double>();
    opts.regularization_eps = cfg.json.at("options").at("regularization_eps").get<double>();
    opts.detrend = cfg.json.at("options").at("detrend").get<bool>();

    const boomid::TimeSeries force = boomid::invert_force(vel, frf, opts);
    const std::string force_path = out_path(dir, cfg.json.at("force_csv").get<std::string>());
    boomid::write_timeseries_csv(force_path, force);
    echo_config(cfg, dir, {force_path});
    return 0;
}

int cmd_xval(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    const bool force_extrap = cfg.json.at("force_extrapolation").get<bool>();

    std::vector<boomid::FrfFunction> models;
    std::vector<double> model_params;
    for (const auto& m : cfg.json.at("models")) {
        const json* param = m.contains("param") ? &m.at("param") : nullptr;
        models.push_back(load_model_function(m.at("model_json").get<std::string>(),
                                             param, force_extrap));
        model_params.push_back(param != nullptr && param->is_number() ? param->get<double>()
                                                                      : 0.0);
    }

    std::vector<boomid::TimeSeries> forces, vels;
    std::vector<double> test_params;
    for (const auto& t : cfg.json.at("tests")) {
        const std::string f = t.at("force_csv").get<std::string>();
        const std::string v = t.at("velocity_csv").get<std::string>();
        require_input_file(f);
        require_input_file(v);
        forces.push_back(boomid::read_timeseries_csv(f));
        vels.push_back(boomid::read_timeseries_csv(v));
        test_params.push_back(t.at("param").get<double>());
    }

    boomid::InversionOptions opts;
    opts.magnitude_floor = cfg.json.at("options").at("magnitude_floor").get<double>();
    opts.regularization_eps = cfg.json.at("options").at("regularization_eps").get<double>();
    opts.detrend = cfg.json.at("options").at("detrend").get<bool>();

    const boomid::CrossValMatrix matrix =
        boomid::cross_validate(models, model_params, forces, vels, test_params, opts);

    const std::string xval_path = out_path(dir, cfg.json.at("xval_csv").get<std::string>());
    boomid::write_crossval(xval_path, matrix);
    echo_config(cfg, dir, {xval_path});
    return 0;
}

int cmd_report(const boomid::RunConfig& cfg) {
    const std::string dir = effective_out_dir(cfg);
    const std::string xval_path = cfg.json.at("xval_csv").get<std::string>();
    require_input_file(xval_path);
    const boomid::CrossValMatrix m = boomid::read_crossval(xval_path);

    std::string md = "# Force-estimation error report\n\n";
    md += "Config digest: `" + cfg.digest + "`; tool version " + boomid::kToolVersion + "\n\n";
    md += "## Relative L2 error matrix (rows: model load, cols: test load)\n\n";
    md += "| model \\\\ test |";
    for (double t : m.test_params) md += " " + boomid::format_double(t) + " |";
    md += " total |\n|---|";
    for (std::size_t t = 0; t < m.test_params.size(); ++t) md += "---|";
    md += "---|\n";
    for (std::size_t i = 0; i < m.model_params.size(); ++i) {
        md += "| " + boomid::format_double(m.model_params[i]) + " |";
        for (std::size_t t = 0; t < m.test_params.size(); ++t)
            md += " " + boomid::format_double(m.at(i, t).e_l2) + " |";
        md += " " + boomid::format_double(m.model_totals[i]) + " |\n";
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < m.model_totals.size(); ++i)
        if (m.model_totals[i] < m.model_totals[best]) best = i;
    md += "\nBest model by total error: " + boomid::format_double(m.model_params[best]) +
          " (total " + boomid::format_double(m.model_totals[best]) + ")\n";

    std::string csv = "model_param,total_e_l2\n";
    for (std::size_t i = 0; i < m.model_params.size(); ++i)
        csv += boomid::format_double(m.model_params[i]) + "," +
               boomid::format_double(m.model_totals[i]) + "\n";

    const std::string md_path = out_path(dir, cfg.json.at("report_md").get<std::string>());
    const std::string csv_path = out_path(dir, cfg.json.at("summary_csv").get<std::string>());
    boomid::atomic_write(md_path, md);
    boomid::atomic_write(csv_path, csv);
    echo_config(cfg, dir, {md_path, csv_path});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequency-response identification and force-inversion pipeline"};
    app.require_subcommand(1);

    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> subs;
    for (const std::string& name : boomid::known_commands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_paths[name], "JSON config file")->required();
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error=invalid-arguments: " << e.what() << "\n";
        return 2;
    }

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) command = name;

    try {
        const boomid::RunConfig cfg = boomid::load_config(command, config_paths[command]);
        if (command == "synth") return cmd_synth(cfg);
        if (command == "frf") return cmd_frf(cfg);
        if (command == "fit-vf") return cmd_fit_vf(cfg);
        if (command == "fit-paaa") return cmd_fit_paaa(cfg);
        if (command == "invert") return cmd_invert(cfg);
        if (command == "xval") return cmd_xval(cfg);
        if (command == "report") return cmd_report(cfg);
        std::cerr << "error=unknown-subcommand: " << command << "\n";
        return 2;
    } catch (const boomid::config_error& e) {
        std::cerr << "error=config: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error=invalid-argument: " << e.what() << "\n";
        return 1;
    } catch (const boomid::degenerate_excitation_error& e) {
        std::cerr << "error=degenerate-excitation: " << e.what() << "\n";
        return 1;
    } catch (const boomid::division_singularity_error& e) {
        std::cerr << "error=division-singularity: " << e.what() << "\n";
        return 1;
    } catch (const boomid::rank_deficiency_error& e) {
        std::cerr << "error=rank-deficiency: " << e.what() << "\n";
        return 1;
    } catch (const boomid::order_exhausted_error& e) {
        std::cerr << "error=order-exhausted: " << e.what() << "\n";
        return 1;
    } catch (const boomid::out_of_range_error& e) {
        std::cerr << "error=out-of-range: " << e.what() << "\n";
        return 1;
    } catch (const boomid::numerical_error& e) {
        std::cerr << "error=numerical: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error=runtime: " << e.what() << "\n";
        return 1;
    }
}
