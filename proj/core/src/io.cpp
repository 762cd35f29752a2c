#include "boomid/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace boomid {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv_numeric(const std::string& path,
                                                  const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw std::runtime_error(path + ": unexpected header '" + line + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string tok = line.substr(pos, comma == std::string::npos
                                                         ? std::string::npos
                                                         : comma - pos);
            row.push_back(std::stod(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json complex_array(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const cplx& x : v) arr.push_back({x.real(), x.imag()});
    return arr;
}

std::vector<cplx> complex_array_from(const json& arr) {
    std::vector<cplx> out;
    for (const auto& e : arr) out.push_back(cplx(e.at(0).get<double>(), e.at(1).get<double>()));
    return out;
}

} // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& ts) {
    ts.validate();
    std::string out = "time_s,value\n";
    out.reserve(ts.samples.size() * 40);
    for (std::size_t i = 0; i < ts.samples.size(); ++i) {
        const double t = ts.start_time_s + static_cast<double>(i) / ts.sample_rate_hz;
        out += format_double(t);
        out += ',';
        out += format_double(ts.samples[i]);
        out += '\n';
    }
    atomic_write(path, out);
}

TimeSeries read_timeseries_csv(const std::string& path) {
    const auto rows = read_csv_numeric(path, "time_s,value");
    if (rows.size() < 2) throw std::runtime_error(path + ": need at least 2 samples");
    TimeSeries ts;
    ts.start_time_s = rows.front()[0];
    const double dt = rows[1][0] - rows[0][0];
    if (!(dt > 0.0)) throw std::runtime_error(path + ": non-increasing time column");
    ts.sample_rate_hz = 1.0 / dt;
    for (const auto& row : rows) {
        if (row.size() != 2) throw std::runtime_error(path + ": malformed row");
        ts.samples.push_back(row[1]);
    }
    ts.validate();
    return ts;
}

void write_frf_dataset(const std::string& csv_path, const FrfDataset& dataset) {
    dataset.validate();
    std::string out = "freq_hz,param_n_rms,re,im\n";
    out.reserve(dataset.values.size() * 60);
    for (std::size_t j = 0; j < dataset.freq_hz.size(); ++j) {
        for (std::size_t k = 0; k < dataset.params.size(); ++k) {
            const cplx v = dataset.at(j, k);
            out += format_double(dataset.freq_hz[j]);
            out += ',';
            out += format_double(dataset.params[k]);
            out += ',';
            out += format_double(v.real());
            out += ',';
            out += format_double(v.imag());
            out += '\n';
        }
    }
    atomic_write(csv_path, out);

    json side;
    side["meta"] = dataset.meta;
    side["n_freq"] = dataset.freq_hz.size();
    side["n_params"] = dataset.params.size();
    side["params"] = dataset.params;
    atomic_write(csv_path + ".json", side.dump(2) + "\n");
}

FrfDataset read_frf_dataset(const std::string& csv_path) {
    const auto rows = read_csv_numeric(csv_path, "freq_hz,param_n_rms,re,im");
    FrfDataset ds;
    for (const auto& row : rows) {
        if (row.size() != 4) throw std::runtime_error(csv_path + ": malformed row");
        if (ds.freq_hz.empty() || row[0] != ds.freq_hz.back()) ds.freq_hz.push_back(row[0]);
        if (ds.freq_hz.size() == 1) ds.params.push_back(row[1]);
        ds.values.push_back(cplx(row[2], row[3]));
    }
    std::filesystem::path side = csv_path + ".json";
    if (std::filesystem::exists(side)) {
        const json j = json::parse(slurp(side.string()));
        if (j.contains("meta"))
            ds.meta = j.at("meta").get<std::map<std::string, std::string>>();
    }
    ds.validate();
    return ds;
}

void write_pole_residue_json(const std::string& path, const PoleResidueModel& model,
                             const std::map<std::string, std::string>& provenance) {
    json j;
    j["type"] = "pole_residue";
    j["order"] = model.poles.size();
    j["poles"] = complex_array(model.poles);
    j["residues"] = complex_array(model.residues);
    j["provenance"] = provenance;
    atomic_write(path, j.dump(2) + "\n");
}

PoleResidueModel read_pole_residue_json(const std::string& path) {
    const json j = json::parse(slurp(path));
    if (j.at("type").get<std::string>() != "pole_residue")
        throw std::runtime_error(path + ": not a pole-residue model");
    PoleResidueModel m;
    m.poles = complex_array_from(j.at("poles"));
    m.residues = complex_array_from(j.at("residues"));
    if (m.poles.size() != m.residues.size())
        throw std::runtime_error(path + ": pole/residue length mismatch");
    return m;
}

void write_paaa_json(const std::string& path, const ParametricBarycentricModel& model,
                     const std::map<std::string, std::string>& provenance) {
    json j;
    j["type"] = "paaa";
    j["orders"] = {model.order_l(), model.order_q()};
    j["s_supports"] = complex_array(model.s_supports);
    j["p_supports"] = model.p_supports;
    j["support_values"] = complex_array(model.support_values);
    j["weights"] = complex_array(model.weights);
    j["p_min"] = model.p_min;
    j["p_max"] = model.p_max;
    j["extrapolation_lo_factor"] = model.extrapolation_lo_factor;
    j["extrapolation_hi_factor"] = model.extrapolation_hi_factor;
    j["provenance"] = provenance;
    atomic_write(path, j.dump(2) + "\n");
}

ParametricBarycentricModel read_paaa_json(const std::string& path) {
    const json j = json::parse(slurp(path));
    if (j.at("type").get<std::string>() != "paaa")
        throw std::runtime_error(path + ": not a p-AAA model");
    ParametricBarycentricModel m;
    m.s_supports = complex_array_from(j.at("s_supports"));
    m.p_supports = j.at("p_supports").get<std::vector<double>>();
    m.support_values = complex_array_from(j.at("support_values"));
    m.weights = complex_array_from(j.at("weights"));
    m.p_min = j.at("p_min").get<double>();
    m.p_max = j.at("p_max").get<double>();
    m.extrapolation_lo_factor = j.at("extrapolation_lo_factor").get<double>();
    m.extrapolation_hi_factor = j.at("extrapolation_hi_factor").get<double>();
    if (m.support_values.size() != m.order_l() * m.order_q() ||
        m.weights.size() != m.support_values.size())
        throw std::runtime_error(path + ": inconsistent model shapes");
    return m;
}

void write_plant_json(const std::string& path, const ParametricPlant& plant) {
    json j;
    j["type"] = "plant";
    j["p_min"] = plant.modal.p_min;
    j["p_max"] = plant.modal.p_max;
    j["noise_std"] = plant.noise_std;
    json modes = json::array();
    for (const Mode& m : plant.modal.modes) {
        modes.push_back({{"freq_at_pmin_hz", m.freq_at_pmin_hz},
                         {"freq_at_pmax_hz", m.freq_at_pmax_hz},
                         {"zeta_at_pmin", m.zeta_at_pmin},
                         {"zeta_at_pmax", m.zeta_at_pmax},
                         {"residue_gain", m.residue_gain}});
    }
    j["modes"] = modes;
    atomic_write(path, j.dump(2) + "\n");
}

ParametricPlant read_plant_json(const std::string& path) {
    const json j = json::parse(slurp(path));
    if (j.at("type").get<std::string>() != "plant")
        throw std::runtime_error(path + ": not a plant config");
    ParametricPlant p;
    p.modal.p_min = j.at("p_min").get<double>();
    p.modal.p_max = j.at("p_max").get<double>();
    p.noise_std = j.at("noise_std").get<double>();
    for (const auto& m : j.at("modes")) {
        p.modal.modes.push_back({m.at("freq_at_pmin_hz").get<double>(),
                                 m.at("freq_at_pmax_hz").get<double>(),
                                 m.at("zeta_at_pmin").get<double>(),
                                 m.at("zeta_at_pmax").get<double>(),
                                 m.at("residue_gain").get<double>()});
    }
    return p;
}

void write_crossval(const std::string& csv_path, const CrossValMatrix& matrix) {
    std::string out = "model_param,test_param,e_l2\n";
    for (std::size_t m = 0; m < matrix.model_params.size(); ++m) {
        for (std::size_t t = 0; t < matrix.test_params.size(); ++t) {
            out += format_double(matrix.model_params[m]);
            out += ',';
            out += format_double(matrix.test_params[t]);
            out += ',';
            out += format_double(matrix.at(m, t).e_l2);
            out += '\n';
        }
    }
    atomic_write(csv_path, out);

    json side;
    side["model_params"] = matrix.model_params;
    side["test_params"] = matrix.test_params;
    side["model_totals"] = matrix.model_totals;
    json failures = json::array();
    for (std::size_t m = 0; m < matrix.model_params.size(); ++m)
        for (std::size_t t = 0; t < matrix.test_params.size(); ++t)
            if (!matrix.at(m, t).failure.empty())
                failures.push_back({{"model", m}, {"test", t}, {"reason", matrix.at(m, t).failure}});
    side["failures"] = failures;
    atomic_write(csv_path + ".json", side.dump(2) + "\n");
}

CrossValMatrix read_crossval(const std::string& csv_path) {
    const auto rows = read_csv_numeric(csv_path, "model_param,test_param,e_l2");
    CrossValMatrix m;
    for (const auto& row : rows) {
        if (row.size() != 3) throw std::runtime_error(csv_path + ": malformed row");
        if (m.model_params.empty() || row[0] != m.model_params.back())
            m.model_params.push_back(row[0]);
        if (m.model_params.size() == 1) m.test_params.push_back(row[1]);
        m.cells.push_back({row[2], ""});
    }
    m.model_totals.assign(m.model_params.size(), 0.0);
    for (std::size_t i = 0; i < m.model_params.size(); ++i)
        for (std::size_t t = 0; t < m.test_params.size(); ++t)
            m.model_totals[i] += m.at(i, t).e_l2;
    return m;
}

std::string fnv1a_digest(const std::string& content) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

} // namespace boomid
