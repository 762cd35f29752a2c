#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "boomid/config.hpp"
#include "boomid/io.hpp"
#include "boomid/plant.hpp"
#include "boomid/signal.hpp"

namespace fs = std::filesystem;
using boomid::cplx;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "boomid_io_tests";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("timeseries CSV: lossless round trip") {
    const fs::path path = scratch_dir() / "ts.csv";
    boomid::TimeSeries ts{256.0, {}, 1.5};
    for (int i = 0; i < 100; ++i)
        ts.samples.push_back(std::sin(0.1 * i) * 1.2345678901234567e-3);
    boomid::write_timeseries_csv(path.string(), ts);
    const boomid::TimeSeries back = boomid::read_timeseries_csv(path.string());
    CHECK(back.samples == ts.samples);
    CHECK(back.start_time_s == ts.start_time_s);
    CHECK(back.sample_rate_hz == doctest::Approx(ts.sample_rate_hz).epsilon(1e-12));
}

TEST_CASE("FRF dataset CSV: round trip with sidecar meta") {
    const fs::path path = scratch_dir() / "ds.csv";
    boomid::FrfDataset ds;
    ds.freq_hz = {1.0, 2.0, 3.0};
    ds.params = {0.001, 0.002};
    ds.values = {cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8), cplx(9, 10), cplx(11, 12)};
    ds.meta["source"] = "unit test";
    boomid::write_frf_dataset(path.string(), ds);
    CHECK(fs::exists(path.string() + ".json"));
    const boomid::FrfDataset back = boomid::read_frf_dataset(path.string());
    CHECK(back.freq_hz == ds.freq_hz);
    CHECK(back.params == ds.params);
    CHECK(back.values == ds.values);
    CHECK(back.meta.at("source") == "unit test");
}

TEST_CASE("model JSON: pole-residue and p-AAA round trips") {
    const fs::path prp = scratch_dir() / "pr.json";
    boomid::PoleResidueModel pr{{cplx(-1, 2), cplx(-1, -2)}, {cplx(0.5, 0.25), cplx(0.5, -0.25)}};
    boomid::write_pole_residue_json(prp.string(), pr, {{"note", "x"}});
    const boomid::PoleResidueModel pr2 = boomid::read_pole_residue_json(prp.string());
    CHECK(pr2.poles == pr.poles);
    CHECK(pr2.residues == pr.residues);

    const fs::path pap = scratch_dir() / "pa.json";
    boomid::ParametricBarycentricModel pa;
    pa.s_supports = {cplx(0, 1), cplx(0, 2)};
    pa.p_supports = {0.5, 1.5};
    pa.support_values = {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)};
    pa.weights = {cplx(0.5, 0), cplx(0.5, 0), cplx(0.5, 0), cplx(0.5, 0)};
    pa.p_min = 0.5;
    pa.p_max = 1.5;
    boomid::write_paaa_json(pap.string(), pa);
    const boomid::ParametricBarycentricModel pa2 = boomid::read_paaa_json(pap.string());
    CHECK(pa2.s_supports == pa.s_supports);
    CHECK(pa2.p_supports == pa.p_supports);
    CHECK(pa2.support_values == pa.support_values);
    CHECK(pa2.weights == pa.weights);
    CHECK(pa2.p_min == pa.p_min);
    CHECK(pa2.p_max == pa.p_max);

    // wrong type tag is rejected
    CHECK_THROWS(boomid::read_pole_residue_json(pap.string()));
}

TEST_CASE("plant JSON: round trip") {
    const fs::path path = scratch_dir() / "plant.json";
    boomid::ParametricPlant plant = boomid::default_boom_plant();
    plant.noise_std = 0.025;
    boomid::write_plant_json(path.string(), plant);
    const boomid::ParametricPlant back = boomid::read_plant_json(path.string());
    CHECK(back.modal.p_min == plant.modal.p_min);
    CHECK(back.modal.p_max == plant.modal.p_max);
    CHECK(back.noise_std == plant.noise_std);
    REQUIRE(back.modal.modes.size() == plant.modal.modes.size());
    for (std::size_t m = 0; m < plant.modal.modes.size(); ++m) {
        CHECK(back.modal.modes[m].freq_at_pmin_hz == plant.modal.modes[m].freq_at_pmin_hz);
        CHECK(back.modal.modes[m].residue_gain == plant.modal.modes[m].residue_gain);
    }
}

TEST_CASE("cross-validation CSV: round trip including +inf cells") {
    const fs::path path = scratch_dir() / "xval.csv";
    boomid::CrossValMatrix m;
    m.model_params = {0.001, 0.002};
    m.test_params = {0.001, 0.002, 0.003};
    m.cells = {{0.0, ""}, {0.5, ""}, {std::numeric_limits<double>::infinity(), "boom"},
               {0.25, ""}, {0.0, ""}, {0.75, ""}};
    m.model_totals = {std::numeric_limits<double>::infinity(), 1.0};
    boomid::write_crossval(path.string(), m);
    const boomid::CrossValMatrix back = boomid::read_crossval(path.string());
    CHECK(back.model_params == m.model_params);
    CHECK(back.test_params == m.test_params);
    CHECK(back.at(0, 1).e_l2 == 0.5);
    CHECK(std::isinf(back.at(0, 2).e_l2));
    CHECK(std::isinf(back.model_totals[0]));
    CHECK(back.model_totals[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fnv1a_digest: stable known values") {
    CHECK(boomid::fnv1a_digest("") == "cbf29ce484222325");
    CHECK(boomid::fnv1a_digest("a") != boomid::fnv1a_digest("b"));
}

TEST_CASE("config: defaults are filled for a minimal frf config") {
    json raw;
    raw["inputs"] = json::array({{{"force_csv", "f.csv"}, {"velocity_csv", "v.csv"}}});
    const boomid::RunConfig cfg = boomid::validate_config("frf", raw);
    CHECK(cfg.json.at("band").at("lo_hz").get<double>() == 3.0);
    CHECK(cfg.json.at("band").at("hi_hz").get<double>() == 70.0);
    CHECK(cfg.json.at("smooth").at("sigma_bins").get<double>() == 8.0);
    CHECK(cfg.json.at("decimate").at("factor").get<long long>() == 8);
    CHECK(cfg.json.at("format_version").get<int>() == boomid::kConfigFormatVersion);
}

TEST_CASE("config: violations are collected and name their fields") {
    json raw;
    raw["inputs"] = json::array({{{"force_csv", "f.csv"}, {"velocity_csv", "v.csv"}}});
    raw["decimate"] = {{"factor", 0}};
    raw["n_blocks"] = 0;
    try {
        boomid::validate_config("frf", raw);
        FAIL("expected config_error");
    } catch (const boomid::config_error& e) {
        CHECK(e.violations.size() == 2);
        bool named = false;
        for (const auto& v : e.violations)
            if (v.find("decimate.factor") != std::string::npos) named = true;
        CHECK(named);
    }
}

TEST_CASE("config: unknown keys and unknown subcommands are rejected") {
    json raw;
    raw["inputs"] = json::array({{{"force_csv", "f.csv"}, {"velocity_csv", "v.csv"}}});
    raw["bogus_knob"] = 1;
    CHECK_THROWS_AS(boomid::validate_config("frf", raw), boomid::config_error);
    CHECK_THROWS_AS(boomid::validate_config("no-such-command", json::object()), boomid::config_error);
}

TEST_CASE("config: load -> echo -> load is idempotent") {
    const fs::path a = scratch_dir() / "cfg_a.json";
    const fs::path b = scratch_dir() / "cfg_b.json";
    json raw;
    raw["dataset_csv"] = "ds.csv";
    raw["tol_rel"] = 1e-6;
    boomid::atomic_write(a.string(), raw.dump(2) + "\n");
    const boomid::RunConfig c1 = boomid::load_config("fit-paaa", a.string());
    boomid::atomic_write(b.string(), c1.dump_canonical());
    const boomid::RunConfig c2 = boomid::load_config("fit-paaa", b.string());
    CHECK(c1.json == c2.json);
    CHECK(c1.digest == c2.digest);
}

TEST_CASE("atomic_write: creates parents, leaves no temp file") {
    const fs::path nested = scratch_dir() / "deep" / "deeper" / "file.txt";
    fs::remove_all(scratch_dir() / "deep");
    boomid::atomic_write(nested.string(), "payload");
    std::ifstream in(nested);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "payload");
    CHECK(!fs::exists(nested.string() + ".tmp"));
}
