#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "boomid/errors.hpp"
#include "boomid/paaa.hpp"
#include "boomid/plant.hpp"

using boomid::cplx;
using boomid::FrfDataset;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// G(s, p) = 1 / ((s + 1)(p + 2)), exactly rational of bidegree (1, 1)
cplx g_oracle(cplx s, double p) { return 1.0 / ((s + 1.0) * (p + 2.0)); }

FrfDataset g_dataset() {
    FrfDataset ds;
    for (std::size_t j = 0; j < 20; ++j)
        ds.freq_hz.push_back(0.01 + 0.05 * static_cast<double>(j));
    ds.params = {0.5, 1.0, 1.5, 2.0, 2.5};
    ds.values.resize(ds.n_freq() * ds.n_params());
    for (std::size_t j = 0; j < ds.n_freq(); ++j)
        for (std::size_t k = 0; k < ds.n_params(); ++k)
            ds.at(j, k) = g_oracle(cplx(0.0, kTwoPi * ds.freq_hz[j]), ds.params[k]);
    return ds;
}

FrfDataset plant_dataset(std::size_t n_freq, std::size_t n_loads) {
    const boomid::ParametricPlant plant = boomid::default_boom_plant();
    FrfDataset ds;
    for (std::size_t j = 0; j < n_freq; ++j)
        ds.freq_hz.push_back(0.5 + 90.0 * static_cast<double>(j) / static_cast<double>(n_freq - 1));
    for (std::size_t k = 0; k < n_loads; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n_loads - 1);
        ds.params.push_back(plant.modal.p_min + t * (plant.modal.p_max - plant.modal.p_min));
    }
    ds.values.resize(n_freq * n_loads);
    for (std::size_t j = 0; j < n_freq; ++j)
        for (std::size_t k = 0; k < n_loads; ++k)
            ds.at(j, k) = boomid::plant_frf_at(plant, ds.freq_hz[j], ds.params[k]);
    return ds;
}

} // namespace

TEST_CASE("paaa_fit: exact bidegree-(1,1) rational needs orders (2,2)") {
    const FrfDataset ds = g_dataset();
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-10;
    auto [model, diag] = boomid::paaa_fit(ds, opts);
    CHECK(model.order_l() <= 2);
    CHECK(model.order_q() <= 2);
    CHECK(diag.stopped_reason == boomid::PaaaStop::tolerance);
    REQUIRE(!diag.error_history.empty());
    CHECK(diag.error_history.back() < 1e-10);

    // Frobenius normalization of the weights
    double fro = 0.0;
    for (const cplx& w : model.weights) fro += std::norm(w);
    CHECK(std::sqrt(fro) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("paaa_fit: constant dataset is exact after one iteration") {
    FrfDataset ds;
    ds.freq_hz = {1.0, 2.0, 3.0, 4.0, 5.0};
    ds.params = {0.1, 0.2, 0.3};
    ds.values.assign(15, cplx(3.0, -1.5));
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-12;
    auto [model, diag] = boomid::paaa_fit(ds, opts);
    CHECK(diag.error_history.size() == 1);
    CHECK(diag.error_history[0] <= 1e-13);
    const cplx v = boomid::paaa_evaluate(model, cplx(0.0, kTwoPi * 2.5), 0.17);
    CHECK(std::abs(v - cplx(3.0, -1.5)) < 1e-12);
}

TEST_CASE("paaa_fit: single-column dataset cannot form an LS set") {
    FrfDataset ds;
    ds.freq_hz = {1.0, 2.0, 3.0};
    ds.params = {0.5};
    ds.values = {cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(5.0, 0.0)};
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-10;
    CHECK_THROWS_AS(boomid::paaa_fit(ds, opts), boomid::order_exhausted_error);
}

TEST_CASE("greedy_select: empty-model picks max deviation from the mean") {
    FrfDataset ds;
    ds.freq_hz = {1.0, 2.0, 3.0};
    ds.params = {0.5};
    ds.values = {cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(4.0, 0.0)};
    const auto pick = boomid::greedy_select(ds, nullptr);
    CHECK(pick.first == 2);
    CHECK(pick.second == 0);
}

TEST_CASE("greedy_select: ties break to the lowest frequency index") {
    FrfDataset ds;
    ds.freq_hz = {1.0, 2.0};
    ds.params = {0.5};
    ds.values = {cplx(1.0, 0.0), cplx(3.0, 0.0)}; // mean 2, both deviate by 1
    const auto pick = boomid::greedy_select(ds, nullptr);
    CHECK(pick.first == 0);
    CHECK(pick.second == 0);
}

TEST_CASE("greedy_select: unique error spike is found") {
    FrfDataset ds = g_dataset();
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-10;
    auto [model, diag] = boomid::paaa_fit(ds, opts);

    // perturb one entry whose coordinates are both off-support
    auto is_s_support = [&](std::size_t j) {
        const cplx s(0.0, kTwoPi * ds.freq_hz[j]);
        for (const cplx& sup : model.s_supports)
            if (std::abs(sup - s) <= 1e-12 * std::abs(s)) return true;
        return false;
    };
    auto is_p_support = [&](std::size_t k) {
        for (double sup : model.p_supports)
            if (std::abs(sup - ds.params[k]) <= 1e-12 * ds.params[k]) return true;
        return false;
    };
    std::size_t tj = ds.n_freq(), tk = ds.n_params();
    for (std::size_t j = 0; j < ds.n_freq() && tj == ds.n_freq(); ++j)
        for (std::size_t k = 0; k < ds.n_params(); ++k)
            if (!is_s_support(j) && !is_p_support(k)) { tj = j; tk = k; break; }
    REQUIRE(tj < ds.n_freq());
    ds.at(tj, tk) += cplx(0.1, 0.0);

    const auto pick = boomid::greedy_select(ds, &model);
    CHECK(pick.first == tj);
    CHECK(pick.second == tk);
    (void)diag;
}

TEST_CASE("paaa_evaluate: interpolation at support pairs and oracle match") {
    const FrfDataset ds = g_dataset();
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-10;
    auto [model, diag] = boomid::paaa_fit(ds, opts);

    for (std::size_t j = 0; j < model.order_l(); ++j)
        for (std::size_t k = 0; k < model.order_q(); ++k) {
            if (model.weight_at(j, k) == cplx(0.0, 0.0)) continue;
            const cplx v = boomid::paaa_evaluate(model, model.s_supports[j], model.p_supports[k]);
            CHECK(std::abs(v - model.value_at(j, k)) <= 1e-12);
        }

    // untrained parameter midpoint against the closed form
    const double p_mid = 1.23;
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> fdist(0.01, 1.0);
    for (int q = 0; q < 50; ++q) {
        const cplx s(0.0, kTwoPi * fdist(rng));
        CHECK(std::abs(boomid::paaa_evaluate(model, s, p_mid) - g_oracle(s, p_mid)) < 1e-9);
    }
    (void)diag;
}

TEST_CASE("FrfSlice: consistent with paaa_evaluate and with training columns") {
    const FrfDataset ds = plant_dataset(200, 9);
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-8;
    auto [model, diag] = boomid::paaa_fit(ds, opts);
    REQUIRE(diag.stopped_reason == boomid::PaaaStop::tolerance);

    double h_max = 0.0;
    for (const cplx& v : ds.values) h_max = std::max(h_max, std::abs(v));

    // slice at a training parameter reproduces that dataset column
    const boomid::FrfSlice col_slice = boomid::slice_at_param(model, ds.params[2]);
    for (std::size_t j = 0; j < ds.n_freq(); ++j)
        CHECK(std::abs(col_slice(ds.freq_hz[j]) - ds.at(j, 2)) < 1e-7 * h_max);

    // slice/full-evaluation cross check at off-grid points
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> fdist(0.5, 90.0);
    const double p = 0.0041;
    const boomid::FrfSlice slice = boomid::slice_at_param(model, p);
    for (int q = 0; q < 100; ++q) {
        const double f = fdist(rng);
        const cplx a = slice(f);
        const cplx b = boomid::paaa_evaluate(model, cplx(0.0, kTwoPi * f), p);
        CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
    }

    // mode-1 peak at an intermediate load sits between the neighbors' peaks
    auto peak_freq = [&](const boomid::FrfSlice& sl) {
        double best_f = 0.0, best = 0.0;
        for (double f = 3.0; f <= 8.0; f += 0.001) {
            const double mag = std::abs(sl(f));
            if (mag > best) { best = mag; best_f = f; }
        }
        return best_f;
    };
    const double p_lo = ds.params[1], p_hi = ds.params[2];
    const double f_lo = peak_freq(boomid::slice_at_param(model, p_lo));
    const double f_hi = peak_freq(boomid::slice_at_param(model, p_hi));
    const double f_mid = peak_freq(boomid::slice_at_param(model, 0.5 * (p_lo + p_hi)));
    CHECK(f_mid <= std::max(f_lo, f_hi) + 1e-9);
    CHECK(f_mid >= std::min(f_lo, f_hi) - 1e-9);
}

TEST_CASE("paaa: extrapolation guard") {
    const FrfDataset ds = g_dataset();
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-10;
    auto [model, diag] = boomid::paaa_fit(ds, opts);
    // training p range [0.5, 2.5]; guard allows [0.25, 5]
    CHECK_NOTHROW(boomid::paaa_evaluate(model, cplx(0.0, 1.0), 0.3));
    CHECK_THROWS_AS(boomid::paaa_evaluate(model, cplx(0.0, 1.0), 10.0), boomid::out_of_range_error);
    CHECK_NOTHROW(boomid::paaa_evaluate(model, cplx(0.0, 1.0), 10.0, true));
    CHECK_THROWS_AS(boomid::slice_at_param(model, 0.01), boomid::out_of_range_error);
    (void)diag;
}

TEST_CASE("paaa: rescaling the data rescales the model value") {
    FrfDataset ds = g_dataset();
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-10;
    auto [m1, d1] = boomid::paaa_fit(ds, opts);

    const cplx c(2.0, -1.0);
    for (cplx& v : ds.values) v *= c;
    auto [m2, d2] = boomid::paaa_fit(ds, opts);

    std::mt19937 rng(23);
    std::uniform_real_distribution<double> fdist(0.01, 1.0), pdist(0.5, 2.5);
    for (int q = 0; q < 20; ++q) {
        const cplx s(0.0, kTwoPi * fdist(rng));
        const double p = pdist(rng);
        const cplx a = boomid::paaa_evaluate(m1, s, p);
        const cplx b = boomid::paaa_evaluate(m2, s, p);
        CHECK(std::abs(b - c * a) < 1e-10 * std::abs(c * a));
    }
    (void)d1; (void)d2;
}

TEST_CASE("paaa_fit: error history trends downward") {
    const FrfDataset ds = plant_dataset(300, 7);
    boomid::PaaaOptions opts;
    opts.tol_rel = 1e-8;
    auto [model, diag] = boomid::paaa_fit(ds, opts);
    // greedy interpolation removes the worst point each step; small upticks
    // near convergence are inherent to the re-solved LS weights, so allow a
    // bounded relative slack while requiring an overall decreasing trend
    for (std::size_t i = 1; i < diag.error_history.size(); ++i)
        CHECK(diag.error_history[i] <= diag.error_history[i - 1] * 2.0 + 1e-9);
    REQUIRE(diag.error_history.size() >= 2);
    CHECK(diag.error_history.back() < diag.error_history.front());
    (void)model;
}
