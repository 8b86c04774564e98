#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "optocorr/errors.hpp"
#include "optocorr/sweep.hpp"

using namespace optocorr;

namespace {

constexpr double kPi = std::numbers::pi;

SweepSpec phase_spec(std::vector<Measure> measures) {
    SweepSpec spec;
    spec.base = reference_params();
    spec.axis1 = {SweepParam::phi, 0.0, 2.0 * kPi, 9};
    spec.measures = std::move(measures);
    return spec;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("axis grids are inclusive and monotone") {
    const SweepAxis axis{SweepParam::T, 0.0, 5.0, 100};
    const std::vector<double> v = axis.values();
    REQUIRE(v.size() == 100);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 5.0);
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());

    const SweepAxis phase{SweepParam::phi, 0.0, 2.0 * kPi, 201};
    CHECK(phase.values()[100] == doctest::Approx(kPi));
    CHECK(phase.values()[200] == 2.0 * kPi);
}

TEST_CASE("axis values are in config units") {
    SystemParams p = reference_params();
    apply_axis_value(p, SweepParam::delta_at, -0.5);
    CHECK(p.delta_at == -0.5 * p.omega_m);
    apply_axis_value(p, SweepParam::delta_eff_common, 1.5);
    CHECK(p.delta1_eff == 1.5 * p.omega_m);
    CHECK(p.delta2_eff == 1.5 * p.omega_m);
    apply_axis_value(p, SweepParam::Jab, 3.0);
    CHECK(p.j_ab == units::from_mhz(3.0));
    const double kappa = p.kappa1;
    apply_axis_value(p, SweepParam::f, 2.0);
    CHECK(p.f == units::from_mhz(2.0));
    CHECK(p.kappa1 == kappa);
    apply_axis_value(p, SweepParam::T, 0.25);
    CHECK(p.temperature == 0.25);

    for (auto name : {"phi", "delta_at", "delta_eff_common", "G1", "G2", "Jac", "Jab", "T", "f"}) {
        CHECK(param_name(parse_sweep_param(name)) == name);
    }
    CHECK_THROWS_AS(parse_sweep_param("kappa"), ConfigError);
    CHECK_THROWS_AS(parse_measure("EN_c1a"), ConfigError);
    CHECK_THROWS_AS(parse_policy("ignore"), ConfigError);
}

TEST_CASE("phase rows at 0 and 2 pi coincide") {
    const SweepResult r =
        run_sweep(phase_spec({Measure::EN_c2a, Measure::EN_ab, Measure::EN_c2b, Measure::DG_c2a,
                              Measure::Rtau_min}));
    REQUIRE(r.rows.size() == 9);
    const SweepRow& first = r.rows.front();
    const SweepRow& last = r.rows.back();
    REQUIRE(first.stable);
    for (std::size_t k = 0; k < first.values.size(); ++k) {
        CHECK(*first.values[k] == doctest::Approx(*last.values[k]).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("columns and header") {
    SweepSpec spec = phase_spec({Measure::EN_c2a, Measure::stability});
    spec.axis2 = SweepAxis{SweepParam::Jab, 1.0, 2.0, 2};
    const SweepResult r = run_sweep(spec);
    CHECK(r.columns == std::vector<std::string>{"phi", "Jab", "stable", "EN_c2a", "max_real_part", "errors"});
    CHECK(r.rows.size() == 18);
    CHECK(r.rows[0].axis2 == 1.0);
    CHECK(r.rows[1].axis2 == 2.0);
    CHECK(r.rows[1].axis1 == 0.0);
    CHECK(r.version == kVersion);
    CHECK(r.config_hash.size() == 16);

    std::ostringstream csv;
    write_csv(csv, r);
    const auto lines = lines_of(csv.str());
    REQUIRE(lines.size() == 20);
    CHECK(lines[0] == "# optocorr v" + std::string(kVersion) + " config=" + r.config_hash);
    CHECK(lines[1] == "phi,Jab,stable,EN_c2a,max_real_part,errors");
    CHECK(lines[2].rfind("0,1,1,", 0) == 0);
}

TEST_CASE("hash tracks the sweep definition") {
    const SweepSpec a = phase_spec({Measure::EN_c2a});
    SweepSpec b = a;
    CHECK(spec_hash(a) == spec_hash(b));
    b.base.temperature += 1e-6;
    CHECK(spec_hash(a) != spec_hash(b));
    b = a;
    b.axis1.count = 10;
    CHECK(spec_hash(a) != spec_hash(b));
    b = a;
    b.policy = UnstablePolicy::skip;
    CHECK(spec_hash(a) != spec_hash(b));
}

TEST_CASE("output is deterministic and independent of the worker count") {
    SweepSpec spec = figure_preset("fig5");
    apply_grid(spec, 41, std::nullopt);
    std::ostringstream one, again, many;
    write_csv(one, run_sweep(spec, 1));
    write_csv(again, run_sweep(spec, 1));
    write_csv(many, run_sweep(spec, 7));
    CHECK(one.str() == again.str());
    CHECK(one.str() == many.str());
}

TEST_CASE("JSON lines carry the same numbers as the CSV") {
    SweepSpec spec = phase_spec({Measure::EN_c2a, Measure::DG_ab, Measure::Rtau_min});
    const SweepResult r = run_sweep(spec);
    std::ostringstream csv, jsonl;
    write_csv(csv, r);
    write_jsonl(jsonl, r);
    const auto clines = lines_of(csv.str());
    const auto jlines = lines_of(jsonl.str());
    REQUIRE(clines.size() == jlines.size() + 1);
    const auto header = nlohmann::json::parse(jlines[0]);
    CHECK(header["config"] == r.config_hash);
    CHECK(header["version"] == std::string(kVersion));
    for (std::size_t i = 2; i < clines.size(); ++i) {
        const auto obj = nlohmann::json::parse(jlines[i - 1]);
        std::istringstream row(clines[i]);
        std::string cell;
        for (const std::string& col : r.columns) {
            std::getline(row, cell, ',');
            if (col == "errors") {
                CHECK(obj[col] == cell);
            } else {
                CHECK(obj[col].get<double>() == std::stod(cell));
            }
        }
    }
}

TEST_CASE("unstable-point policies") {
    SweepSpec spec;
    spec.base = reference_params();
    spec.axis1 = {SweepParam::G1, 0.1, 2.0, 5};
    spec.axis2 = SweepAxis{SweepParam::G2, 0.1, 0.5, 2};
    spec.measures = {Measure::EN_c2a, Measure::stability};

    spec.policy = UnstablePolicy::missing;
    const SweepResult missing = run_sweep(spec);
    CHECK(missing.rows.size() == 10);
    const auto unstable = std::count_if(missing.rows.begin(), missing.rows.end(),
                                        [](const SweepRow& r) { return !r.stable; });
    REQUIRE(unstable > 0);
    for (const SweepRow& r : missing.rows) {
        CHECK(r.values[0].has_value() == r.stable);
        CHECK(r.values[1].has_value());
        CHECK((*r.values[1] < 0.0) == r.stable);
    }

    spec.policy = UnstablePolicy::skip;
    const SweepResult skip = run_sweep(spec);
    CHECK(static_cast<long>(skip.rows.size()) == 10 - unstable);

    spec.policy = UnstablePolicy::error;
    CHECK_THROWS_AS(run_sweep(spec, 3), UnstableDrift);
}

TEST_CASE("invalid sweeps are rejected") {
    SweepSpec spec = phase_spec({Measure::EN_c2a});
    spec.axis1.count = 1;
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    spec = phase_spec({Measure::EN_c2a});
    spec.axis1.stop = spec.axis1.start;
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    spec = phase_spec({});
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    spec = phase_spec({Measure::EN_c2a});
    spec.axis2 = spec.axis1;
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    spec = phase_spec({Measure::EN_c2a});
    CHECK_THROWS_AS(apply_grid(spec, 5, 5), ConfigError);
    CHECK_THROWS_AS(figure_preset("fig11"), ConfigError);
}

TEST_CASE("figure presets") {
    const std::vector<std::string> ids = figure_ids();
    for (auto id : {"fig2", "fig3", "fig4", "fig5", "fig5a", "fig5b", "fig5c", "fig5d", "fig6",
                    "fig7", "fig7a", "fig7b", "fig7c", "fig7d", "fig7e", "fig7f", "fig8", "fig9",
                    "fig9a", "fig9b", "fig9c", "fig9d", "fig10"}) {
        CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
        CHECK_NOTHROW(validate(figure_preset(id)));
    }

    const SweepSpec fig10 = figure_preset("fig10");
    CHECK(fig10.axis1.param == SweepParam::phi);
    CHECK(fig10.axis1.count == 201);
    CHECK(fig10.axis1.stop == 2.0 * kPi);
    CHECK(fig10.measures == std::vector<Measure>{Measure::DG_c2a, Measure::DG_ab, Measure::DG_c2b});

    const SweepSpec fig7 = figure_preset("fig7");
    CHECK(fig7.axis1.param == SweepParam::T);
    REQUIRE(fig7.axis2);
    CHECK(fig7.axis2->param == SweepParam::Jab);
    CHECK(fig7.axis2->values() == std::vector<double>{1.0, 2.0, 3.0});

    // presets start from the supplied base point
    SystemParams base = reference_params();
    base.kappa1 = base.kappa2 = units::from_mhz(3.0);
    CHECK(figure_preset("fig3", base).base.kappa1 == units::from_mhz(3.0));
}

TEST_CASE("fig2 stability map") {
    const SweepSpec spec = figure_preset("fig2");
    CHECK(spec.axis1.param == SweepParam::G1);
    REQUIRE(spec.axis2);
    CHECK(spec.axis2->param == SweepParam::G2);
    const SweepResult r = run_sweep(spec, 4);
    CHECK(r.rows.size() == 2500);

    SweepSpec point = spec;
    point.axis1 = {SweepParam::G1, 2.0, 3.0, 2};
    point.axis2 = SweepAxis{SweepParam::G2, 4.0, 5.0, 2};
    CHECK(run_sweep(point).rows[0].stable);
}
