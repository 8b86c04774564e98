#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "optocorr/cli.hpp"
#include "optocorr/config.hpp"
#include "optocorr/errors.hpp"

using namespace optocorr;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        const auto comma = line.find(',');
        if (comma != std::string::npos && line.rfind("key,", 0) != 0) {
            kv[line.substr(0, comma)] = line.substr(comma + 1);
        }
    }
    return kv;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "optocorr_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = temp_dir() / name;
    std::ofstream(path) << text;
    return path;
}

nlohmann::json reference_json() {
    nlohmann::json doc;
    for (const auto& [k, v] : reference_config()) doc[k] = v;
    return doc;
}

}  // namespace

TEST_CASE("config parsing") {
    const ConfigValues ref = reference_config();
    CHECK(ref.size() == required_keys().size());
    CHECK(to_system_params(ref) == reference_params());
    CHECK(parse_config(reference_json().dump()) == ref);

    nlohmann::json doc = reference_json();
    doc["kappa_mhz"] = 1.0;
    CHECK_THROWS_WITH_AS(parse_config(doc.dump()), "unknown config key 'kappa_mhz'", ConfigError);

    doc = reference_json();
    doc.erase("Jab_mhz");
    CHECK_THROWS_WITH_AS(parse_config(doc.dump()), "missing config key 'Jab_mhz'", ConfigError);

    doc = reference_json();
    doc["T_kelvin"] = "cold";
    CHECK_THROWS_AS(parse_config(doc.dump()), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config(temp_dir() / "does_not_exist.json"), IoError);

    ConfigValues v = ref;
    apply_override(v, "Jab_mhz=2.5");
    CHECK(v.at("Jab_mhz") == 2.5);
    CHECK_THROWS_AS(apply_override(v, "Jab_mhz"), ConfigError);
    CHECK_THROWS_AS(apply_override(v, "nope=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(v, "Jab_mhz=abc"), ConfigError);

    apply_override(v, "kappa1_mhz=-1");
    CHECK_THROWS_AS(to_system_params(v), ParameterError);

    CHECK_FALSE(to_drive_params(ref).has_value());
}

TEST_CASE("measure reports the reference correlations") {
    const Run r = run({"measure", "--set", "Jab_mhz=2"});
    REQUIRE(r.code == 0);
    const auto kv = key_values(r.out);
    CHECK(std::stod(kv.at("EN_c2a")) == doctest::Approx(0.258400586834).epsilon(1e-9));
    CHECK(std::stod(kv.at("EN_ab")) == doctest::Approx(0.241547381123).epsilon(1e-9));
    CHECK(kv.at("stable") == "1");
    CHECK(kv.at("Jab_mhz") == "2");
    for (auto key : {"DG_c2a", "DG_ab", "DG_c2b", "Rtau_c2|ab", "Rtau_raw_b|c2a", "Rtau_min",
                     "lyapunov_residual", "uncertainty_min_eig", "n_th", "spectral_margin"}) {
        CHECK(kv.count(key) == 1);
    }

    const Run j = run({"measure", "--set", "Jab_mhz=2", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    for (const auto& [key, text] : kv) {
        INFO(key);
        CHECK(doc.at(key).get<double>() == std::stod(text));
    }
}

TEST_CASE("overrides apply after the config file, in order") {
    nlohmann::json doc = reference_json();
    doc["Jab_mhz"] = 3.0;
    const fs::path cfg = write_file("jab3.json", doc.dump());
    auto jab = [](const Run& r) { return key_values(r.out).at("Jab_mhz"); };
    CHECK(jab(run({"measure", "--config", cfg.string()})) == "3");
    CHECK(jab(run({"measure", "--config", cfg.string(), "--set", "Jab_mhz=2"})) == "2");
    CHECK(jab(run({"measure", "--set", "Jab_mhz=2", "--set", "Jab_mhz=1.5"})) == "1.5");
}

TEST_CASE("exit codes") {
    nlohmann::json doc = reference_json();
    doc["bogus_key"] = 1.0;
    const fs::path bad = write_file("bogus.json", doc.dump());
    const Run unknown = run({"measure", "--config", bad.string()});
    CHECK(unknown.code == kExitUsage);
    CHECK(unknown.err.find("bogus_key") != std::string::npos);

    CHECK(run({"measure", "--config", (temp_dir() / "missing.json").string()}).code == kExitIo);
    CHECK(run({"measure", "--out", "/nonexistent_dir/x.csv"}).code == kExitIo);
    CHECK(run({"measure", "--set", "G1_mhz=0.1", "--set", "G2_mhz=0.1", "--unstable", "error"}).code ==
          kExitNumeric);
    CHECK(run({"measure", "--set", "G1_mhz=0.1", "--set", "G2_mhz=0.1"}).code == kExitOk);
    CHECK(run({"measure", "--set", "f_mhz=-1"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"figure", "fig99"}).code == kExitUsage);
    CHECK(run({"sweep", "--axis", "phi:0:1", "--measures", "EN_ab"}).code == kExitUsage);
    CHECK(run({"sweep", "--axis", "phi:0:1:x", "--measures", "EN_ab"}).code == kExitUsage);
    CHECK(run({"measure", "--format", "xml"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("figure fig2 writes the full map") {
    const fs::path out = temp_dir() / "fig2.csv";
    fs::remove(out);
    const Run r = run({"figure", "fig2", "--workers", "4", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 2502);
    CHECK(lines[0].rfind("# optocorr v", 0) == 0);
    CHECK(lines[1] == "G1,G2,stable,max_real_part,errors");
}

TEST_CASE("sweep and grid override") {
    const Run r = run({"sweep", "--axis", "phi:0:6.283185307179586:5", "--axis", "Jab:1:2:3",
                       "--measures", "EN_c2a,Rtau_min", "--workers", "2"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::vector<std::string> lines;
    for (std::string line; std::getline(is, line);) lines.push_back(line);
    CHECK(lines.size() == 2 + 15);
    CHECK(lines[1] == "phi,Jab,stable,EN_c2a,Rtau_min,errors");

    const Run g = run({"figure", "fig10", "--grid", "11", "--format", "json"});
    REQUIRE(g.code == 0);
    std::istringstream js(g.out);
    int n = 0;
    for (std::string line; std::getline(js, line);) {
        CHECK(nlohmann::json::accept(line));
        ++n;
    }
    CHECK(n == 12);
    CHECK(run({"figure", "fig10", "--grid", "11x3"}).code == kExitUsage);
    CHECK(run({"figure", "fig10", "--grid", "ten"}).code == kExitUsage);
}

TEST_CASE("matrix dump") {
    const Run r = run({"matrix", "--with-cm", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["A"].size() == 8);
    CHECK(doc["V"][0].size() == 8);
    CHECK(doc["D"][6][6].get<double>() > 0.0);

    const Run csv = run({"matrix"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("# A") != std::string::npos);
    CHECK(csv.out.find("# V") == std::string::npos);
}

TEST_CASE("steady state from drive settings") {
    CHECK(run({"steady"}).code == kExitUsage);
    nlohmann::json doc = reference_json();
    doc["drive"] = {{"g1_hz", 200.0},
                    {"g2_hz", 200.0},
                    {"delta1_bare_over_omegam", 1.0},
                    {"delta2_bare_over_omegam", 1.0},
                    {"E1_re_per_us", 1.5e6},
                    {"E1_im_per_us", 0.0},
                    {"E2_re_per_us", 0.0},
                    {"E2_im_per_us", 3e6}};
    const fs::path cfg = write_file("drive.json", doc.dump());
    const Run r = run({"steady", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    const auto kv = key_values(r.out);
    CHECK(std::stod(kv.at("residual")) <= 1e-10 * 3e6);
    CHECK(std::stod(kv.at("alpha1_abs")) > 0.0);
    CHECK(std::stod(kv.at("G1_mhz")) > 0.0);
}
