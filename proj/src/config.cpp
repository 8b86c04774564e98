#include "optocorr/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "optocorr/errors.hpp"

namespace optocorr {

namespace {

constexpr std::string_view kDrivePrefix = "drive.";

bool is_known(std::string_view key) {
    const auto& req = required_keys();
    if (std::find(req.begin(), req.end(), key) != req.end()) return true;
    if (key.starts_with(kDrivePrefix)) {
        const auto& dk = drive_keys();
        return std::find(dk.begin(), dk.end(), key.substr(kDrivePrefix.size())) != dk.end();
    }
    return false;
}

double number_value(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

double get(const ConfigValues& values, std::string_view key) {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + std::string(key) + "'");
    return it->second;
}

std::optional<double> find(const ConfigValues& values, std::string_view key) {
    const auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
}

}  // namespace

const std::vector<std::string_view>& required_keys() {
    static const std::vector<std::string_view> keys = {
        "omega_m_mhz", "gamma_m_hz", "f_mhz",   "kappa1_mhz", "kappa2_mhz",
        "G1_mhz",      "G2_mhz",     "Jac_mhz", "Jab_mhz",    "phi_rad",
        "delta1_over_omegam",        "delta2_over_omegam",    "delta_at_over_omegam",
        "T_kelvin",
    };
    return keys;
}

const std::vector<std::string_view>& drive_keys() {
    static const std::vector<std::string_view> keys = {
        "g1_hz",        "g2_hz",        "delta1_bare_over_omegam", "delta2_bare_over_omegam",
        "E1_re_per_us", "E1_im_per_us", "E2_re_per_us",            "E2_im_per_us",
        "power1_mw",    "power2_mw",    "laser_wavelength_nm",
    };
    return keys;
}

ConfigValues reference_config() {
    const SystemParams p = reference_params();
    return {
        {"omega_m_mhz", units::to_mhz(p.omega_m)},
        {"gamma_m_hz", units::to_hz(p.gamma_m)},
        {"f_mhz", units::to_mhz(p.f)},
        {"kappa1_mhz", units::to_mhz(p.kappa1)},
        {"kappa2_mhz", units::to_mhz(p.kappa2)},
        {"G1_mhz", units::to_mhz(p.g1_eff)},
        {"G2_mhz", units::to_mhz(p.g2_eff)},
        {"Jac_mhz", units::to_mhz(p.j_ac_mag)},
        {"Jab_mhz", units::to_mhz(p.j_ab)},
        {"phi_rad", p.phi},
        {"delta1_over_omegam", 1.0},
        {"delta2_over_omegam", 1.0},
        {"delta_at_over_omegam", -1.0},
        {"T_kelvin", p.temperature},
    };
}

ConfigValues parse_config(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ConfigValues values;
    for (const auto& [key, value] : doc.items()) {
        if (key == "drive") {
            if (!value.is_object()) throw ConfigError("config key 'drive' must be an object");
            for (const auto& [dkey, dvalue] : value.items()) {
                const std::string full = std::string(kDrivePrefix) + dkey;
                if (!is_known(full)) throw ConfigError("unknown config key '" + full + "'");
                values[full] = number_value(dvalue, full);
            }
            continue;
        }
        if (!is_known(key) || key.starts_with(kDrivePrefix)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        values[key] = number_value(value, key);
    }
    for (std::string_view key : required_keys()) {
        if (!values.contains(key)) {
            throw ConfigError("missing config key '" + std::string(key) + "'");
        }
    }
    return values;
}

ConfigValues load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw IoError("error reading config file '" + path.string() + "'");
    return parse_config(text.str());
}

void apply_override(ConfigValues& values, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    }
    const std::string key(assignment.substr(0, eq));
    if (!is_known(key)) throw ConfigError("unknown config key '" + key + "'");
    const std::string text(assignment.substr(eq + 1));
    double value = 0.0;
    std::size_t used = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size()) {
        throw ConfigError("override value for '" + key + "' is not a number: '" + text + "'");
    }
    values[key] = value;
}

SystemParams to_system_params(const ConfigValues& values) {
    SystemParams p;
    p.omega_m = units::from_mhz(get(values, "omega_m_mhz"));
    p.gamma_m = units::from_hz(get(values, "gamma_m_hz"));
    p.f = units::from_mhz(get(values, "f_mhz"));
    p.kappa1 = units::from_mhz(get(values, "kappa1_mhz"));
    p.kappa2 = units::from_mhz(get(values, "kappa2_mhz"));
    p.g1_eff = units::from_mhz(get(values, "G1_mhz"));
    p.g2_eff = units::from_mhz(get(values, "G2_mhz"));
    p.j_ac_mag = units::from_mhz(get(values, "Jac_mhz"));
    p.j_ab = units::from_mhz(get(values, "Jab_mhz"));
    p.phi = get(values, "phi_rad");
    p.delta1_eff = get(values, "delta1_over_omegam") * p.omega_m;
    p.delta2_eff = get(values, "delta2_over_omegam") * p.omega_m;
    p.delta_at = get(values, "delta_at_over_omegam") * p.omega_m;
    p.temperature = get(values, "T_kelvin");
    return make_system_params(p);
}

std::optional<RawDriveParams> to_drive_params(const ConfigValues& values) {
    const bool any = std::any_of(values.begin(), values.end(), [](const auto& kv) {
        return std::string_view(kv.first).starts_with(kDrivePrefix);
    });
    if (!any) return std::nullopt;

    auto key = [](std::string_view k) { return std::string(kDrivePrefix) + std::string(k); };
    const double omega_m = units::from_mhz(get(values, "omega_m_mhz"));

    RawDriveParams raw;
    raw.g1 = units::from_hz(get(values, key("g1_hz")));
    raw.g2 = units::from_hz(get(values, key("g2_hz")));
    raw.delta1_bare = get(values, key("delta1_bare_over_omegam")) * omega_m;
    raw.delta2_bare = get(values, key("delta2_bare_over_omegam")) * omega_m;
    raw.drive_e1 = {find(values, key("E1_re_per_us")).value_or(0.0),
                    find(values, key("E1_im_per_us")).value_or(0.0)};
    raw.drive_e2 = {find(values, key("E2_re_per_us")).value_or(0.0),
                    find(values, key("E2_im_per_us")).value_or(0.0)};
    if (auto mw = find(values, key("power1_mw"))) raw.power1 = *mw * 1e-3;
    if (auto mw = find(values, key("power2_mw"))) raw.power2 = *mw * 1e-3;
    if (auto nm = find(values, key("laser_wavelength_nm"))) {
        if (!(*nm > 0.0)) throw ParameterError("laser_wavelength_nm must be > 0");
        raw.omega_l = units::from_si(units::kTwoPi * units::kSpeedOfLight / (*nm * 1e-9));
    }
    validate(raw);
    return raw;
}

}  // namespace optocorr
