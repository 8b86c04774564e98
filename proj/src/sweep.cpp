#include "optocorr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "optocorr/errors.hpp"
#include "optocorr/report.hpp"

namespace optocorr {

namespace {

constexpr std::pair<SweepParam, std::string_view> kParamNames[] = {
    {SweepParam::phi, "phi"},
    {SweepParam::delta_at, "delta_at"},
    {SweepParam::delta_eff_common, "delta_eff_common"},
    {SweepParam::G1, "G1"},
    {SweepParam::G2, "G2"},
    {SweepParam::Jac, "Jac"},
    {SweepParam::Jab, "Jab"},
    {SweepParam::T, "T"},
    {SweepParam::f, "f"},
};

constexpr std::pair<Measure, std::string_view> kMeasureNames[] = {
    {Measure::EN_c2a, "EN_c2a"}, {Measure::EN_ab, "EN_ab"},       {Measure::EN_c2b, "EN_c2b"},
    {Measure::DG_c2a, "DG_c2a"}, {Measure::DG_ab, "DG_ab"},       {Measure::DG_c2b, "DG_c2b"},
    {Measure::Rtau_min, "Rtau_min"}, {Measure::stability, "stability"},
};

constexpr std::pair<UnstablePolicy, std::string_view> kPolicyNames[] = {
    {UnstablePolicy::missing, "missing"},
    {UnstablePolicy::skip, "skip"},
    {UnstablePolicy::error, "error"},
};

template <typename E, std::size_t N>
std::string_view lookup_name(const std::pair<E, std::string_view> (&table)[N], E value) {
    for (const auto& [e, name] : table) {
        if (e == value) return name;
    }
    return "?";
}

template <typename E, std::size_t N>
E lookup_value(const std::pair<E, std::string_view> (&table)[N], std::string_view name,
               const char* what) {
    for (const auto& [e, n] : table) {
        if (n == name) return e;
    }
    throw ConfigError(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

// "stability" is emitted as the max real part of the drift spectrum.
std::string column_name(Measure m) {
    return m == Measure::stability ? "max_real_part" : std::string(measure_name(m));
}

std::optional<double> measure_value(const CorrelationReport& r, Measure m) {
    if (m == Measure::stability) return r.stability.max_real_part;
    if (!r.measures) return std::nullopt;
    const PointMeasures& pm = *r.measures;
    switch (m) {
        case Measure::EN_c2a: return pm.e_n[0];
        case Measure::EN_ab: return pm.e_n[1];
        case Measure::EN_c2b: return pm.e_n[2];
        case Measure::DG_c2a: return pm.d_g[0];
        case Measure::DG_ab: return pm.d_g[1];
        case Measure::DG_c2b: return pm.d_g[2];
        case Measure::Rtau_min: return pm.r_tau.r_tau_min;
        case Measure::stability: break;
    }
    return std::nullopt;
}

struct GridPoint {
    double v1 = 0.0;
    std::optional<double> v2;
};

std::string describe(const SweepSpec& spec, const GridPoint& pt) {
    std::ostringstream os;
    os << param_name(spec.axis1.param) << "=" << format_value(pt.v1);
    if (pt.v2) os << ", " << param_name(spec.axis2->param) << "=" << format_value(*pt.v2);
    return os.str();
}

struct PointOutcome {
    SweepRow row;
    bool keep = true;
    std::string abort_message;  // set when the policy asks to abort
    bool abort_unstable = false;
};

PointOutcome evaluate(const SweepSpec& spec, const GridPoint& pt) {
    PointOutcome out;
    out.row.axis1 = pt.v1;
    out.row.axis2 = pt.v2;
    out.row.values.assign(spec.measures.size(), std::nullopt);

    SystemParams p = spec.base;
    apply_axis_value(p, spec.axis1.param, pt.v1);
    if (pt.v2) apply_axis_value(p, spec.axis2->param, *pt.v2);

    try {
        const CorrelationReport report = analyze(p);
        out.row.stable = report.stability.stable;
        for (std::size_t k = 0; k < spec.measures.size(); ++k) {
            out.row.values[k] = measure_value(report, spec.measures[k]);
        }
        if (report.measures && report.measures->r_tau.monogamy_violated) {
            out.row.error = "monogamy violation";
        }
        if (!report.stability.stable) {
            if (spec.policy == UnstablePolicy::skip) out.keep = false;
            if (spec.policy == UnstablePolicy::error) {
                out.abort_message = "unstable point at " + describe(spec, pt);
                out.abort_unstable = true;
            }
        }
    } catch (const NumericError& e) {
        out.row.error = e.what();
        if (spec.policy == UnstablePolicy::error) {
            out.abort_message = std::string(e.what()) + " at " + describe(spec, pt);
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string header_line(const SweepResult& r) {
    return "# optocorr v" + r.version + " config=" + r.config_hash;
}

}  // namespace

std::string_view param_name(SweepParam param) { return lookup_name(kParamNames, param); }

SweepParam parse_sweep_param(std::string_view name) {
    return lookup_value(kParamNames, name, "sweep parameter");
}

void apply_axis_value(SystemParams& p, SweepParam param, double value) {
    switch (param) {
        case SweepParam::phi: p.phi = value; break;
        case SweepParam::delta_at: p.delta_at = value * p.omega_m; break;
        case SweepParam::delta_eff_common:
            p.delta1_eff = value * p.omega_m;
            p.delta2_eff = value * p.omega_m;
            break;
        case SweepParam::G1: p.g1_eff = units::from_mhz(value); break;
        case SweepParam::G2: p.g2_eff = units::from_mhz(value); break;
        case SweepParam::Jac: p.j_ac_mag = units::from_mhz(value); break;
        case SweepParam::Jab: p.j_ab = units::from_mhz(value); break;
        case SweepParam::T: p.temperature = value; break;
        case SweepParam::f: p.f = units::from_mhz(value); break;
    }
}

std::string_view measure_name(Measure m) { return lookup_name(kMeasureNames, m); }

Measure parse_measure(std::string_view name) {
    return lookup_value(kMeasureNames, name, "measure");
}

std::string_view policy_name(UnstablePolicy policy) { return lookup_name(kPolicyNames, policy); }

UnstablePolicy parse_policy(std::string_view name) {
    return lookup_value(kPolicyNames, name, "unstable-point policy");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        out[k] = k == count - 1 ? stop : start + (stop - start) * k / (count - 1);
    }
    return out;
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    auto check_axis = [](const SweepAxis& axis, const char* which) {
        if (axis.count < 2) {
            throw ConfigError(std::string(which) + ": grid count must be >= 2");
        }
        if (!std::isfinite(axis.start) || !std::isfinite(axis.stop) || axis.start == axis.stop) {
            throw ConfigError(std::string(which) + ": start and stop must be finite and differ");
        }
    };
    check_axis(spec.axis1, "axis1");
    if (spec.axis2) {
        check_axis(*spec.axis2, "axis2");
        if (spec.axis2->param == spec.axis1.param) {
            throw ConfigError("axis1 and axis2 sweep the same parameter");
        }
    }
    if (spec.measures.empty()) throw ConfigError("measure list is empty");
}

std::string spec_hash(const SweepSpec& spec) {
    std::ostringstream os;
    os << std::setprecision(17);
    const SystemParams& b = spec.base;
    os << b.omega_m << ' ' << b.gamma_m << ' ' << b.f << ' ' << b.kappa1 << ' ' << b.kappa2 << ' '
       << b.delta1_eff << ' ' << b.delta2_eff << ' ' << b.delta_at << ' ' << b.g1_eff << ' '
       << b.g2_eff << ' ' << b.j_ac_mag << ' ' << b.phi << ' ' << b.j_ab << ' ' << b.temperature;
    auto axis = [&](const SweepAxis& a) {
        os << '|' << param_name(a.param) << ' ' << a.start << ' ' << a.stop << ' ' << a.count;
    };
    axis(spec.axis1);
    if (spec.axis2) axis(*spec.axis2);
    os << '|';
    for (Measure m : spec.measures) os << measure_name(m) << ',';
    os << '|' << policy_name(spec.policy);

    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
    validate(spec);

    std::vector<GridPoint> grid;
    const std::vector<double> v1 = spec.axis1.values();
    const std::vector<double> v2 = spec.axis2 ? spec.axis2->values() : std::vector<double>{};
    for (double a : v1) {
        if (spec.axis2) {
            for (double b : v2) grid.push_back({a, b});
        } else {
            grid.push_back({a, std::nullopt});
        }
    }

    std::vector<PointOutcome> outcomes(grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            outcomes[i] = evaluate(spec, grid[i]);
        }
    };
    const int n_threads = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(grid.size(), 1)));
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }

    SweepResult result;
    result.version = std::string(kVersion);
    result.config_hash = spec_hash(spec);
    result.columns.emplace_back(param_name(spec.axis1.param));
    if (spec.axis2) result.columns.emplace_back(param_name(spec.axis2->param));
    result.columns.emplace_back("stable");
    for (Measure m : spec.measures) result.columns.push_back(column_name(m));
    result.columns.emplace_back("errors");

    for (PointOutcome& o : outcomes) {
        if (!o.abort_message.empty()) {
            if (o.abort_unstable) throw UnstableDrift(o.abort_message);
            throw NumericError(o.abort_message);
        }
        if (o.keep) result.rows.push_back(std::move(o.row));
    }
    return result;
}

std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream& os, const SweepResult& result) {
    os << header_line(result) << '\n';
    for (std::size_t k = 0; k < result.columns.size(); ++k) {
        os << (k ? "," : "") << result.columns[k];
    }
    os << '\n';
    for (const SweepRow& row : result.rows) {
        os << format_value(row.axis1);
        if (row.axis2) os << ',' << format_value(*row.axis2);
        os << ',' << (row.stable ? 1 : 0);
        for (const auto& v : row.values) {
            os << ',';
            if (v) os << format_value(*v);
        }
        os << ',' << csv_escape(row.error) << '\n';
    }
}

void write_jsonl(std::ostream& os, const SweepResult& result) {
    using nlohmann::json;
    // Values go through the same 12-digit rendering as the CSV.
    auto rounded = [](double x) { return std::stod(format_value(x)); };
    json header = {{"header", header_line(result)},
                   {"version", result.version},
                   {"config", result.config_hash},
                   {"columns", result.columns}};
    os << header.dump() << '\n';
    for (const SweepRow& row : result.rows) {
        json obj = json::object();
        std::size_t col = 0;
        obj[result.columns[col++]] = rounded(row.axis1);
        if (row.axis2) obj[result.columns[col++]] = rounded(*row.axis2);
        obj[result.columns[col++]] = row.stable ? 1 : 0;
        for (const auto& v : row.values) {
            obj[result.columns[col++]] = v ? json(rounded(*v)) : json(nullptr);
        }
        obj[result.columns[col]] = row.error;
        os << obj.dump() << '\n';
    }
}

void apply_grid(SweepSpec& spec, int n, std::optional<int> m) {
    spec.axis1.count = n;
    if (m) {
        if (!spec.axis2) throw ConfigError("--grid NxM given for a one-dimensional sweep");
        spec.axis2->count = *m;
    }
}

}  // namespace optocorr
