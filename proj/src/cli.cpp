#include "optocorr/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "optocorr/config.hpp"
#include "optocorr/errors.hpp"
#include "optocorr/report.hpp"
#include "optocorr/steady_state.hpp"
#include "optocorr/sweep.hpp"

namespace optocorr {

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string format = "csv";
    int workers = 1;
    std::vector<std::string> sets;
    std::string grid;
    std::string unstable = "missing";
    bool with_cm = false;
    std::string figure_id;
    std::vector<std::string> axes;
    std::vector<std::string> measures;
};

bool verbose() {
    const char* v = std::getenv("OPTOCORR_VERBOSE");
    return v != nullptr && *v != '\0' && std::string_view(v) != "0";
}

std::string full_precision(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Ordered key/value output shared by `steady` and `measure`.
class KeyValueTable {
public:
    void add(std::string key, std::optional<double> value) {
        rows_.emplace_back(std::move(key), value);
    }

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json") {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (const auto& [k, v] : rows_) {
                obj[k] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
            }
            os << obj.dump(2) << '\n';
            return;
        }
        os << "key,value\n";
        for (const auto& [k, v] : rows_) {
            os << k << ',' << (v ? full_precision(*v) : "") << '\n';
        }
    }

private:
    std::vector<std::pair<std::string, std::optional<double>>> rows_;
};

ConfigValues load_values(const Options& opt) {
    ConfigValues values = opt.config.empty() ? reference_config() : load_config(opt.config);
    // --set is applied after the file, in command-line order
    for (const std::string& s : opt.sets) apply_override(values, s);
    return values;
}

void echo_params(KeyValueTable& table, const ConfigValues& values) {
    for (std::string_view key : required_keys()) {
        table.add(std::string(key), values.find(key)->second);
    }
}

// Runs `body` against --out (or the default stream).
void with_output(const Options& opt, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
    if (opt.out.empty()) {
        body(fallback);
        fallback.flush();
        return;
    }
    std::ofstream file(opt.out);
    if (!file) throw IoError("cannot open output file '" + opt.out + "'");
    body(file);
    file.flush();
    if (!file) throw IoError("error writing output file '" + opt.out + "'");
}

void write_matrix_csv(std::ostream& os, const char* name, const Mat8& m) {
    os << "# " << name << '\n';
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) os << (c ? "," : "") << full_precision(m(r, c));
        os << '\n';
    }
}

nlohmann::ordered_json matrix_json(const Mat8& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < 8; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < 8; ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

std::pair<int, std::optional<int>> parse_grid(const std::string& text) {
    static const std::regex pattern(R"((\d+)(?:x(\d+))?)");
    std::smatch match;
    if (!std::regex_match(text, match, pattern)) {
        throw ConfigError("--grid expects N or NxM, got '" + text + "'");
    }
    const int n = std::stoi(match[1].str());
    std::optional<int> m;
    if (match[2].matched) m = std::stoi(match[2].str());
    return {n, m};
}

SweepAxis parse_axis(const std::string& text) {
    // name:start:stop:count
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4) {
        throw ConfigError("--axis expects name:start:stop:count, got '" + text + "'");
    }
    SweepAxis axis;
    axis.param = parse_sweep_param(parts[0]);
    try {
        axis.start = std::stod(parts[1]);
        axis.stop = std::stod(parts[2]);
        axis.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw ConfigError("--axis has a non-numeric field: '" + text + "'");
    }
    return axis;
}

int cmd_steady(const Options& opt, std::ostream& out) {
    const ConfigValues values = load_values(opt);
    const std::optional<RawDriveParams> raw = to_drive_params(values);
    if (!raw) throw ConfigError("steady needs drive.* keys (config 'drive' section or --set)");
    const SystemParams fixed = to_system_params(values);
    const SteadyState ss = solve_steady_state(*raw, fixed);

    KeyValueTable table;
    auto complex_entry = [&](const std::string& name, cplx z) {
        table.add(name + "_re", z.real());
        table.add(name + "_im", z.imag());
        table.add(name + "_abs", std::abs(z));
    };
    complex_entry("alpha1", ss.alpha1);
    complex_entry("alpha2", ss.alpha2);
    complex_entry("xi", ss.xi);
    complex_entry("beta", ss.beta);
    table.add("delta1_eff_over_omegam", ss.delta1_eff / fixed.omega_m);
    table.add("delta2_eff_over_omegam", ss.delta2_eff / fixed.omega_m);
    table.add("G1_mhz", units::to_mhz(ss.g1_eff));
    table.add("G2_mhz", units::to_mhz(ss.g2_eff));
    table.add("residual", ss.residual_norm);
    table.add("iterations", ss.iterations);
    with_output(opt, out, [&](std::ostream& os) { table.write(os, opt.format); });
    return kExitOk;
}

int cmd_matrix(const Options& opt, std::ostream& out) {
    const SystemParams p = to_system_params(load_values(opt));
    const double n_th = thermal_occupation(p.omega_m, p.temperature);
    const DriftMatrix a = build_drift(p);
    const DiffusionMatrix d = build_diffusion(p, n_th);
    std::optional<CovarianceMatrix> cm;
    if (opt.with_cm) {
        const StabilityVerdict verdict = assess_stability(a, default_margin(p));
        cm = solve_lyapunov(a, d, verdict);
    }
    with_output(opt, out, [&](std::ostream& os) {
        if (opt.format == "json") {
            nlohmann::ordered_json doc;
            doc["A"] = matrix_json(a.m);
            doc["D"] = matrix_json(d.m);
            if (cm) doc["V"] = matrix_json(cm->m);
            os << doc.dump() << '\n';
            return;
        }
        write_matrix_csv(os, "A", a.m);
        write_matrix_csv(os, "D", d.m);
        if (cm) write_matrix_csv(os, "V", cm->m);
    });
    return kExitOk;
}

int cmd_measure(const Options& opt, std::ostream& out) {
    const ConfigValues values = load_values(opt);
    const UnstablePolicy policy = parse_policy(opt.unstable);
    const CorrelationReport report = analyze(to_system_params(values));
    if (!report.stability.stable && policy == UnstablePolicy::error) {
        throw UnstableDrift("drift matrix is unstable at the configured point (max Re eig = " +
                            full_precision(report.stability.max_real_part) + ")");
    }

    KeyValueTable table;
    echo_params(table, values);
    table.add("n_th", report.n_th);
    table.add("stable", report.stability.stable ? 1.0 : 0.0);
    table.add("max_real_part", report.stability.max_real_part);
    table.add("spectral_margin", report.stability.spectral_margin);

    const PointMeasures* m = report.measures ? &*report.measures : nullptr;
    auto field = [&](auto getter) -> std::optional<double> {
        if (!m) return std::nullopt;
        return getter(*m);
    };
    for (std::size_t k = 0; k < kCanonicalPairs.size(); ++k) {
        table.add("EN_" + pair_label(kCanonicalPairs[k]),
                  field([k](const PointMeasures& pm) { return pm.e_n[k]; }));
    }
    for (std::size_t k = 0; k < kCanonicalPairs.size(); ++k) {
        table.add("DG_" + pair_label(kCanonicalPairs[k]),
                  field([k](const PointMeasures& pm) { return pm.d_g[k]; }));
    }
    for (Partition part : kPartitions) {
        const auto i = static_cast<std::size_t>(part);
        const std::string label = partition_label(ModeTriple{}, part);
        table.add("Rtau_" + label, field([i](const PointMeasures& pm) { return pm.r_tau.reported[i]; }));
        table.add("Rtau_raw_" + label, field([i](const PointMeasures& pm) { return pm.r_tau.raw[i]; }));
    }
    table.add("Rtau_min", field([](const PointMeasures& pm) { return pm.r_tau.r_tau_min; }));
    table.add("lyapunov_residual", field([](const PointMeasures& pm) { return pm.cov.residual_norm; }));
    table.add("uncertainty_min_eig",
              field([](const PointMeasures& pm) { return pm.uncertainty_min_eig; }));
    with_output(opt, out, [&](std::ostream& os) { table.write(os, opt.format); });
    return kExitOk;
}

int write_sweep(const Options& opt, SweepSpec spec, std::ostream& out, std::ostream& err) {
    spec.policy = parse_policy(opt.unstable);
    if (!opt.grid.empty()) {
        const auto [n, m] = parse_grid(opt.grid);
        apply_grid(spec, n, m);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(spec, opt.workers);
    if (verbose()) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        err << "optocorr: " << result.rows.size() << " rows in " << secs << " s ("
            << opt.workers << " workers)\n";
    }
    with_output(opt, out, [&](std::ostream& os) {
        if (opt.format == "json") {
            write_jsonl(os, result);
        } else {
            write_csv(os, result);
        }
    });
    return kExitOk;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
    if (opt.axes.empty() || opt.axes.size() > 2) {
        throw ConfigError("sweep needs one or two --axis name:start:stop:count");
    }
    SweepSpec spec;
    spec.base = to_system_params(load_values(opt));
    spec.axis1 = parse_axis(opt.axes[0]);
    if (opt.axes.size() == 2) spec.axis2 = parse_axis(opt.axes[1]);
    for (const std::string& m : opt.measures) spec.measures.push_back(parse_measure(m));
    return write_sweep(opt, spec, out, err);
}

int cmd_figure(const Options& opt, std::ostream& out, std::ostream& err) {
    const SystemParams base = to_system_params(load_values(opt));
    return write_sweep(opt, figure_preset(opt.figure_id, base), out, err);
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config, "JSON parameter file (default: reference point)");
    cmd->add_option("--out", opt.out, "output file (default: stdout)");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--set", opt.sets, "override a config key, key=value (repeatable)");
}

void add_sweep_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--grid", opt.grid, "grid points per axis, N or NxM");
    cmd->add_option("--unstable", opt.unstable, "unstable-point policy")
        ->check(CLI::IsMember({"skip", "missing", "error"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"optocorr: steady states, stability and Gaussian correlations of a "
                 "two-cavity atom-optomechanical system",
                 "optocorr"};
    app.require_subcommand(1);
    Options opt;

    auto* steady = app.add_subcommand("steady", "solve the mean-field steady state");
    add_common(steady, opt);

    auto* matrix = app.add_subcommand("matrix", "dump drift and diffusion matrices");
    add_common(matrix, opt);
    matrix->add_flag("--with-cm", opt.with_cm, "also dump the steady-state covariance matrix");

    auto* measure = app.add_subcommand("measure", "correlation report for one point");
    add_common(measure, opt);
    measure->add_option("--unstable", opt.unstable, "unstable-point policy")
        ->check(CLI::IsMember({"skip", "missing", "error"}));

    auto* sweep = app.add_subcommand("sweep", "evaluate measures over a 1-D or 2-D grid");
    add_common(sweep, opt);
    add_sweep_options(sweep, opt);
    sweep->add_option("--axis", opt.axes, "name:start:stop:count (once or twice)")->required();
    sweep->add_option("--measures", opt.measures, "comma-separated measures")
        ->delimiter(',')
        ->required();

    auto* figure = app.add_subcommand("figure", "run a figure preset");
    add_common(figure, opt);
    add_sweep_options(figure, opt);
    figure->add_option("id", opt.figure_id, "preset id (fig2 ... fig10)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "optocorr: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (steady->parsed()) return cmd_steady(opt, out);
        if (matrix->parsed()) return cmd_matrix(opt, out);
        if (measure->parsed()) return cmd_measure(opt, out);
        if (sweep->parsed()) return cmd_sweep(opt, out, err);
        if (figure->parsed()) return cmd_figure(opt, out, err);
    } catch (const ConfigError& e) {
        err << "optocorr: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "optocorr: invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "optocorr: numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const IoError& e) {
        err << "optocorr: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace optocorr
