#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optocorr/core.hpp"

namespace optocorr {

inline constexpr std::string_view kVersion = "0.1.0";

/// Parameters that can be swept. Axis values are given in config units:
/// phi in rad; delta_at and delta_eff_common as ratios to omega_m;
/// G1, G2, Jac, Jab and f in MHz (the omega/2pi convention); T in kelvin.
enum class SweepParam { phi, delta_at, delta_eff_common, G1, G2, Jac, Jab, T, f };

std::string_view param_name(SweepParam param);
SweepParam parse_sweep_param(std::string_view name);

/// Writes one axis value (config units) into p.
void apply_axis_value(SystemParams& p, SweepParam param, double value);

enum class Measure { EN_c2a, EN_ab, EN_c2b, DG_c2a, DG_ab, DG_c2b, Rtau_min, stability };

std::string_view measure_name(Measure m);
Measure parse_measure(std::string_view name);

enum class UnstablePolicy { missing, skip, error };

std::string_view policy_name(UnstablePolicy policy);
UnstablePolicy parse_policy(std::string_view name);

/// Inclusive linear grid.
struct SweepAxis {
    SweepParam param = SweepParam::phi;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;

    std::vector<double> values() const;
};

struct SweepSpec {
    SystemParams base;
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    std::vector<Measure> measures;
    UnstablePolicy policy = UnstablePolicy::missing;
};

/// Throws ConfigError (counts < 2, start == stop, empty measure list) or
/// ParameterError (invalid base parameters).
void validate(const SweepSpec& spec);

struct SweepRow {
    double axis1 = 0.0;
    std::optional<double> axis2;
    bool stable = false;
    std::vector<std::optional<double>> values;  // one per output measure column
    std::string error;
};

struct SweepResult {
    std::string version;
    std::string config_hash;
    std::vector<std::string> columns;  // axes, "stable", measures, "errors"
    std::vector<SweepRow> rows;        // axis1 outer, axis2 inner
};

/// FNV-1a 64-bit hash of a canonical text rendering of the spec, as hex.
std::string spec_hash(const SweepSpec& spec);

/// Evaluates every grid point independently. Output order is the grid
/// order whatever the worker count. Under UnstablePolicy::error the first
/// failing point (in grid order) is rethrown.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

/// Header `# optocorr v<version> config=<hash>`, column line, rows.
/// Floats at 12 significant digits, missing values as empty fields.
void write_csv(std::ostream& os, const SweepResult& result);

/// JSON lines: a header object, then one object per row (missing -> null).
void write_jsonl(std::ostream& os, const SweepResult& result);

/// %.12g rendering used by both output formats.
std::string format_value(double x);

std::vector<std::string> figure_ids();

/// Sweep behind a figure of the results section, e.g. "fig2", "fig5c".
/// Preset-specific settings (fig7d's Delta_at = -1.5 omega_m) are applied
/// on top of `base`. Throws ConfigError for an unknown id.
SweepSpec figure_preset(std::string_view id, const SystemParams& base = reference_params());

/// Overrides the grid resolution: axis1 gets n points, axis2 (if any)
/// gets m points when m is given.
void apply_grid(SweepSpec& spec, int n, std::optional<int> m);

}  // namespace optocorr
