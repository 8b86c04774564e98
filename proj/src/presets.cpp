#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "optocorr/errors.hpp"
#include "optocorr/sweep.hpp"

namespace optocorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kDefaultCount = 100;
constexpr int kPhaseCount = 201;  // puts phi = pi on the grid

using M = Measure;
using P = SweepParam;

const std::vector<Measure> kEntanglement = {M::EN_c2a, M::EN_ab, M::EN_c2b};
const std::vector<Measure> kDiscord = {M::DG_c2a, M::DG_ab, M::DG_c2b};

SweepAxis axis(P param, double start, double stop, int count = kDefaultCount) {
    return {param, start, stop, count};
}

SweepAxis detuning_at() { return axis(P::delta_at, -2.0, 0.0); }
SweepAxis temperature() { return axis(P::T, 0.0, 5.0); }
SweepAxis phase() { return axis(P::phi, 0.0, 2.0 * kPi, kPhaseCount); }
SweepAxis jab_family(int n = 3) { return axis(P::Jab, 1.0, static_cast<double>(n), n); }
SweepAxis f_family() { return axis(P::f, 1.0, 3.0, 3); }

SweepSpec make(const SystemParams& base, SweepAxis a1, std::optional<SweepAxis> a2, std::vector<Measure> measures) {
    SweepSpec spec;
    spec.base = base;
    spec.axis1 = a1;
    spec.axis2 = a2;
    spec.measures = std::move(measures);
    return spec;
}

const std::map<std::string, std::function<SweepSpec(const SystemParams&)>>& registry() {
    static const std::map<std::string, std::function<SweepSpec(const SystemParams&)>> presets = {
        // stability map over the two effective optomechanical couplings
        {"fig2", [](const SystemParams& b) { return make(b, axis(P::G1, 0.1, 5.0, 50), axis(P::G2, 0.1, 5.0, 50), {M::stability}); }},
        {"fig3", [](const SystemParams& b) { return make(b, detuning_at(), axis(P::delta_eff_common, 0.0, 2.0), kEntanglement); }},
        {"fig4", [](const SystemParams& b) { return make(b, axis(P::Jac, 0.0, 20.0), axis(P::Jab, 0.0, 3.0), kEntanglement); }},
        {"fig5", [](const SystemParams& b) {
             std::vector<Measure> m = kEntanglement;
             m.push_back(M::Rtau_min);
             return make(b, phase(), std::nullopt, m);
         }},
        {"fig5a", [](const SystemParams& b) { return make(b, detuning_at(), std::nullopt, kEntanglement); }},
        {"fig5b", [](const SystemParams& b) { return make(b, detuning_at(), axis(P::phi, 0.0, 1.5 * kPi, 4), {M::Rtau_min}); }},
        {"fig5c", [](const SystemParams& b) { return make(b, phase(), std::nullopt, kEntanglement); }},
        {"fig5d", [](const SystemParams& b) { return make(b, phase(), axis(P::Jac, 12.0, 14.0, 3), {M::Rtau_min}); }},
        {"fig6", [](const SystemParams& b) { return make(b, detuning_at(), temperature(), kEntanglement); }},
        {"fig7", [](const SystemParams& b) {
             std::vector<Measure> m = kEntanglement;
             m.push_back(M::Rtau_min);
             return make(b, temperature(), jab_family(), m);
         }},
        {"fig7a", [](const SystemParams& b) { return make(b, temperature(), std::nullopt, kEntanglement); }},
        {"fig7b", [](const SystemParams& b) { return make(b, temperature(), jab_family(), {M::EN_c2a}); }},
        {"fig7c", [](const SystemParams& b) { return make(b, temperature(), jab_family(), {M::EN_ab}); }},
        {"fig7d", [](const SystemParams& b) {
             SweepSpec s = make(b, temperature(), jab_family(), {M::EN_c2b});
             s.base.delta_at = -1.5 * s.base.omega_m;
             return s;
         }},
        {"fig7e", [](const SystemParams& b) { return make(b, temperature(), jab_family(2), {M::Rtau_min}); }},
        {"fig7f", [](const SystemParams& b) { return make(b, axis(P::f, 0.5, 5.0), jab_family(2), {M::Rtau_min}); }},
        {"fig8", [](const SystemParams& b) { return make(b, detuning_at(), temperature(), kDiscord); }},
        {"fig9", [](const SystemParams& b) { return make(b, detuning_at(), f_family(), kDiscord); }},
        {"fig9a", [](const SystemParams& b) { return make(b, detuning_at(), std::nullopt, kDiscord); }},
        {"fig9b", [](const SystemParams& b) { return make(b, detuning_at(), f_family(), {M::DG_c2a}); }},
        {"fig9c", [](const SystemParams& b) { return make(b, detuning_at(), f_family(), {M::DG_ab}); }},
        {"fig9d", [](const SystemParams& b) { return make(b, detuning_at(), f_family(), {M::DG_c2b}); }},
        {"fig10", [](const SystemParams& b) { return make(b, phase(), std::nullopt, kDiscord); }},
    };
    return presets;
}

}  // namespace

std::vector<std::string> figure_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, _] : registry()) ids.push_back(id);
    return ids;
}

SweepSpec figure_preset(std::string_view id, const SystemParams& base) {
    const auto& presets = registry();
    const auto it = presets.find(std::string(id));
    if (it == presets.end()) {
        throw ConfigError("unknown figure preset '" + std::string(id) + "'");
    }
    return it->second(base);
}

}  // namespace optocorr
