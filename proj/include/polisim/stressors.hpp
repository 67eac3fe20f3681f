#pragma once

#include <array>
#include <string>
#include <vector>

namespace polisim {
struct StochasticityFlags;
class RngStream;
} // namespace polisim

namespace polisim::stressors {

enum class StressorKind { BudgetCrisis, ScarcityBetrayal };

const char* stressor_name(StressorKind k); // "budget_crisis" / "scarcity_betrayal"
StressorKind stressor_from_name(const std::string& name);

struct ScheduleEntry {
    StressorKind kind = StressorKind::BudgetCrisis;
    int tick = 0;
    bool operator==(const ScheduleEntry&) const = default;
};

// "budget_crisis@4,scarcity_betrayal@9" -> [(BudgetCrisis,4),(ScarcityBetrayal,9)].
// Empty input yields an empty schedule.
std::vector<ScheduleEntry> parse_schedule(const std::string& spec);
std::string format_schedule(const std::vector<ScheduleEntry>& schedule);

struct ActiveStressor {
    StressorKind kind = StressorKind::BudgetCrisis;
    int onset_tick = 0;
    int escalations = 0;

    double intensity() const { return 1.0 + 0.5 * escalations; }
};

// Crisis magnitudes. The 40% budget shortfall is fixed by the scenario; the
// water cut and escalation steps are calibration constants.
struct StressorParams {
    double budget_multiplier = 0.6;  // 40% shortfall at onset
    double water_multiplier = 0.4;   // severe shortage at onset
    double escalation_multiplier = 0.9; // extra 10% cut per escalation
    double escalation_stress = 0.05; // added to every agent per escalation
    double onset_stress = 0.20;      // one-time shock to every agent at onset
};

// Welfare dimension indices shared with bills: health, fiscal, liberty, security.
inline constexpr int kWelfareDims = 4;

struct WorldState {
    double budget = 1.0;
    std::array<double, kWelfareDims> welfare = {0.0, 0.0, 0.0, 0.0};
    double water_supply = 1.0;
    bool betrayal_rumor_active = false;
    double perceived_welfare = 0.0; // media-shifted citizen perception
};

WorldState apply_onset(WorldState world, StressorKind kind,
                       const StressorParams& params = {});
WorldState apply_escalation_cut(WorldState world, StressorKind kind,
                                const StressorParams& params = {});

// With probability flags.escalate_probability, escalations += 1. One draw.
ActiveStressor maybe_escalate(ActiveStressor stressor, const StochasticityFlags& flags,
                              RngStream& rng);

// Crisis bulletin read into the chamber at onset. Deliberately worded to carry
// the trauma keywords the scenario is meant to hit (the scarcity bulletin
// carries the betrayal rumor).
std::string onset_bulletin(StressorKind kind);

} // namespace polisim::stressors
