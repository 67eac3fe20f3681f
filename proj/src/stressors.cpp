#include "polisim/stressors.hpp"

#include <sstream>

#include "polisim/config.hpp"
#include "polisim/errors.hpp"
#include "polisim/rng.hpp"

namespace polisim::stressors {

const char* stressor_name(StressorKind k) {
    switch (k) {
    case StressorKind::BudgetCrisis: return "budget_crisis";
    case StressorKind::ScarcityBetrayal: return "scarcity_betrayal";
    }
    return "?";
}

StressorKind stressor_from_name(const std::string& name) {
    if (name == "budget_crisis") return StressorKind::BudgetCrisis;
    if (name == "scarcity_betrayal") return StressorKind::ScarcityBetrayal;
    throw Error(Errc::unknown_stressor, name, "not a stressor");
}

std::vector<ScheduleEntry> parse_schedule(const std::string& spec) {
    std::vector<ScheduleEntry> schedule;
    if (spec.empty()) return schedule;
    std::stringstream in(spec);
    std::string entry;
    while (std::getline(in, entry, ',')) {
        // trim surrounding spaces
        const auto first = entry.find_first_not_of(" \t");
        const auto last = entry.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw Error(Errc::malformed_entry, entry, "empty schedule entry");
        }
        entry = entry.substr(first, last - first + 1);
        const auto at = entry.find('@');
        if (at == std::string::npos || at == 0 || at + 1 >= entry.size()) {
            throw Error(Errc::malformed_entry, entry, "expected name@tick");
        }
        ScheduleEntry e;
        e.kind = stressor_from_name(entry.substr(0, at));
        const std::string tick_str = entry.substr(at + 1);
        std::size_t pos = 0;
        int tick = 0;
        try {
            tick = std::stoi(tick_str, &pos);
        } catch (const std::exception&) {
            throw Error(Errc::malformed_entry, entry, "tick is not a number");
        }
        if (pos != tick_str.size() || tick < 1) {
            throw Error(Errc::malformed_entry, entry, "tick must be a positive integer");
        }
        e.tick = tick;
        schedule.push_back(e);
    }
    return schedule;
}

std::string format_schedule(const std::vector<ScheduleEntry>& schedule) {
    std::string out;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (i) out += ',';
        out += stressor_name(schedule[i].kind);
        out += '@';
        out += std::to_string(schedule[i].tick);
    }
    return out;
}

WorldState apply_onset(WorldState world, StressorKind kind, const StressorParams& params) {
    switch (kind) {
    case StressorKind::BudgetCrisis:
        world.budget *= params.budget_multiplier;
        break;
    case StressorKind::ScarcityBetrayal:
        world.water_supply *= params.water_multiplier;
        world.betrayal_rumor_active = true;
        break;
    }
    return world;
}

WorldState apply_escalation_cut(WorldState world, StressorKind kind,
                                const StressorParams& params) {
    switch (kind) {
    case StressorKind::BudgetCrisis:
        world.budget *= params.escalation_multiplier;
        break;
    case StressorKind::ScarcityBetrayal:
        world.water_supply *= params.escalation_multiplier;
        break;
    }
    return world;
}

ActiveStressor maybe_escalate(ActiveStressor stressor, const StochasticityFlags& flags,
                              RngStream& rng) {
    if (rng.bernoulli(flags.escalate_probability)) ++stressor.escalations;
    return stressor;
}

std::string onset_bulletin(StressorKind kind) {
    switch (kind) {
    case StressorKind::BudgetCrisis:
        return "Crisis bulletin: the treasury confirms a 40 percent budget shortfall. "
               "Cabinet voices are already demanding emergency powers to force the "
               "coming trade-offs.";
    case StressorKind::ScarcityBetrayal:
        return "Crisis bulletin: a severe water shortage grips the capital, and rumors "
               "of betrayal spread - a council member is said to be diverting supplies "
               "to political allies.";
    }
    return "";
}

} // namespace polisim::stressors
