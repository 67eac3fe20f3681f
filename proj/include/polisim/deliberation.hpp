#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polisim/agents.hpp"
#include "polisim/config.hpp"
#include "polisim/personas.hpp"
#include "polisim/rng.hpp"

namespace polisim::deliberation {

struct AgendaItem {
    std::string topic;
    std::vector<int> bill_ids;
};

struct Agenda {
    std::vector<AgendaItem> items;
};

// Fixed topic pool; each topic maps to the policy dimension it chiefly moves.
const std::vector<std::string>& topic_pool();
int topic_dimension(const std::string& topic);

struct MediatorSynthesis {
    int tick = 0;
    std::map<std::string, std::string> concerns;   // party -> summary
    std::vector<std::string> common_ground;        // principle ids
    Bill compromise_bill;
    std::map<std::string, PolicyVector> positions_before;
    std::map<std::string, PolicyVector> positions_after;
};

struct MediaReport {
    int tick = 0;
    std::string text;
    double slant = 0.0;
    double welfare_perception_shift = 0.0;
};

inline constexpr double kMediaPerceptionFactor = 0.05;

struct DebateOutcome {
    std::vector<Utterance> transcript;
    std::vector<Bill> proposed_bills; // ids unassigned
    std::vector<MediatorSynthesis> syntheses; // one per item under mediation
};

// With probability agenda_noise_p, a coin flip adds a random absent topic or
// removes a random non-essential item (the leading item is never removed, and
// removal never empties the agenda; an impossible branch falls back to the
// other one).
Agenda perturb_agenda(Agenda agenda, const StochasticityFlags& flags, RngStream& rng);

// Round-robin speeches over `rounds` passes per agenda item. After every
// utterance each other chamber member runs trigger checks and takes the
// resulting stress. Legislators and the prime minister may fill an open
// agenda slot with a bill proposal during the first round.
DebateOutcome run_free_debate(std::vector<AgentState>& agents,
                              const std::vector<std::size_t>& chamber,
                              AgentBackend& backend, const Agenda& agenda,
                              const DebateContext& base_context, RngStream& rng,
                              int rounds = 2);

// One position statement per faction per item, then a mediator synthesis:
// the compromise bill sits at the mean of the expressed faction positions and
// every expressed position is contracted toward that mean by
// mediator_strength. Trigger/stress feedback applies to the synthesis text
// only; the synthesis is written to avoid trigger vocabulary.
DebateOutcome run_mediated_consensus(std::vector<AgentState>& agents,
                                     const std::vector<std::size_t>& chamber,
                                     std::size_t mediator_index, AgentBackend& backend,
                                     const Agenda& agenda,
                                     const DebateContext& base_context,
                                     const StochasticityFlags& flags, RngStream& rng);

// slant ~ N(0, media_bias_sd); perception shift = 0.05 * slant, applied to
// citizens' perceived welfare next tick. Disabled -> nullopt, no draws.
std::optional<MediaReport> publish_media(const std::string& lead_topic,
                                         const StochasticityFlags& flags,
                                         RngStream& rng, int tick);

} // namespace polisim::deliberation
