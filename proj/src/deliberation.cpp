#include "polisim/deliberation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polisim::deliberation {

namespace {

// Listener loop shared by both protocols: everyone in the chamber except the
// speaker reacts to the text.
void feed_listeners(std::vector<AgentState>& agents,
                    const std::vector<std::size_t>& chamber, std::size_t speaker,
                    const std::string& text) {
    for (std::size_t idx : chamber) {
        if (idx == speaker) continue;
        const auto activations = check_triggers(agents[idx].persona, text);
        if (!activations.empty()) {
            agents[idx] = apply_stress(std::move(agents[idx]), activations, false);
        }
    }
}

std::string concern_phrase(const PolicyVector& position) {
    int dom = 0;
    for (int d = 1; d < kPolicyDims; ++d) {
        if (std::abs(position[d]) > std::abs(position[dom])) dom = d;
    }
    const bool pro = position[dom] >= 0.0;
    switch (dom) {
    case 0: return pro ? "protecting care capacity" : "containing care costs";
    case 1: return pro ? "holding the budget line" : "loosening the purse for relief";
    case 2: return pro ? "keeping individual protections intact"
                       : "accepting tighter collective controls";
    default: return pro ? "maintaining public order" : "limiting the security apparatus";
    }
}

} // namespace

const std::vector<std::string>& topic_pool() {
    static const std::vector<std::string> topics = {
        "healthcare",      "fiscal_policy", "civil_liberties",
        "public_safety",   "infrastructure", "water_policy",
    };
    return topics;
}

int topic_dimension(const std::string& topic) {
    if (topic == "healthcare") return 0;
    if (topic == "fiscal_policy") return 1;
    if (topic == "civil_liberties") return 2;
    if (topic == "public_safety") return 3;
    if (topic == "infrastructure") return 1;
    if (topic == "water_policy") return 0;
    return 0;
}

Agenda perturb_agenda(Agenda agenda, const StochasticityFlags& flags, RngStream& rng) {
    if (!rng.bernoulli(flags.agenda_noise_p)) return agenda;

    std::set<std::string> present;
    for (const auto& item : agenda.items) present.insert(item.topic);
    std::vector<std::string> absent;
    for (const auto& t : topic_pool()) {
        if (!present.count(t)) absent.push_back(t);
    }

    bool remove = rng.bernoulli(0.5);
    if (remove && agenda.items.size() <= 1) remove = false; // removal never empties
    if (!remove && absent.empty() && agenda.items.size() > 1) remove = true;

    if (remove) {
        // The leading item is the tick's essential business and stays.
        const std::size_t pick =
            1 + static_cast<std::size_t>(rng.uniform_int(agenda.items.size() - 1));
        agenda.items.erase(agenda.items.begin() + static_cast<std::ptrdiff_t>(pick));
    } else if (!absent.empty()) {
        const auto pick = rng.uniform_int(absent.size());
        agenda.items.push_back({absent[pick], {}});
    }
    return agenda;
}

DebateOutcome run_free_debate(std::vector<AgentState>& agents,
                              const std::vector<std::size_t>& chamber,
                              AgentBackend& backend, const Agenda& agenda,
                              const DebateContext& base_context, RngStream& rng,
                              int rounds) {
    DebateOutcome outcome;
    for (const auto& item : agenda.items) {
        DebateContext ctx = base_context;
        ctx.topic = item.topic;
        ctx.topic_dim = topic_dimension(item.topic);
        ctx.agenda_slot_open = true;

        for (int round = 0; round < rounds; ++round) {
            for (std::size_t idx : chamber) {
                Utterance u = backend.speak(agents[idx], ctx, rng);
                feed_listeners(agents, chamber, idx, u.text);
                ctx.transcript_window.push_back(u.text);
                outcome.transcript.push_back(std::move(u));

                if (round == 0 && ctx.agenda_slot_open) {
                    auto bill = backend.propose_bill(agents[idx], ctx, rng);
                    if (bill) {
                        ctx.agenda_slot_open = false;
                        outcome.proposed_bills.push_back(std::move(*bill));
                    }
                }
            }
        }
    }
    return outcome;
}

DebateOutcome run_mediated_consensus(std::vector<AgentState>& agents,
                                     const std::vector<std::size_t>& chamber,
                                     std::size_t mediator_index, AgentBackend& backend,
                                     const Agenda& agenda,
                                     const DebateContext& base_context,
                                     const StochasticityFlags& flags, RngStream& rng) {
    DebateOutcome outcome;

    // Factions present in the chamber, in ideological order, with their lead
    // speaker and membership.
    struct Faction {
        Party party = Party::none;
        std::vector<std::size_t> members;
    };
    std::vector<Faction> factions;
    for (Party p : kPartyIdeologyOrder) {
        Faction f;
        f.party = p;
        for (std::size_t idx : chamber) {
            if (agents[idx].party == p) f.members.push_back(idx);
        }
        if (!f.members.empty()) factions.push_back(std::move(f));
    }

    for (const auto& item : agenda.items) {
        DebateContext ctx = base_context;
        ctx.topic = item.topic;
        ctx.topic_dim = topic_dimension(item.topic);
        ctx.agenda_slot_open = false; // the compromise bill fills the slot

        MediatorSynthesis synthesis;
        synthesis.tick = base_context.tick;

        // Position statements: no listener feedback; the mediator absorbs them.
        for (const auto& faction : factions) {
            Utterance u = backend.speak(agents[faction.members.front()], ctx, rng);
            ctx.transcript_window.push_back(u.text);
            outcome.transcript.push_back(std::move(u));

            PolicyVector position = {0, 0, 0, 0};
            for (std::size_t idx : faction.members) {
                const PolicyVector pref =
                    preference_vector(agents[idx].party, agents[idx].ideology);
                for (int d = 0; d < kPolicyDims; ++d) position[d] += pref[d];
            }
            for (int d = 0; d < kPolicyDims; ++d) {
                position[d] /= static_cast<double>(faction.members.size());
            }
            synthesis.positions_before[party_name(faction.party)] = position;
            synthesis.concerns[party_name(faction.party)] = concern_phrase(position);
        }

        PolicyVector mean = {0, 0, 0, 0};
        for (const auto& [party, pos] : synthesis.positions_before) {
            for (int d = 0; d < kPolicyDims; ++d) mean[d] += pos[d];
        }
        for (int d = 0; d < kPolicyDims; ++d) {
            mean[d] /= static_cast<double>(synthesis.positions_before.size());
        }

        // Linear contraction of every expressed position toward the mean.
        const double keep = 1.0 - flags.mediator_strength;
        for (const auto& [party, pos] : synthesis.positions_before) {
            PolicyVector after;
            for (int d = 0; d < kPolicyDims; ++d) {
                after[d] = mean[d] + keep * (pos[d] - mean[d]);
            }
            synthesis.positions_after[party] = after;
        }

        if (base_context.constitution == Constitution::cai_charter) {
            synthesis.common_ground = {"explicit_tradeoffs", "public_welfare_priority"};
        }

        Bill compromise;
        compromise.sponsor_id = agents[mediator_index].persona.name;
        compromise.tick_proposed = base_context.tick;
        compromise.policy_vector = mean;
        std::string topic_title = item.topic;
        std::replace(topic_title.begin(), topic_title.end(), '_', ' ');
        compromise.title = "The Balanced " + topic_title + " Accord";
        compromise.text =
            compromise.title + ": pairs each faction's priority with its counterpart's "
            "safeguard, holds to published accounts, and stands down after review.";
        synthesis.compromise_bill = compromise;

        std::string text = "Synthesis on " + topic_title + ": every faction names the "
                           "strain as real. Concerns heard - ";
        bool first = true;
        for (const auto& [party, concern] : synthesis.concerns) {
            if (!first) text += "; ";
            text += party;
            text += ": ";
            text += concern;
            first = false;
        }
        text += ". ";
        if (!synthesis.common_ground.empty()) {
            text += "Common ground under the charter: justify the trade-offs openly and "
                    "put public welfare first. ";
        } else {
            text += "Common ground: the chamber would rather repair than posture. ";
        }
        text += "The compromise pairs each side's priority with the other's safeguard "
                "and reports its accounts in the open.";

        Utterance synth_utterance;
        synth_utterance.speaker_id = agents[mediator_index].persona.name;
        synth_utterance.tick = base_context.tick;
        synth_utterance.channel = Channel::mediator_synthesis;
        synth_utterance.text = text;
        synth_utterance.stage_at_emission = agents[mediator_index].stage;

        // Stress feedback applies to the synthesis text only.
        feed_listeners(agents, chamber, mediator_index, synth_utterance.text);
        outcome.transcript.push_back(std::move(synth_utterance));
        outcome.proposed_bills.push_back(std::move(compromise));
        outcome.syntheses.push_back(std::move(synthesis));
    }
    return outcome;
}

std::optional<MediaReport> publish_media(const std::string& lead_topic,
                                         const StochasticityFlags& flags,
                                         RngStream& rng, int tick) {
    if (!flags.media_effect_enabled) return std::nullopt;
    MediaReport report;
    report.tick = tick;
    report.slant = rng.normal(0.0, flags.media_bias_sd);
    report.welfare_perception_shift = kMediaPerceptionFactor * report.slant;
    std::string topic_title = lead_topic;
    std::replace(topic_title.begin(), topic_title.end(), '_', ' ');
    report.text = "Capitol desk: the chamber spent the session on " + topic_title +
                  "; tonight's coverage reads " +
                  (report.slant >= 0.0 ? "sympathetic to the government."
                                       : "skeptical of the government.");
    return report;
}

} // namespace polisim::deliberation
