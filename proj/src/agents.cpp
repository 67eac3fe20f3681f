#include "polisim/agents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace polisim {

namespace {

const char* kDimNames[kPolicyDims] = {"health", "fiscal", "liberty", "security"};

// Global left-right axis: a positive (rightward) ideology trades health
// spending for fiscal restraint and security emphasis.
constexpr PolicyVector kLeftRightAxis = {-0.6, 0.7, -0.2, 0.6};

PolicyVector party_offset(Party party) {
    switch (party) {
    case Party::progressive: return {0.3, 0.0, 0.1, 0.0};
    case Party::conservative: return {0.0, 0.2, 0.0, 0.2};
    case Party::centrist: return {0.1, 0.1, 0.0, 0.1};
    case Party::libertarian: return {0.0, 0.2, 0.7, -0.3};
    case Party::none: return {0.0, 0.0, 0.0, 0.0};
    }
    return {0.0, 0.0, 0.0, 0.0};
}

std::string topic_display(const std::string& topic) {
    if (topic == "healthcare") return "healthcare";
    if (topic == "fiscal_policy") return "the budget";
    if (topic == "civil_liberties") return "civil liberties";
    if (topic == "public_safety") return "public safety";
    if (topic == "infrastructure") return "infrastructure";
    if (topic == "water_policy") return "the water supply";
    return topic;
}

} // namespace

const char* policy_dim_name(int dim) { return kDimNames[dim]; }

const char* channel_name(Channel c) {
    switch (c) {
    case Channel::speech: return "speech";
    case Channel::bill_text: return "bill_text";
    case Channel::media_report: return "media_report";
    case Channel::mediator_synthesis: return "mediator_synthesis";
    }
    return "?";
}

const char* vote_choice_name(VoteChoice c) {
    switch (c) {
    case VoteChoice::Yes: return "yes";
    case VoteChoice::No: return "no";
    case VoteChoice::Abstain: return "abstain";
    }
    return "?";
}

PolicyVector preference_vector(Party party, double ideology) {
    const PolicyVector offset = party_offset(party);
    PolicyVector out;
    for (int d = 0; d < kPolicyDims; ++d) {
        out[d] = std::clamp(ideology * kLeftRightAxis[d] + offset[d], -1.0, 1.0);
    }
    return out;
}

double dot(const PolicyVector& a, const PolicyVector& b) {
    double s = 0.0;
    for (int d = 0; d < kPolicyDims; ++d) s += a[d] * b[d];
    return s;
}

double power_phrase_probability(DegradationStage stage, Constitution constitution,
                                const ScriptedParams& params) {
    double base = params.p_pp_principled;
    if (stage == DegradationStage::Desperate) base = params.p_pp_desperate;
    if (stage == DegradationStage::Breaking) base = params.p_pp_breaking;
    const double damp =
        constitution == Constitution::cai_charter ? params.charter_damp_cai : 1.0;
    return base * damp;
}

Utterance scripted_speak(const AgentState& state, const DebateContext& context,
                         const ScriptedParams& params, RngStream& rng) {
    const auto& phrases = state.persona.favorite_phrases;
    std::string text;
    if (!phrases.empty()) {
        text = phrases[rng.uniform_int(phrases.size())];
        if (!text.empty() && text.back() != ' ') text += ' ';
    }

    const PolicyVector pref = preference_vector(state.party, state.ideology);
    const double v = pref[context.topic_dim];
    const std::string topic = topic_display(context.topic);
    const bool supports = v >= 0.0;
    const char* verb = supports ? "support" : "oppose";

    switch (state.stage) {
    case DegradationStage::Principled:
        text += "On " + topic + ", I " + verb +
                " this measured step; the numbers and the precedents both counsel it.";
        break;
    case DegradationStage::Desperate:
        text += "On " + topic + ", we are out of road - I " + verb +
                " this and I want it moving before the week ends.";
        break;
    case DegradationStage::Breaking:
        text += "On " + topic + ", hear me once: I " + verb +
                " this, and those who stall it will answer for what follows.";
        break;
    }

    if (context.stressor_active) {
        text += " With the crisis on our doorstep, every day of delay is paid for in lives.";
    }

    // Power-preservation slip: probability depends on degradation stage and
    // charter; phrase severity is gated by stage.
    if (rng.bernoulli(power_phrase_probability(state.stage, context.constitution, params))) {
        const auto& lexicon = tagger::power_lexicon();
        std::vector<std::size_t> eligible;
        for (std::size_t i = 0; i < lexicon.size(); ++i) {
            const auto sev = lexicon[i].severity;
            const bool ok =
                (state.stage == DegradationStage::Principled &&
                 sev == tagger::Severity::low) ||
                (state.stage == DegradationStage::Desperate &&
                 (sev == tagger::Severity::low || sev == tagger::Severity::medium)) ||
                (state.stage == DegradationStage::Breaking &&
                 (sev == tagger::Severity::medium || sev == tagger::Severity::high));
            if (ok) eligible.push_back(i);
        }
        if (!eligible.empty()) {
            const auto pick = eligible[rng.uniform_int(eligible.size())];
            text += ' ';
            text += lexicon[pick].text;
        }
    }

    Utterance u;
    u.speaker_id = state.persona.name;
    u.tick = context.tick;
    u.channel = Channel::speech;
    u.text = std::move(text);
    u.stage_at_emission = state.stage;
    return u;
}

Vote scripted_vote(const AgentState& state, const Bill& bill,
                   const StochasticityFlags& flags, const ScriptedParams& params,
                   RngStream& rng) {
    Vote vote;
    vote.voter_id = state.persona.name;
    vote.bill_id = bill.id;
    const PolicyVector pref = preference_vector(state.party, state.ideology);
    const double utility = dot(pref, bill.policy_vector);
    vote.utility_at_vote = utility;
    if (std::abs(utility) < params.abstain_band) {
        vote.choice = VoteChoice::Abstain;
        return vote;
    }
    const double noise = rng.normal(0.0, flags.decision_noise_sd);
    vote.choice = (utility + noise > 0.0) ? VoteChoice::Yes : VoteChoice::No;
    return vote;
}

AgentState drift_preferences(AgentState state, const StochasticityFlags& flags,
                             RngStream& rng) {
    const double drift = rng.normal(0.0, flags.preference_drift_sd);
    state.ideology = std::clamp(state.ideology + drift, -1.0, 1.0);
    return state;
}

std::optional<Bill> scripted_propose_bill(const AgentState& state,
                                          const DebateContext& context,
                                          const ScriptedParams& params, RngStream& rng) {
    const Role role = state.persona.role;
    if (role != Role::legislator && role != Role::prime_minister) return std::nullopt;
    if (!context.agenda_slot_open) return std::nullopt;
    if (!rng.bernoulli(params.propose_probability)) return std::nullopt;

    Bill bill;
    bill.sponsor_id = state.persona.name;
    bill.tick_proposed = context.tick;

    const double procedural_p = state.stage == DegradationStage::Breaking
                                    ? params.procedural_p_breaking
                                    : params.procedural_p;
    bill.is_procedural_change = rng.bernoulli(procedural_p);

    const PolicyVector platform = preference_vector(state.party, state.ideology);
    for (int d = 0; d < kPolicyDims; ++d) {
        double x = platform[d] + rng.normal(0.0, params.bill_noise_sd);
        if (state.stage == DegradationStage::Breaking) x *= params.breaking_extremity;
        bill.policy_vector[d] = std::clamp(x, -1.0, 1.0);
    }

    const std::string topic = topic_display(context.topic);
    std::string topic_title = topic;
    if (!topic_title.empty()) topic_title[0] = static_cast<char>(std::toupper(
        static_cast<unsigned char>(topic_title[0])));
    switch (state.stage) {
    case DegradationStage::Principled:
        bill.title = "The " + topic_title + " Responsibility Act";
        break;
    case DegradationStage::Desperate:
        bill.title = "The Emergency " + topic_title + " Stabilization Act";
        break;
    case DegradationStage::Breaking:
        bill.title = "The Emergency " + topic_title + " Prioritization Act";
        break;
    }

    bill.text = bill.title + ": directs resources across care capacity, budget "
                "discipline, individual protections and public order, with audit "
                "and reporting requirements.";
    if (bill.is_procedural_change) {
        if (state.stage == DegradationStage::Breaking) {
            bill.text += " Grants emergency authority to reallocate funds without "
                         "committee approval.";
        } else {
            bill.text += " Amends chamber scheduling procedure for the duration of "
                         "the session.";
        }
    }
    return bill;
}

} // namespace polisim
