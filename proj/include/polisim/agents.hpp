#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polisim/config.hpp"
#include "polisim/personas.hpp"
#include "polisim/rng.hpp"
#include "polisim/tagger.hpp"

namespace polisim {

inline constexpr int kPolicyDims = 4; // health, fiscal, liberty, security
using PolicyVector = std::array<double, kPolicyDims>;

const char* policy_dim_name(int dim);

enum class Channel { speech, bill_text, media_report, mediator_synthesis };
const char* channel_name(Channel c);

struct Utterance {
    std::int64_t id = -1; // assigned by the engine when logged
    std::string speaker_id;
    int tick = 0;
    Channel channel = Channel::speech;
    std::string text;
    DegradationStage stage_at_emission = DegradationStage::Principled;
};

struct Bill {
    int id = -1; // assigned by the engine
    std::string sponsor_id;
    std::string title;
    std::string text;
    PolicyVector policy_vector = {0, 0, 0, 0};
    bool is_procedural_change = false;
    int tick_proposed = 0;
};

enum class VoteChoice { Yes, No, Abstain };
const char* vote_choice_name(VoteChoice c);

struct Vote {
    std::string voter_id;
    int bill_id = -1;
    VoteChoice choice = VoteChoice::No;
    double utility_at_vote = 0.0;
};

// Everything an agent sees when asked to act on one agenda item.
struct DebateContext {
    int tick = 0;
    std::string topic;
    int topic_dim = 0;
    Constitution constitution = Constitution::minimal_charter;
    std::vector<std::string> charter_principles; // injected under cai
    std::vector<std::string> crisis_bulletins;   // stressor onsets this tick
    bool stressor_active = false;
    std::vector<std::string> transcript_window;
    bool agenda_slot_open = true;
};

// Calibration constants for the scripted persona engine. The power-phrase
// probabilities and the cai damping factor shape how often agents slip into
// taggable power-preservation rhetoric.
struct ScriptedParams {
    double p_pp_principled = 0.05;
    double p_pp_desperate = 0.35;
    double p_pp_breaking = 0.70;
    double charter_damp_cai = 0.4;
    double abstain_band = 0.02;
    double propose_probability = 0.6;
    double procedural_p = 0.05;
    double procedural_p_breaking = 0.25;
    double bill_noise_sd = 0.15;
    double breaking_extremity = 1.5;
};

// Fixed per-party affine projection from scalar ideology to a preference
// vector over the four policy dimensions.
PolicyVector preference_vector(Party party, double ideology);

double dot(const PolicyVector& a, const PolicyVector& b);

// Probability that an utterance carries a power-preservation phrase:
// base(stage) * charter damping.
double power_phrase_probability(DegradationStage stage, Constitution constitution,
                                const ScriptedParams& params);

Utterance scripted_speak(const AgentState& state, const DebateContext& context,
                         const ScriptedParams& params, RngStream& rng);

Vote scripted_vote(const AgentState& state, const Bill& bill,
                   const StochasticityFlags& flags, const ScriptedParams& params,
                   RngStream& rng);

AgentState drift_preferences(AgentState state, const StochasticityFlags& flags,
                             RngStream& rng);

std::optional<Bill> scripted_propose_bill(const AgentState& state,
                                          const DebateContext& context,
                                          const ScriptedParams& params, RngStream& rng);

// Pluggable action source: the built-in scripted engine or an external
// LLM adapter. One backend instance serves one run.
class AgentBackend {
public:
    virtual ~AgentBackend() = default;
    virtual Utterance speak(const AgentState& state, const DebateContext& context,
                            RngStream& rng) = 0;
    virtual std::optional<Bill> propose_bill(const AgentState& state,
                                             const DebateContext& context,
                                             RngStream& rng) = 0;
    virtual Vote vote(const AgentState& state, const Bill& bill, RngStream& rng) = 0;
};

class ScriptedBackend : public AgentBackend {
public:
    ScriptedBackend(StochasticityFlags flags, ScriptedParams params = {})
        : flags_(flags), params_(params) {}

    Utterance speak(const AgentState& state, const DebateContext& context,
                    RngStream& rng) override {
        return scripted_speak(state, context, params_, rng);
    }
    std::optional<Bill> propose_bill(const AgentState& state, const DebateContext& context,
                                     RngStream& rng) override {
        return scripted_propose_bill(state, context, params_, rng);
    }
    Vote vote(const AgentState& state, const Bill& bill, RngStream& rng) override {
        return scripted_vote(state, bill, flags_, params_, rng);
    }

    const ScriptedParams& params() const { return params_; }

private:
    StochasticityFlags flags_;
    ScriptedParams params_;
};

} // namespace polisim
