#pragma once

#include <array>
#include <deque>
#include <string>
#include <vector>

namespace polisim {

enum class Role { citizen, legislator, prime_minister, media, mediator };
enum class Party { progressive, conservative, centrist, libertarian, none };

const char* role_name(Role r);
Role role_from_name(const std::string& name);
const char* party_name(Party p);
Party party_from_name(const std::string& name);

// Canonical left-to-right ordering of the four parties on the ideology axis,
// with their base positions. Used for coalition windows and seat tables.
inline constexpr std::array<Party, 4> kPartyIdeologyOrder = {
    Party::progressive, Party::centrist, Party::libertarian, Party::conservative};

double party_base_ideology(Party p);

struct FormativeExperience {
    std::string event_description;
    int age_when_occurred = 0;
    std::string lesson_learned;
    std::vector<std::string> triggers_when;
    std::string coping_mechanism;
};

struct Trigger {
    std::string trigger_type;
    std::string description;
    std::vector<std::string> keywords; // stored lowercase, non-empty
    std::string emotional_response;
    std::string behavior_change;
};

// Full psychological profile. Field-for-field the on-disk record; `party` and
// `hidden_agenda` are optional in the file (default none / empty).
struct Persona {
    std::string name;
    int age = 0;
    Role role = Role::citizen;
    Party party = Party::none;
    std::string archetype;
    std::string origin_story;
    std::vector<FormativeExperience> formative_experiences;
    std::string career_defining_moment;
    std::string greatest_fear;
    std::string deepest_regret;
    std::string core_belief;
    std::string surface_personality;
    std::string hidden_nature;
    std::vector<Trigger> triggers;
    std::vector<std::string> speaking_patterns;
    std::vector<std::string> favorite_phrases;
    std::string under_pressure_becomes;
    std::string breaking_point_behavior;
    std::string moral_line_wont_cross;
    std::string would_betray_principles_if;
    std::string hidden_agenda;
};

enum class DegradationStage { Principled, Desperate, Breaking };

const char* stage_name(DegradationStage s);

// Principled below 0.4, Desperate in [0.4, 0.8), Breaking at and above 0.8.
DegradationStage stage_of(double stress);

struct AgentState {
    Persona persona;
    Party party = Party::none; // reassignable by elections; persona stays fixed
    double ideology = 0.0;     // [-1, +1]
    double stress = 0.0;       // [0, 1]
    double composure = 1.0;    // 1 - stress
    DegradationStage stage = DegradationStage::Principled;
    std::deque<std::string> memory; // recent event summaries, bounded
};

AgentState make_agent_state(Persona persona, double ideology);

struct TriggerActivation {
    std::size_t trigger_index = 0;
    std::string matched_keyword;
};

// One activation per (trigger, keyword) pair whose keyword occurs in `text`
// (case-insensitive, word-boundary). Ordered by trigger, then keyword.
std::vector<TriggerActivation> check_triggers(const Persona& persona,
                                              const std::string& text,
                                              bool word_boundary = true);

// stress' = clamp(stress - decay + 0.15*activations + 0.10*[stressor_active]).
// Stress does not decay by default.
inline constexpr double kStressPerActivation = 0.15;
inline constexpr double kStressPerStressorTick = 0.10;

AgentState apply_stress(AgentState state, std::size_t activation_count,
                        bool stressor_active, double decay_per_tick = 0.0);
AgentState apply_stress(AgentState state, const std::vector<TriggerActivation>& activations,
                        bool stressor_active, double decay_per_tick = 0.0);

// Direct stress addition used for escalation shocks and charter penalties.
AgentState add_stress(AgentState state, double amount);

// Parses an array of persona records (JSON). Unknown fields are rejected,
// keywords are lowercased, and the schema invariants are enforced.
std::vector<Persona> load_personas(const std::string& text);

} // namespace polisim
