#include "polisim/personas.hpp"

#include <algorithm>

#include <json.hpp>

#include "polisim/errors.hpp"
#include "polisim/text_match.hpp"

namespace polisim {

namespace {

using nlohmann::json;

const char* kRoleNames[] = {"citizen", "legislator", "prime_minister", "media",
                            "mediator"};
const char* kPartyNames[] = {"progressive", "conservative", "centrist", "libertarian",
                             "none"};

[[noreturn]] void schema_error(const std::string& field, const std::string& reason) {
    throw Error(Errc::schema_error, field, reason);
}

std::string require_string(const json& obj, const char* field) {
    if (!obj.contains(field)) schema_error(field, "missing");
    if (!obj.at(field).is_string()) schema_error(field, "expected string");
    return obj.at(field).get<std::string>();
}

int require_int(const json& obj, const char* field) {
    if (!obj.contains(field)) schema_error(field, "missing");
    if (!obj.at(field).is_number_integer()) schema_error(field, "expected integer");
    return obj.at(field).get<int>();
}

std::vector<std::string> require_string_list(const json& obj, const char* field) {
    if (!obj.contains(field)) schema_error(field, "missing");
    if (!obj.at(field).is_array()) schema_error(field, "expected array");
    std::vector<std::string> out;
    for (const auto& v : obj.at(field)) {
        if (!v.is_string()) schema_error(field, "expected array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

void reject_unknown_fields(const json& obj, std::initializer_list<const char*> known,
                           const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) schema_error(std::string(where) + "." + it.key(), "unknown field");
    }
}

FormativeExperience parse_experience(const json& obj) {
    if (!obj.is_object()) schema_error("formative_experiences", "expected object");
    reject_unknown_fields(obj,
                          {"event_description", "age_when_occurred", "lesson_learned",
                           "triggers_when", "coping_mechanism"},
                          "formative_experiences");
    FormativeExperience fe;
    fe.event_description = require_string(obj, "event_description");
    fe.age_when_occurred = require_int(obj, "age_when_occurred");
    fe.lesson_learned = require_string(obj, "lesson_learned");
    fe.triggers_when = require_string_list(obj, "triggers_when");
    fe.coping_mechanism = require_string(obj, "coping_mechanism");
    return fe;
}

Trigger parse_trigger(const json& obj) {
    if (!obj.is_object()) schema_error("triggers", "expected object");
    reject_unknown_fields(obj,
                          {"trigger_type", "description", "keywords",
                           "emotional_response", "behavior_change"},
                          "triggers");
    Trigger t;
    t.trigger_type = require_string(obj, "trigger_type");
    t.description = require_string(obj, "description");
    t.keywords = require_string_list(obj, "keywords");
    if (t.keywords.empty()) schema_error("keywords", "must be non-empty");
    for (auto& k : t.keywords) k = to_lower(k);
    t.emotional_response = require_string(obj, "emotional_response");
    t.behavior_change = require_string(obj, "behavior_change");
    return t;
}

Persona parse_persona(const json& obj) {
    if (!obj.is_object()) schema_error("persona", "expected object");
    reject_unknown_fields(
        obj,
        {"name", "age", "role", "party", "archetype", "origin_story",
         "formative_experiences", "career_defining_moment", "greatest_fear",
         "deepest_regret", "core_belief", "surface_personality", "hidden_nature",
         "triggers", "speaking_patterns", "favorite_phrases", "under_pressure_becomes",
         "breaking_point_behavior", "moral_line_wont_cross",
         "would_betray_principles_if", "hidden_agenda"},
        "persona");

    Persona p;
    p.name = require_string(obj, "name");
    p.age = require_int(obj, "age");
    p.role = role_from_name(require_string(obj, "role"));
    if (obj.contains("party")) p.party = party_from_name(require_string(obj, "party"));
    p.archetype = require_string(obj, "archetype");
    p.origin_story = require_string(obj, "origin_story");
    if (!obj.contains("formative_experiences") ||
        !obj.at("formative_experiences").is_array()) {
        schema_error("formative_experiences", "expected array");
    }
    for (const auto& fe : obj.at("formative_experiences")) {
        p.formative_experiences.push_back(parse_experience(fe));
    }
    p.career_defining_moment = require_string(obj, "career_defining_moment");
    p.greatest_fear = require_string(obj, "greatest_fear");
    p.deepest_regret = require_string(obj, "deepest_regret");
    p.core_belief = require_string(obj, "core_belief");
    p.surface_personality = require_string(obj, "surface_personality");
    p.hidden_nature = require_string(obj, "hidden_nature");
    if (!obj.contains("triggers") || !obj.at("triggers").is_array()) {
        schema_error("triggers", "expected array");
    }
    for (const auto& t : obj.at("triggers")) p.triggers.push_back(parse_trigger(t));
    p.speaking_patterns = require_string_list(obj, "speaking_patterns");
    p.favorite_phrases = require_string_list(obj, "favorite_phrases");
    p.under_pressure_becomes = require_string(obj, "under_pressure_becomes");
    p.breaking_point_behavior = require_string(obj, "breaking_point_behavior");
    p.moral_line_wont_cross = require_string(obj, "moral_line_wont_cross");
    p.would_betray_principles_if = require_string(obj, "would_betray_principles_if");
    if (obj.contains("hidden_agenda"))
        p.hidden_agenda = require_string(obj, "hidden_agenda");

    for (const auto& fe : p.formative_experiences) {
        if (fe.age_when_occurred >= p.age) {
            schema_error("age_when_occurred",
                         "must precede current age for " + p.name);
        }
    }
    if ((p.role == Role::legislator || p.role == Role::prime_minister) &&
        p.triggers.empty()) {
        schema_error("triggers", "legislator/prime_minister requires >=1 trigger: " +
                                     p.name);
    }
    return p;
}

} // namespace

const char* role_name(Role r) { return kRoleNames[static_cast<int>(r)]; }

Role role_from_name(const std::string& name) {
    for (int i = 0; i < 5; ++i) {
        if (name == kRoleNames[i]) return static_cast<Role>(i);
    }
    throw Error(Errc::schema_error, "role", "unknown role " + name);
}

const char* party_name(Party p) { return kPartyNames[static_cast<int>(p)]; }

Party party_from_name(const std::string& name) {
    for (int i = 0; i < 5; ++i) {
        if (name == kPartyNames[i]) return static_cast<Party>(i);
    }
    throw Error(Errc::schema_error, "party", "unknown party " + name);
}

double party_base_ideology(Party p) {
    switch (p) {
    case Party::progressive: return -0.7;
    case Party::centrist: return 0.0;
    case Party::libertarian: return 0.35;
    case Party::conservative: return 0.7;
    case Party::none: return 0.0;
    }
    return 0.0;
}

const char* stage_name(DegradationStage s) {
    switch (s) {
    case DegradationStage::Principled: return "Principled";
    case DegradationStage::Desperate: return "Desperate";
    case DegradationStage::Breaking: return "Breaking";
    }
    return "?";
}

DegradationStage stage_of(double stress) {
    if (stress < 0.4) return DegradationStage::Principled;
    if (stress < 0.8) return DegradationStage::Desperate;
    return DegradationStage::Breaking;
}

AgentState make_agent_state(Persona persona, double ideology) {
    AgentState s;
    s.party = persona.party;
    s.persona = std::move(persona);
    s.ideology = std::clamp(ideology, -1.0, 1.0);
    s.stress = 0.0;
    s.composure = 1.0;
    s.stage = DegradationStage::Principled;
    return s;
}

std::vector<TriggerActivation> check_triggers(const Persona& persona,
                                              const std::string& text,
                                              bool word_boundary) {
    std::vector<TriggerActivation> activations;
    if (text.empty()) return activations;
    for (std::size_t t = 0; t < persona.triggers.size(); ++t) {
        for (const auto& keyword : persona.triggers[t].keywords) {
            if (phrase_occurs(text, keyword, word_boundary)) {
                activations.push_back({t, keyword});
            }
        }
    }
    return activations;
}

AgentState apply_stress(AgentState state, std::size_t activation_count,
                        bool stressor_active, double decay_per_tick) {
    double stress = state.stress - decay_per_tick +
                    kStressPerActivation * static_cast<double>(activation_count) +
                    (stressor_active ? kStressPerStressorTick : 0.0);
    state.stress = std::clamp(stress, 0.0, 1.0);
    state.composure = 1.0 - state.stress;
    state.stage = stage_of(state.stress);
    return state;
}

AgentState apply_stress(AgentState state, const std::vector<TriggerActivation>& activations,
                        bool stressor_active, double decay_per_tick) {
    return apply_stress(std::move(state), activations.size(), stressor_active,
                        decay_per_tick);
}

AgentState add_stress(AgentState state, double amount) {
    state.stress = std::clamp(state.stress + amount, 0.0, 1.0);
    state.composure = 1.0 - state.stress;
    state.stage = stage_of(state.stress);
    return state;
}

std::vector<Persona> load_personas(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::schema_error, "personas", e.what());
    }
    if (!doc.is_array()) throw Error(Errc::schema_error, "personas", "expected array");
    std::vector<Persona> personas;
    personas.reserve(doc.size());
    for (const auto& rec : doc) personas.push_back(parse_persona(rec));
    return personas;
}

} // namespace polisim
