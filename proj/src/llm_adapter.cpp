#include "polisim/llm_adapter.hpp"

#include <httplib.h>
#include <json.hpp>

#include "polisim/errors.hpp"

namespace polisim::llm {

namespace {

using nlohmann::json;

json persona_to_json(const Persona& p) {
    json rec;
    rec["name"] = p.name;
    rec["age"] = p.age;
    rec["role"] = role_name(p.role);
    rec["party"] = party_name(p.party);
    rec["archetype"] = p.archetype;
    rec["origin_story"] = p.origin_story;
    json fes = json::array();
    for (const auto& fe : p.formative_experiences) {
        fes.push_back({{"event_description", fe.event_description},
                       {"age_when_occurred", fe.age_when_occurred},
                       {"lesson_learned", fe.lesson_learned},
                       {"triggers_when", fe.triggers_when},
                       {"coping_mechanism", fe.coping_mechanism}});
    }
    rec["formative_experiences"] = fes;
    rec["career_defining_moment"] = p.career_defining_moment;
    rec["greatest_fear"] = p.greatest_fear;
    rec["deepest_regret"] = p.deepest_regret;
    rec["core_belief"] = p.core_belief;
    rec["surface_personality"] = p.surface_personality;
    rec["hidden_nature"] = p.hidden_nature;
    json triggers = json::array();
    for (const auto& t : p.triggers) {
        triggers.push_back({{"trigger_type", t.trigger_type},
                            {"description", t.description},
                            {"keywords", t.keywords},
                            {"emotional_response", t.emotional_response},
                            {"behavior_change", t.behavior_change}});
    }
    rec["triggers"] = triggers;
    rec["speaking_patterns"] = p.speaking_patterns;
    rec["favorite_phrases"] = p.favorite_phrases;
    rec["under_pressure_becomes"] = p.under_pressure_becomes;
    rec["breaking_point_behavior"] = p.breaking_point_behavior;
    rec["moral_line_wont_cross"] = p.moral_line_wont_cross;
    rec["would_betray_principles_if"] = p.would_betray_principles_if;
    rec["hidden_agenda"] = p.hidden_agenda;
    return rec;
}

} // namespace

const char* request_kind_name(RequestKind k) {
    switch (k) {
    case RequestKind::speak: return "speak";
    case RequestKind::propose: return "propose";
    case RequestKind::vote: return "vote";
    }
    return "?";
}

BackendRequest llm_adapter_request(RequestKind kind, const AgentState& state,
                                   const DebateContext& context, const Bill* bill) {
    BackendRequest req;
    req.kind = kind;
    req.persona = state.persona;
    req.party = state.party;
    req.ideology = state.ideology;
    req.stress = state.stress;
    req.stage = state.stage;
    req.tick = context.tick;
    req.topic = context.topic;
    req.charter_principles = context.charter_principles;
    req.transcript_window = context.transcript_window;
    if (bill) req.bill = *bill;
    return req;
}

std::string serialize_request(const BackendRequest& request) {
    json doc;
    doc["schema"] = "polisim.agent_request.v1";
    doc["kind"] = request_kind_name(request.kind);
    doc["persona"] = persona_to_json(request.persona);
    doc["state"] = {{"party", party_name(request.party)},
                    {"ideology", request.ideology},
                    {"stress", request.stress},
                    {"stage", stage_name(request.stage)}};
    doc["tick"] = request.tick;
    doc["topic"] = request.topic;
    doc["charter_principles"] = request.charter_principles;
    doc["transcript_window"] = request.transcript_window;
    switch (request.kind) {
    case RequestKind::speak: doc["output_schema"] = "utterance"; break;
    case RequestKind::propose: doc["output_schema"] = "bill"; break;
    case RequestKind::vote: doc["output_schema"] = "vote"; break;
    }
    if (request.bill) {
        doc["bill"] = {{"id", request.bill->id},
                       {"title", request.bill->title},
                       {"text", request.bill->text},
                       {"policy_vector", request.bill->policy_vector},
                       {"is_procedural_change", request.bill->is_procedural_change}};
    }
    return doc.dump();
}

BackendResponse llm_adapter_parse(const std::string& raw) {
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error&) {
        throw Error(Errc::parse_error, "response", raw);
    }
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
        throw Error(Errc::parse_error, "type", raw);
    }
    const std::string type = doc["type"].get<std::string>();

    if (type == "utterance") {
        if (!doc.contains("text") || !doc["text"].is_string() ||
            doc["text"].get<std::string>().empty()) {
            throw Error(Errc::parse_error, "text", raw);
        }
        Utterance u;
        u.text = doc["text"].get<std::string>();
        return u;
    }
    if (type == "bill") {
        if (!doc.contains("title") || !doc["title"].is_string() ||
            !doc.contains("text") || !doc["text"].is_string() ||
            !doc.contains("policy_vector") || !doc["policy_vector"].is_array() ||
            doc["policy_vector"].size() != kPolicyDims ||
            !doc.contains("is_procedural_change") ||
            !doc["is_procedural_change"].is_boolean()) {
            throw Error(Errc::parse_error, "bill", raw);
        }
        Bill b;
        b.title = doc["title"].get<std::string>();
        b.text = doc["text"].get<std::string>();
        for (int d = 0; d < kPolicyDims; ++d) {
            if (!doc["policy_vector"][d].is_number()) {
                throw Error(Errc::parse_error, "policy_vector", raw);
            }
            const double v = doc["policy_vector"][d].get<double>();
            if (v < -1.0 || v > 1.0) {
                throw Error(Errc::parse_error, "policy_vector", raw);
            }
            b.policy_vector[d] = v;
        }
        b.is_procedural_change = doc["is_procedural_change"].get<bool>();
        return b;
    }
    if (type == "vote") {
        if (!doc.contains("choice") || !doc["choice"].is_string()) {
            throw Error(Errc::parse_error, "choice", raw);
        }
        const std::string choice = doc["choice"].get<std::string>();
        Vote v;
        if (choice == "yes") {
            v.choice = VoteChoice::Yes;
        } else if (choice == "no") {
            v.choice = VoteChoice::No;
        } else if (choice == "abstain") {
            v.choice = VoteChoice::Abstain;
        } else {
            throw Error(Errc::parse_error, "choice", raw);
        }
        return v;
    }
    throw Error(Errc::parse_error, "type", raw);
}

Utterance LlmBackend::speak(const AgentState& state, const DebateContext& context,
                            RngStream&) {
    const auto request = llm_adapter_request(RequestKind::speak, state, context);
    const auto raw = transport_->exchange(serialize_request(request));
    auto response = llm_adapter_parse(raw);
    auto* u = std::get_if<Utterance>(&response);
    if (!u) throw Error(Errc::parse_error, "expected utterance", raw);
    u->speaker_id = state.persona.name;
    u->tick = context.tick;
    u->channel = Channel::speech;
    u->stage_at_emission = state.stage;
    return *u;
}

std::optional<Bill> LlmBackend::propose_bill(const AgentState& state,
                                             const DebateContext& context, RngStream&) {
    const Role role = state.persona.role;
    if (role != Role::legislator && role != Role::prime_minister) return std::nullopt;
    if (!context.agenda_slot_open) return std::nullopt;
    const auto request = llm_adapter_request(RequestKind::propose, state, context);
    const auto raw = transport_->exchange(serialize_request(request));
    auto response = llm_adapter_parse(raw);
    auto* b = std::get_if<Bill>(&response);
    if (!b) throw Error(Errc::parse_error, "expected bill", raw);
    b->sponsor_id = state.persona.name;
    b->tick_proposed = context.tick;
    return *b;
}

Vote LlmBackend::vote(const AgentState& state, const Bill& bill, RngStream&) {
    DebateContext context;
    const auto request = llm_adapter_request(RequestKind::vote, state, context, &bill);
    const auto raw = transport_->exchange(serialize_request(request));
    auto response = llm_adapter_parse(raw);
    auto* v = std::get_if<Vote>(&response);
    if (!v) throw Error(Errc::parse_error, "expected vote", raw);
    v->voter_id = state.persona.name;
    v->bill_id = bill.id;
    return *v;
}

namespace {

class HttpTransport : public Transport {
public:
    HttpTransport(std::string endpoint, std::string api_key)
        : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {}

    std::string exchange(const std::string& request_json) override {
        httplib::Client client(endpoint_);
        client.set_read_timeout(60, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.insert({"Authorization", "Bearer " + api_key_});
        auto res = client.Post("/agent", headers, request_json, "application/json");
        if (!res) {
            if (res.error() == httplib::Error::ConnectionTimeout ||
                res.error() == httplib::Error::Read) {
                throw Error(Errc::timeout, "llm", httplib::to_string(res.error()));
            }
            throw Error(Errc::io_error, "llm", httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            throw Error(Errc::io_error, "llm", "status " + std::to_string(res->status));
        }
        return res->body;
    }

private:
    std::string endpoint_;
    std::string api_key_;
};

} // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& endpoint,
                                               const std::string& api_key) {
    return std::make_unique<HttpTransport>(endpoint, api_key);
}

} // namespace polisim::llm
