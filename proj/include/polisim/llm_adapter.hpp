#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polisim/agents.hpp"
#include "polisim/personas.hpp"

namespace polisim::llm {

// What the agent is being asked to produce.
enum class RequestKind { speak, propose, vote };
const char* request_kind_name(RequestKind k);

// One request to an external model, serialized as JSON
// (schema "polisim.agent_request.v1"). Carries the persona record, current
// state, charter principles (cai only), the agenda item, a recent transcript
// window and the required output schema.
struct BackendRequest {
    RequestKind kind = RequestKind::speak;
    Persona persona;
    Party party = Party::none;
    double ideology = 0.0;
    double stress = 0.0;
    DegradationStage stage = DegradationStage::Principled;
    int tick = 0;
    std::string topic;
    std::vector<std::string> charter_principles;
    std::vector<std::string> transcript_window;
    std::optional<Bill> bill; // vote requests carry the bill under decision
};

BackendRequest llm_adapter_request(RequestKind kind, const AgentState& state,
                                   const DebateContext& context,
                                   const Bill* bill = nullptr);

std::string serialize_request(const BackendRequest& request);

using BackendResponse = std::variant<Utterance, Bill, Vote>;

// Parses and schema-validates a raw model response:
//   {"type":"utterance","text":...}
//   {"type":"bill","title":...,"text":...,"policy_vector":[4 reals in [-1,1]],
//    "is_procedural_change":bool}
//   {"type":"vote","choice":"yes"|"no"|"abstain"}
// Anything else raises parse_error with the raw payload attached.
BackendResponse llm_adapter_parse(const std::string& raw);

// Abstract transport: given a serialized request, produce the raw response
// text. The reference deployment speaks JSON over HTTP; tests plug in an
// in-memory function. Implementations may time out (Errc::timeout).
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string exchange(const std::string& request_json) = 0;
};

class FunctionTransport : public Transport {
public:
    explicit FunctionTransport(std::function<std::string(const std::string&)> fn)
        : fn_(std::move(fn)) {}
    std::string exchange(const std::string& request_json) override {
        return fn_(request_json);
    }

private:
    std::function<std::string(const std::string&)> fn_;
};

// POSTs requests to ${POLISIM_LLM_ENDPOINT}/agent with optional bearer token
// from ${POLISIM_LLM_API_KEY}. Constructed only when the CLI is told to use
// the llm backend.
std::unique_ptr<Transport> make_http_transport(const std::string& endpoint,
                                               const std::string& api_key);

// AgentBackend implementation that forwards every action to the transport.
// Per-run request ordering is preserved by construction (one backend per run,
// called sequentially from the run thread).
class LlmBackend : public AgentBackend {
public:
    explicit LlmBackend(std::unique_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    Utterance speak(const AgentState& state, const DebateContext& context,
                    RngStream& rng) override;
    std::optional<Bill> propose_bill(const AgentState& state,
                                     const DebateContext& context,
                                     RngStream& rng) override;
    Vote vote(const AgentState& state, const Bill& bill, RngStream& rng) override;

private:
    std::unique_ptr<Transport> transport_;
};

} // namespace polisim::llm
