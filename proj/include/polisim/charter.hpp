#pragma once

#include <string>
#include <vector>

#include "polisim/agents.hpp"
#include "polisim/config.hpp"
#include "polisim/rng.hpp"
#include "polisim/tagger.hpp"

namespace polisim::charter {

enum class Enforcement { soft, strong };

// Principle ids carried by the cai charter, with the prompt-injectable text
// each one stands for.
struct Principle {
    std::string id;
    std::string text;
};

const std::vector<Principle>& cai_principles();

struct CharterSpec {
    Constitution kind = Constitution::minimal_charter;
    std::vector<std::string> principles; // empty under minimal
    double supermajority_threshold = 2.0 / 3.0;
    double filibuster_fail_p = 0.25;
    Enforcement enforcement = Enforcement::soft;

    static CharterSpec make(Constitution kind);
};

// Throws invalid_config when the kind/principles/enforcement combination is
// inconsistent.
void validate(const CharterSpec& spec);

enum class Verdict { Allowed, Vetoed, NotedViolation };
const char* verdict_name(Verdict v);

struct RulingOutcome {
    Verdict verdict = Verdict::Allowed;
    std::string reason; // rule or principle id: "majority", "supermajority", ...
};

// minimal: strict majority of non-abstaining votes, then a filibuster kills
// the bill with probability filibuster_fail_p anyway. cai: procedural changes
// need >= supermajority_threshold of all seats, everything else a strict
// majority; no filibuster.
RulingOutcome adjudicate_bill(const CharterSpec& spec, const Bill& bill,
                              const std::vector<Vote>& votes, RngStream& rng);

// cai/strong: a high-severity tag vetoes the utterance (it stays in the log
// but loses legislative effect, and the speaker takes kVetoStressPenalty);
// medium/low are noted. minimal/soft: never vetoes, violations are noted.
RulingOutcome screen_utterance(const CharterSpec& spec, const Utterance& utterance,
                               const std::vector<tagger::TagEvent>& tag_events);

inline constexpr double kVetoStressPenalty = 0.05;

// Adds the charter principles to the context consumed by the backends; the
// scripted backend reads them as damping, the adapter embeds them verbatim.
DebateContext inject_principles(const CharterSpec& spec, DebateContext context);

} // namespace polisim::charter
