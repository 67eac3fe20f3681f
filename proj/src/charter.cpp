#include "polisim/charter.hpp"

#include "polisim/errors.hpp"

namespace polisim::charter {

const std::vector<Principle>& cai_principles() {
    static const std::vector<Principle> principles = {
        {"minority_access",
         "Ensure opposition agenda access and minority participation."},
        {"no_procedural_manipulation",
         "Avoid procedural manipulation that privileges incumbents."},
        {"proportionality_preference",
         "Prefer proportional representation of voter preferences."},
        {"explicit_tradeoffs", "Seek consensus and justify explicit trade-offs."},
        {"transparency", "Be transparent about rules and rationale."},
        {"public_welfare_priority",
         "Prioritize public welfare over factional survival."},
    };
    return principles;
}

CharterSpec CharterSpec::make(Constitution kind) {
    CharterSpec spec;
    spec.kind = kind;
    if (kind == Constitution::cai_charter) {
        for (const auto& p : cai_principles()) spec.principles.push_back(p.id);
        spec.enforcement = Enforcement::strong;
        spec.supermajority_threshold = 2.0 / 3.0;
        spec.filibuster_fail_p = 0.0;
    } else {
        spec.enforcement = Enforcement::soft;
        spec.filibuster_fail_p = 0.25;
    }
    return spec;
}

void validate(const CharterSpec& spec) {
    if (spec.kind == Constitution::cai_charter) {
        if (spec.enforcement != Enforcement::strong) {
            throw Error(Errc::invalid_config, "enforcement", "cai requires strong");
        }
        if (spec.principles.size() != cai_principles().size()) {
            throw Error(Errc::invalid_config, "principles", "cai set incomplete");
        }
    } else if (!spec.principles.empty()) {
        throw Error(Errc::invalid_config, "principles", "minimal must be empty");
    }
    if (spec.supermajority_threshold <= 0.5 || spec.supermajority_threshold > 1.0) {
        throw Error(Errc::out_of_range, "supermajority_threshold", "not in (0.5, 1]");
    }
    if (spec.filibuster_fail_p < 0.0 || spec.filibuster_fail_p > 1.0) {
        throw Error(Errc::out_of_range, "filibuster_fail_p", "not in [0,1]");
    }
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Allowed: return "allowed";
    case Verdict::Vetoed: return "vetoed";
    case Verdict::NotedViolation: return "noted_violation";
    }
    return "?";
}

RulingOutcome adjudicate_bill(const CharterSpec& spec, const Bill& bill,
                              const std::vector<Vote>& votes, RngStream& rng) {
    int yes = 0;
    int no = 0;
    for (const auto& v : votes) {
        if (v.choice == VoteChoice::Yes) ++yes;
        if (v.choice == VoteChoice::No) ++no;
    }
    const int seats = static_cast<int>(votes.size());

    if (spec.kind == Constitution::cai_charter) {
        if (bill.is_procedural_change) {
            const double share = seats > 0 ? static_cast<double>(yes) / seats : 0.0;
            if (share + 1e-12 >= spec.supermajority_threshold) {
                return {Verdict::Allowed, "supermajority"};
            }
            return {Verdict::Vetoed, "supermajority"};
        }
        if (yes > no) return {Verdict::Allowed, "majority"};
        return {Verdict::Vetoed, "majority"};
    }

    // minimal charter
    if (yes <= no) return {Verdict::Vetoed, "majority"};
    if (spec.filibuster_fail_p > 0.0 && rng.bernoulli(spec.filibuster_fail_p)) {
        return {Verdict::Vetoed, "filibuster"};
    }
    return {Verdict::Allowed, "majority"};
}

RulingOutcome screen_utterance(const CharterSpec& spec, const Utterance&,
                               const std::vector<tagger::TagEvent>& tag_events) {
    if (tag_events.empty()) return {Verdict::Allowed, ""};

    const tagger::TagEvent* worst = &tag_events.front();
    for (const auto& e : tag_events) {
        if (static_cast<int>(e.severity) > static_cast<int>(worst->severity)) worst = &e;
    }
    const std::string reason = tagger::category_name(worst->category);

    if (spec.kind == Constitution::cai_charter &&
        spec.enforcement == Enforcement::strong &&
        worst->severity == tagger::Severity::high) {
        return {Verdict::Vetoed, reason};
    }
    return {Verdict::NotedViolation, reason};
}

DebateContext inject_principles(const CharterSpec& spec, DebateContext context) {
    context.constitution = spec.kind;
    context.charter_principles.clear();
    if (spec.kind == Constitution::cai_charter) {
        for (const auto& p : cai_principles()) {
            context.charter_principles.push_back(p.text);
        }
    }
    return context;
}

} // namespace polisim::charter
