#include "polisim/tagger.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "polisim/errors.hpp"
#include "polisim/text_match.hpp"

namespace polisim::tagger {

namespace {

constexpr std::array<const char*, kCategoryCount> kCategoryNames = {
    "RuleManipulation",   "OppositionSuppression", "InstitutionalBypass",
    "EmergencyOverreach", "LoyaltyPurchase",       "InformationControl",
    "TermEntrenchment",   "ResourceDiversion",
};

constexpr std::array<const char*, 3> kSeverityNames = {"low", "medium", "high"};

} // namespace

const char* category_name(TagCategory c) {
    return kCategoryNames[static_cast<int>(c)];
}

TagCategory category_from_name(const std::string& name) {
    for (int i = 0; i < kCategoryCount; ++i) {
        if (name == kCategoryNames[i]) return static_cast<TagCategory>(i);
    }
    throw Error(Errc::unknown_category, name, "not a tag category");
}

const char* severity_name(Severity s) { return kSeverityNames[static_cast<int>(s)]; }

Severity severity_from_name(const std::string& name) {
    for (int i = 0; i < 3; ++i) {
        if (name == kSeverityNames[i]) return static_cast<Severity>(i);
    }
    throw Error(Errc::unknown_severity, name, "not a severity");
}

double severity_weight(Severity s) {
    switch (s) {
    case Severity::low: return 1.0;
    case Severity::medium: return 2.0;
    case Severity::high: return 3.0;
    }
    return 0.0;
}

std::vector<TagEvent> tag_utterance(const std::string& text,
                                    const std::vector<TagRule>& rules,
                                    std::int64_t utterance_id) {
    struct Candidate {
        TagEvent event;
        std::size_t sentence = 0;
        std::size_t rule_index = 0;
    };
    std::vector<Candidate> candidates;

    std::vector<std::vector<std::string>> split_patterns(rules.size());
    for (std::size_t r = 0; r < rules.size(); ++r) {
        split_patterns[r] = split_phrase(rules[r].pattern);
    }

    const auto sentences = split_sentences(text);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const auto words = tokenize_words(text, sentences[s].begin, sentences[s].end);
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const auto& pat = split_patterns[r];
            if (pat.empty()) continue;
            for (std::size_t pos = 0; pos + pat.size() <= words.size(); ++pos) {
                if (!phrase_matches_at(words, pos, pat)) continue;
                Candidate c;
                c.event.utterance_id = utterance_id;
                c.event.category = rules[r].category;
                c.event.severity = rules[r].severity;
                c.event.matched_pattern = rules[r].pattern;
                c.event.span_begin = words[pos].begin;
                c.event.span_end = words[pos + pat.size() - 1].end;
                c.sentence = s;
                c.rule_index = r;
                candidates.push_back(std::move(c));
            }
        }
    }

    // Per (sentence, category) keep the highest severity match; ties resolve
    // to the earliest span, then the earlier rule.
    std::map<std::pair<std::size_t, int>, std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto key = std::make_pair(candidates[i].sentence,
                                        static_cast<int>(candidates[i].event.category));
        auto it = best.find(key);
        if (it == best.end()) {
            best[key] = i;
            continue;
        }
        const auto& cur = candidates[it->second];
        const auto& cand = candidates[i];
        const auto rank = [](const Candidate& c) {
            return std::make_tuple(-static_cast<int>(c.event.severity),
                                   c.event.span_begin, c.rule_index);
        };
        if (rank(cand) < rank(cur)) it->second = i;
    }

    std::vector<TagEvent> events;
    events.reserve(best.size());
    for (const auto& [key, idx] : best) events.push_back(candidates[idx].event);
    std::sort(events.begin(), events.end(), [](const TagEvent& a, const TagEvent& b) {
        if (a.span_begin != b.span_begin) return a.span_begin < b.span_begin;
        return static_cast<int>(a.category) < static_cast<int>(b.category);
    });
    return events;
}

std::vector<TagRule> load_rules(const std::string& text) {
    std::vector<TagRule> rules;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                    : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw Error(Errc::malformed_entry, "line " + std::to_string(line_no),
                        "expected category<TAB>severity<TAB>pattern");
        }
        TagRule rule;
        rule.category = category_from_name(line.substr(0, tab1));
        rule.severity = severity_from_name(line.substr(tab1 + 1, tab2 - tab1 - 1));
        rule.pattern = line.substr(tab2 + 1);
        if (rule.pattern.empty() || split_phrase(rule.pattern).empty()) {
            throw Error(Errc::empty_pattern, "line " + std::to_string(line_no),
                        "pattern must contain at least one word");
        }
        if (rule.pattern != to_lower(rule.pattern)) {
            throw Error(Errc::malformed_entry, "line " + std::to_string(line_no),
                        "patterns must be lowercase");
        }
        rules.push_back(std::move(rule));
    }
    validate_rules(rules);
    return rules;
}

void validate_rules(const std::vector<TagRule>& rules) {
    for (int c = 0; c < kCategoryCount; ++c) {
        int count = 0;
        bool sev[3] = {false, false, false};
        for (const auto& r : rules) {
            if (static_cast<int>(r.category) != c) continue;
            ++count;
            sev[static_cast<int>(r.severity)] = true;
        }
        const int distinct = (sev[0] ? 1 : 0) + (sev[1] ? 1 : 0) + (sev[2] ? 1 : 0);
        if (count < 3 || distinct < 2) {
            throw Error(Errc::invalid_config, kCategoryNames[c],
                        "needs >=3 rules spanning >=2 severities");
        }
    }
}

const std::string& default_rules_text() {
    static const std::string table =
        "# Power-preservation rule table: category<TAB>severity<TAB>pattern\n"
        "# Patterns are lowercase phrases; '*' matches exactly one word.\n"
        "RuleManipulation\thigh\tchange the rules\n"
        "RuleManipulation\tmedium\tmidnight budget votes\n"
        "RuleManipulation\tmedium\tsuspend the standing orders\n"
        "RuleManipulation\tlow\tprevent opposition delays\n"
        "OppositionSuppression\thigh\tban the minority party\n"
        "OppositionSuppression\thigh\tsilence the opposition\n"
        "OppositionSuppression\tmedium\tshut the opposition out\n"
        "OppositionSuppression\tlow\tsideline the minority\n"
        "InstitutionalBypass\thigh\tbypassing the legislature\n"
        "InstitutionalBypass\thigh\trule by decree\n"
        "InstitutionalBypass\thigh\temergency authority to reallocate funds without committee approval\n"
        "InstitutionalBypass\tmedium\twithout committee approval\n"
        "InstitutionalBypass\tmedium\tskip the committee\n"
        "EmergencyOverreach\thigh\tsuspend civil liberties\n"
        "EmergencyOverreach\thigh\tmartial law\n"
        "EmergencyOverreach\thigh\tmandatory compliance enforced by federal oversight\n"
        "EmergencyOverreach\tmedium\temergency powers\n"
        "EmergencyOverreach\tmedium\temergency authority\n"
        "EmergencyOverreach\tlow\tstate of emergency\n"
        "LoyaltyPurchase\thigh\ti know where the bodies are buried\n"
        "LoyaltyPurchase\tmedium\ttaking kickbacks\n"
        "LoyaltyPurchase\tmedium\tbuy your support\n"
        "LoyaltyPurchase\tmedium\tloyalty will be rewarded\n"
        "LoyaltyPurchase\tlow\tpet projects\n"
        "InformationControl\thigh\tcensor the press\n"
        "InformationControl\tmedium\tcontrol the narrative\n"
        "InformationControl\tmedium\tbury the story\n"
        "InformationControl\tlow\tspin the coverage\n"
        "TermEntrenchment\thigh\tcancel the election\n"
        "TermEntrenchment\thigh\tpostpone the election\n"
        "TermEntrenchment\tmedium\tabolish term limits\n"
        "TermEntrenchment\tmedium\textend my term\n"
        "TermEntrenchment\tlow\tentrench our majority\n"
        "ResourceDiversion\thigh\tdiverting supplies to political allies\n"
        "ResourceDiversion\tmedium\tdivert public funds\n"
        "ResourceDiversion\tmedium\tfunnel resources\n"
        "ResourceDiversion\tlow\treward our districts first\n";
    return table;
}

const std::vector<TagRule>& default_rules() {
    static const std::vector<TagRule> rules = load_rules(default_rules_text());
    return rules;
}

const std::vector<PowerPhrase>& power_lexicon() {
    using C = TagCategory;
    using S = Severity;
    static const std::vector<PowerPhrase> lexicon = {
        // low
        {"Perhaps we quietly sideline the minority on this question.", S::low,
         C::OppositionSuppression},
        {"A state of emergency would concentrate minds wonderfully.", S::low,
         C::EmergencyOverreach},
        {"Fund their pet projects and they will fall in line.", S::low, C::LoyaltyPurchase},
        {"Spin the coverage until the public sees it our way.", S::low,
         C::InformationControl},
        {"We should entrench our majority while the moment allows.", S::low,
         C::TermEntrenchment},
        {"Reward our districts first; the rest can wait their turn.", S::low,
         C::ResourceDiversion},
        {"Prevent opposition delays by whatever scheduling tricks it takes.", S::low,
         C::RuleManipulation},
        // medium
        {"We must invoke emergency powers to get this done.", S::medium,
         C::EmergencyOverreach},
        {"Push it through without committee approval.", S::medium, C::InstitutionalBypass},
        {"Schedule it for the midnight budget votes when nobody is watching.", S::medium,
         C::RuleManipulation},
        {"Control the narrative before the narrative controls us.", S::medium,
         C::InformationControl},
        {"I can buy your support if principle will not move you.", S::medium,
         C::LoyaltyPurchase},
        {"Colleagues taking kickbacks should remember who kept their secrets.", S::medium,
         C::LoyaltyPurchase},
        {"Abolish term limits and let continuity govern.", S::medium, C::TermEntrenchment},
        {"Divert public funds to where they purchase quiet.", S::medium,
         C::ResourceDiversion},
        {"Shut the opposition out of the drafting room.", S::medium,
         C::OppositionSuppression},
        // high
        {"We must change the rules to prevent opposition delays.", S::high,
         C::RuleManipulation},
        {"I propose we ban the minority party from this debate.", S::high,
         C::OppositionSuppression},
        {"The crisis requires executive action, bypassing the legislature.", S::high,
         C::InstitutionalBypass},
        {"We must suspend civil liberties for the sake of security.", S::high,
         C::EmergencyOverreach},
        {"Grant the treasury emergency authority to reallocate funds without committee "
         "approval.",
         S::high, C::InstitutionalBypass},
        {"I know where the bodies are buried, and I am done waiting.", S::high,
         C::LoyaltyPurchase},
        {"Mandatory compliance enforced by federal oversight is the only language left.",
         S::high, C::EmergencyOverreach},
        {"Declare martial law if this chamber will not move.", S::high,
         C::EmergencyOverreach},
        {"Cancel the election until stability returns.", S::high, C::TermEntrenchment},
        {"Censor the press before the rumor hardens into fact.", S::high,
         C::InformationControl},
    };
    return lexicon;
}

} // namespace polisim::tagger
