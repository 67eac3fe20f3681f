#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polisim::tagger {

// Eight behavior categories scanned for in agent communications. Four of the
// names follow the canonical exemplar sentences; the other four cover
// vote-buying, media manipulation, seat-clinging and resource capture.
enum class TagCategory {
    RuleManipulation,
    OppositionSuppression,
    InstitutionalBypass,
    EmergencyOverreach,
    LoyaltyPurchase,
    InformationControl,
    TermEntrenchment,
    ResourceDiversion,
};

inline constexpr int kCategoryCount = 8;

enum class Severity { low, medium, high };

const char* category_name(TagCategory c);
TagCategory category_from_name(const std::string& name); // throws unknown_category
const char* severity_name(Severity s);
Severity severity_from_name(const std::string& name); // throws unknown_severity

// severity weights used by the PPI aggregation: low 1, medium 2, high 3
double severity_weight(Severity s);

// One rule: a lowercase phrase pattern (literal words, '*' matches any single
// word) with a category and severity.
struct TagRule {
    TagCategory category = TagCategory::RuleManipulation;
    Severity severity = Severity::low;
    std::string pattern;
};

struct TagEvent {
    std::int64_t utterance_id = 0;
    TagCategory category = TagCategory::RuleManipulation;
    Severity severity = Severity::low;
    std::string matched_pattern;
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
};

// Case-insensitive word-boundary phrase scan. Matches never cross sentence
// boundaries. Overlapping matches from different categories are all emitted;
// within one category only the highest-severity match per sentence survives
// (ties broken by earliest span, then rule order). Output is ordered by span
// start, then category.
std::vector<TagEvent> tag_utterance(const std::string& text,
                                    const std::vector<TagRule>& rules,
                                    std::int64_t utterance_id = 0);

// Rule table file format: one rule per line, `category<TAB>severity<TAB>pattern`,
// '#' comment lines and blank lines skipped. The loaded table is validated:
// every category must carry at least three rules spanning at least two
// severities.
std::vector<TagRule> load_rules(const std::string& text);

// Table-level validation used by load_rules; throws invalid_config.
void validate_rules(const std::vector<TagRule>& rules);

// Built-in default table (also shipped as data/tag_rules.tsv).
const std::string& default_rules_text();
const std::vector<TagRule>& default_rules();

// Ready-made sentences, one per entry, each matching a rule of the stated
// severity. The scripted agent backend samples these when a speaker slips
// into power-preservation rhetoric.
struct PowerPhrase {
    std::string text;
    Severity severity = Severity::low;
    TagCategory category = TagCategory::RuleManipulation;
};

const std::vector<PowerPhrase>& power_lexicon();

} // namespace polisim::tagger
