#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polisim/agents.hpp"
#include "polisim/stressors.hpp"
#include "polisim/tagger.hpp"

namespace polisim::metrics {

struct MetricsReport {
    double ppi = 0.0;
    double policy_stability = 1.0;
    double citizen_welfare_delta = 0.0;
    double polarization = 0.0;
    int policies_enacted = 0;
    std::map<std::string, std::vector<double>> per_tick_series;

    bool operator==(const MetricsReport&) const = default;
};

// PPI = sum of severity weights over all tag events, per utterance scanned.
double compute_ppi(const std::vector<tagger::TagEvent>& events,
                   std::size_t utterance_count);
double compute_ppi_from_weight(double total_weight, std::size_t utterance_count);

struct PolicyRecord {
    int bill_id = -1;
    int enacted_tick = 0;
    std::optional<int> reversed_tick;
};

// stability = 1 - reversals / max(1, enactments); an empty history scores 1.
double compute_policy_stability(const std::vector<PolicyRecord>& history);

struct Enactment {
    int bill_id = -1;
    int tick = 0;
    PolicyVector policy_vector = {0, 0, 0, 0};
};

// A later enactment whose dominant dimension matches an earlier one with the
// opposite sign supersedes it; the earlier record is marked reversed.
std::vector<PolicyRecord> build_policy_records(const std::vector<Enactment>& enactments);

int dominant_dimension(const PolicyVector& v);

// Mean over welfare dimensions of (final - initial).
double compute_welfare_delta(const std::vector<stressors::WorldState>& world_series);

// Mean absolute pairwise ideological distance, normalized by the maximum
// distance 2 on [-1, 1]. Fewer than two agents score 0.
double compute_polarization(const std::vector<double>& ideologies);

} // namespace polisim::metrics
