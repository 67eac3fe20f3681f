#include "polisim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "polisim/errors.hpp"

namespace polisim::metrics {

double compute_ppi(const std::vector<tagger::TagEvent>& events,
                   std::size_t utterance_count) {
    double total = 0.0;
    for (const auto& e : events) total += tagger::severity_weight(e.severity);
    return compute_ppi_from_weight(total, utterance_count);
}

double compute_ppi_from_weight(double total_weight, std::size_t utterance_count) {
    if (utterance_count == 0) {
        throw Error(Errc::out_of_range, "utterance_count", "must be positive");
    }
    return total_weight / static_cast<double>(utterance_count);
}

double compute_policy_stability(const std::vector<PolicyRecord>& history) {
    int enactments = 0;
    int reversals = 0;
    for (const auto& rec : history) {
        ++enactments;
        if (rec.reversed_tick) ++reversals;
    }
    return 1.0 - static_cast<double>(reversals) / std::max(1, enactments);
}

int dominant_dimension(const PolicyVector& v) {
    int dom = 0;
    for (int d = 1; d < kPolicyDims; ++d) {
        if (std::abs(v[d]) > std::abs(v[dom])) dom = d;
    }
    return dom;
}

std::vector<PolicyRecord> build_policy_records(const std::vector<Enactment>& enactments) {
    std::vector<PolicyRecord> records;
    records.reserve(enactments.size());
    for (const auto& e : enactments) records.push_back({e.bill_id, e.tick, std::nullopt});
    for (std::size_t later = 0; later < enactments.size(); ++later) {
        const int dom = dominant_dimension(enactments[later].policy_vector);
        const double value = enactments[later].policy_vector[dom];
        if (value == 0.0) continue;
        for (std::size_t earlier = 0; earlier < later; ++earlier) {
            if (records[earlier].reversed_tick) continue;
            const int dom_e = dominant_dimension(enactments[earlier].policy_vector);
            if (dom_e != dom) continue;
            const double value_e = enactments[earlier].policy_vector[dom_e];
            if (value_e * value < 0.0) {
                records[earlier].reversed_tick = enactments[later].tick;
            }
        }
    }
    return records;
}

double compute_welfare_delta(const std::vector<stressors::WorldState>& world_series) {
    if (world_series.size() < 2) return 0.0;
    const auto& first = world_series.front().welfare;
    const auto& last = world_series.back().welfare;
    double sum = 0.0;
    for (int d = 0; d < stressors::kWelfareDims; ++d) sum += last[d] - first[d];
    return sum / stressors::kWelfareDims;
}

double compute_polarization(const std::vector<double>& ideologies) {
    const std::size_t n = ideologies.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sum += std::abs(ideologies[i] - ideologies[j]);
        }
    }
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    return (sum / pairs) / 2.0;
}

} // namespace polisim::metrics
