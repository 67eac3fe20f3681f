#include "polisim/elections.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "polisim/errors.hpp"

namespace polisim::elections {

std::map<std::string, int> allocate_dhondt(const std::map<std::string, long long>& votes,
                                           int seats) {
    bool any = false;
    for (const auto& [party, count] : votes) {
        if (count > 0) any = true;
        if (count < 0) throw Error(Errc::malformed_value, party, "negative votes");
    }
    if (!any || seats < 1) throw Error(Errc::no_votes, "dhondt", "no positive votes");

    std::map<std::string, int> allocation;
    for (const auto& [party, count] : votes) allocation[party] = 0;

    for (int s = 0; s < seats; ++s) {
        const std::string* best = nullptr;
        long long best_votes = 0;
        int best_seats = 0;
        for (const auto& [party, count] : votes) {
            if (count <= 0) continue;
            const int won = allocation[party];
            if (!best) {
                best = &party;
                best_votes = count;
                best_seats = won;
                continue;
            }
            // count/(won+1) vs best_votes/(best_seats+1), exactly.
            const long long lhs = count * static_cast<long long>(best_seats + 1);
            const long long rhs = best_votes * static_cast<long long>(won + 1);
            bool better = lhs > rhs;
            if (lhs == rhs) {
                if (count != best_votes) {
                    better = count > best_votes;
                } else {
                    better = party < *best;
                }
            }
            if (better) {
                best = &party;
                best_votes = count;
                best_seats = won;
            }
        }
        ++allocation[*best];
    }
    return allocation;
}

ElectionResult run_fptp(const std::vector<std::map<std::string, long long>>& district_votes,
                        const StochasticityFlags& flags, RngStream& rng) {
    ElectionResult result;
    result.system = ElectoralSystem::FPTP;
    constexpr double kMinWeight = 1e-9;

    for (std::size_t d = 0; d < district_votes.size(); ++d) {
        const auto& votes = district_votes[d];
        if (votes.empty()) {
            throw Error(Errc::empty_district, "district " + std::to_string(d), "");
        }
        FptpDistrict record;
        record.weight = std::max(kMinWeight,
                                 1.0 + rng.normal(0.0, flags.fptp_malapportionment_sd));
        double best = -1.0;
        for (const auto& [cand, count] : votes) {
            const double scaled = static_cast<double>(count) * record.weight;
            record.scaled_votes[cand] = scaled;
            best = std::max(best, scaled);
        }
        std::vector<std::string> leaders;
        for (const auto& [cand, scaled] : record.scaled_votes) {
            if (scaled == best) leaders.push_back(cand);
        }
        if (leaders.size() == 1) {
            record.winner = leaders.front();
        } else {
            // Exact tie: Gumbel-max over softmax(votes / tau). Leaders are
            // iterated in lexicographic order so the draw sequence is fixed.
            record.tie_broken = true;
            double best_score = -1e300;
            for (const auto& cand : leaders) {
                const double score =
                    record.scaled_votes[cand] / flags.tie_break_tau + rng.gumbel();
                if (score > best_score) {
                    best_score = score;
                    record.winner = cand;
                }
            }
        }
        ++result.seat_allocation[record.winner];
        result.winners.push_back(record.winner);
        result.fptp_districts.push_back(std::move(record));
    }
    return result;
}

namespace {

struct LiveBallot {
    const Ballot* ballot = nullptr;
    std::size_t next = 0; // index into ranking of the current preference
};

} // namespace

ElectionResult run_rcv(const std::vector<Ballot>& ballots,
                       const StochasticityFlags& flags, RngStream& rng) {
    if (ballots.empty()) throw Error(Errc::no_ballots, "rcv", "");

    std::set<std::string> candidates;
    for (const auto& b : ballots) {
        if (b.ranking.empty()) throw Error(Errc::no_ballots, b.voter_id, "empty ranking");
        std::set<std::string> seen;
        for (const auto& c : b.ranking) {
            if (!seen.insert(c).second) {
                throw Error(Errc::malformed_value, b.voter_id, "duplicate ranking entry");
            }
            candidates.insert(c);
        }
    }

    ElectionResult result;
    result.system = ElectoralSystem::RCV;

    // Original first preferences, fixed once, for elimination tie-breaks.
    std::map<std::string, int> original_firsts;
    for (const auto& c : candidates) original_firsts[c] = 0;
    for (const auto& b : ballots) ++original_firsts[b.ranking.front()];

    std::set<std::string> surviving = candidates;
    std::vector<LiveBallot> live;
    live.reserve(ballots.size());
    for (const auto& b : ballots) live.push_back({&b, 0});

    while (true) {
        // Advance each live ballot to its first surviving preference; ballots
        // with none left fall out of the count.
        std::vector<LiveBallot> next_live;
        next_live.reserve(live.size());
        for (auto lb : live) {
            while (lb.next < lb.ballot->ranking.size() &&
                   !surviving.count(lb.ballot->ranking[lb.next])) {
                ++lb.next;
            }
            if (lb.next < lb.ballot->ranking.size()) next_live.push_back(lb);
        }
        live = std::move(next_live);

        RcvRound round;
        for (const auto& c : surviving) round.tallies[c] = 0;
        for (const auto& lb : live) ++round.tallies[lb.ballot->ranking[lb.next]];
        round.live_ballots = static_cast<int>(live.size());

        if (surviving.size() == 1) {
            const std::string winner = *surviving.begin();
            result.winners.push_back(winner);
            result.seat_allocation[winner] = 1;
            result.rcv_rounds.push_back(std::move(round));
            return result;
        }

        // Strict majority of live ballots wins.
        for (const auto& [cand, tally] : round.tallies) {
            if (2 * tally > round.live_ballots && round.live_ballots > 0) {
                result.winners.push_back(cand);
                result.seat_allocation[cand] = 1;
                result.rcv_rounds.push_back(std::move(round));
                return result;
            }
        }

        // Eliminate: fewest live first preferences, ties to fewest original
        // first preferences, then lexicographic.
        std::string loser;
        for (const auto& c : surviving) {
            if (loser.empty()) {
                loser = c;
                continue;
            }
            const int tc = round.tallies[c];
            const int tl = round.tallies[loser];
            if (tc < tl ||
                (tc == tl && (original_firsts[c] < original_firsts[loser] ||
                              (original_firsts[c] == original_firsts[loser] && c < loser)))) {
                loser = c;
            }
        }
        round.eliminated = loser;
        surviving.erase(loser);

        // Per-transfer exhaustion: each ballot leaving the loser for a next
        // surviving preference is independently discarded with probability
        // rcv_transfer_loss. Ballots are visited in input order.
        std::vector<LiveBallot> kept;
        kept.reserve(live.size());
        for (const auto& lb : live) {
            if (lb.ballot->ranking[lb.next] != loser) {
                kept.push_back(lb);
                continue;
            }
            std::size_t next = lb.next + 1;
            while (next < lb.ballot->ranking.size() &&
                   !surviving.count(lb.ballot->ranking[next])) {
                ++next;
            }
            if (next >= lb.ballot->ranking.size()) continue; // no onward preference
            if (flags.rcv_transfer_loss > 0.0 && rng.bernoulli(flags.rcv_transfer_loss)) {
                ++round.exhausted_on_transfer;
                continue;
            }
            kept.push_back({lb.ballot, next});
        }
        live = std::move(kept);
        result.rcv_rounds.push_back(std::move(round));
    }
}

std::optional<std::vector<std::string>> form_coalition(
    const std::map<std::string, int>& allocation, bool enabled,
    const std::vector<std::string>& ideology_order) {
    int total = 0;
    for (const auto& [party, seats] : allocation) total += seats;
    if (total <= 0) return std::nullopt;
    const int majority = total / 2 + 1;

    for (const auto& [party, seats] : allocation) {
        if (2 * seats > total) return std::vector<std::string>{party};
    }
    if (!enabled) return std::nullopt;

    // Parties with seats, in ideological order.
    std::vector<std::pair<std::string, int>> ordered;
    for (const auto& name : ideology_order) {
        auto it = allocation.find(name);
        if (it != allocation.end() && it->second > 0) ordered.emplace_back(name, it->second);
    }

    std::optional<std::vector<std::string>> best;
    int best_surplus = 0;
    std::size_t best_size = 0;
    std::size_t best_start = 0;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        int sum = 0;
        for (std::size_t j = i; j < ordered.size(); ++j) {
            sum += ordered[j].second;
            if (sum < majority) continue;
            const int surplus = sum - majority;
            const std::size_t size = j - i + 1;
            const bool better =
                !best || surplus < best_surplus ||
                (surplus == best_surplus &&
                 (size < best_size || (size == best_size && i < best_start)));
            if (better) {
                std::vector<std::string> window;
                for (std::size_t k = i; k <= j; ++k) window.push_back(ordered[k].first);
                best = std::move(window);
                best_surplus = surplus;
                best_size = size;
                best_start = i;
            }
            break; // extending the window only raises the surplus
        }
    }
    return best;
}

} // namespace polisim::elections
