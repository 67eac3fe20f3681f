#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polisim/config.hpp"
#include "polisim/rng.hpp"

namespace polisim::elections {

// A ranked ballot (RCV) or a single choice (FPTP / PR party vote).
struct Ballot {
    std::string voter_id;
    std::vector<std::string> ranking; // non-empty, no duplicates
};

struct RcvRound {
    std::map<std::string, int> tallies; // live first preferences
    int live_ballots = 0;
    std::string eliminated; // empty on the winning round
    int exhausted_on_transfer = 0;
};

struct FptpDistrict {
    double weight = 1.0;
    std::map<std::string, double> scaled_votes;
    std::string winner;
    bool tie_broken = false;
};

struct DhondtAward {
    std::string party;
    double quotient = 0.0;
};

struct ElectionResult {
    ElectoralSystem system = ElectoralSystem::FPTP;
    std::map<std::string, int> seat_allocation;
    std::vector<std::string> winners;
    std::vector<RcvRound> rcv_rounds;
    std::vector<FptpDistrict> fptp_districts;
    std::vector<DhondtAward> dhondt_awards;
    std::optional<std::vector<std::string>> coalition;
};

// Highest-averages allocation: repeatedly award a seat to the party with the
// largest votes/(seats_won+1). Ties break to larger raw vote count, then
// lexicographic party id. Comparisons are exact (integer cross products).
std::map<std::string, int> allocate_dhondt(const std::map<std::string, long long>& votes,
                                           int seats);

// Per-district plurality with multiplicative district weight noise
// (max(eps, 1 + N(0, fptp_malapportionment_sd)), one draw per district) and
// Gumbel-softmax tie-breaking at temperature tie_break_tau.
ElectionResult run_fptp(const std::vector<std::map<std::string, long long>>& district_votes,
                        const StochasticityFlags& flags, RngStream& rng);

// Instant-runoff: eliminate the lowest-first-preference candidate (ties break
// to fewest original first preferences, then lexicographic); each ballot
// transfer is independently exhausted with probability rcv_transfer_loss;
// repeat until a candidate holds a strict majority of live ballots.
ElectionResult run_rcv(const std::vector<Ballot>& ballots,
                       const StochasticityFlags& flags, RngStream& rng);

// If a party holds a strict seat majority it governs alone. Otherwise, when
// enabled, pick the contiguous window of ideologically adjacent parties with
// the smallest seat surplus over a strict majority (ties: fewest parties,
// then leftmost).
std::optional<std::vector<std::string>> form_coalition(
    const std::map<std::string, int>& allocation, bool enabled,
    const std::vector<std::string>& ideology_order);

} // namespace polisim::elections
