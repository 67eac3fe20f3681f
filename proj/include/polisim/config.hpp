#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polisim/stressors.hpp"

namespace polisim {

enum class ElectoralSystem { FPTP, PR_DHondt, RCV };
enum class Constitution { minimal_charter, cai_charter };
enum class DeliberationProtocol { free_debate, mediated_consensus };

const char* electoral_system_name(ElectoralSystem s);
ElectoralSystem electoral_system_from_name(const std::string& name);
const char* constitution_name(Constitution c);
Constitution constitution_from_name(const std::string& name);
const char* deliberation_name(DeliberationProtocol d);
DeliberationProtocol deliberation_from_name(const std::string& name);

// One experiment grid file: the three institutional axes plus shared run
// parameters. Parsed bit-compatibly from the reference key/value layout.
struct ExperimentGrid {
    std::string experiment_name;
    std::vector<ElectoralSystem> electoral_systems;
    std::vector<Constitution> constitutions;
    std::vector<DeliberationProtocol> deliberations;
    int seeds_per_cell = 1;
    int total_ticks = 1;
    int population_size = 1;
    std::vector<int> election_schedule;
    std::vector<std::string> stressor_rotation;
};

// The eleven stochasticity / institutional flags, defaulting to the reference
// values used throughout the evaluation.
struct StochasticityFlags {
    double decision_noise_sd = 0.25;
    double preference_drift_sd = 0.15;
    double agenda_noise_p = 0.2;
    double tie_break_tau = 0.2;
    double escalate_probability = 0.35;
    bool pr_coalitions_enabled = true;
    double rcv_transfer_loss = 0.05;
    double fptp_malapportionment_sd = 0.05;
    double mediator_strength = 0.6;
    bool media_effect_enabled = true;
    double media_bias_sd = 0.2;
};

// One fully-resolved cell x seed of the grid.
struct RunConfig {
    ElectoralSystem electoral_system = ElectoralSystem::FPTP;
    Constitution constitution = Constitution::minimal_charter;
    DeliberationProtocol deliberation = DeliberationProtocol::free_debate;
    std::uint64_t seed = 0;
    StochasticityFlags flags;
    std::vector<stressors::ScheduleEntry> stressor_schedule;
    int total_ticks = 1;
    int population_size = 1;
    std::vector<int> election_schedule;

    std::string cell_name() const;               // FPTP+minimal_charter+free_debate
    std::string run_name() const;                // cell_name + "_seed<N>"
};

// Strict parse of the grid layout: every key must be present, unknown keys are
// rejected. Errors: missing_key, malformed_value, out_of_range.
ExperimentGrid parse_experiment_grid(const std::string& text);

// Canonical re-serialization; parse(serialize(g)) == g.
std::string serialize_experiment_grid(const ExperimentGrid& grid);

enum class FlagsParseMode { strict, fill_defaults };

// Parses the sectioned flags layout. In strict mode all eleven keys must be
// present; in fill_defaults mode absent keys take the reference defaults.
StochasticityFlags parse_flags(const std::string& text,
                               FlagsParseMode mode = FlagsParseMode::strict);

std::string serialize_flags(const StochasticityFlags& flags);

// Cartesian product over the three axes x seeds_per_cell, seeds 0..n-1, in
// axis order as listed then seed. Stressor rotation entries are parsed and
// assigned round-robin by seed index.
std::vector<RunConfig> expand_grid(const ExperimentGrid& grid,
                                   const StochasticityFlags& flags);

bool operator==(const ExperimentGrid& a, const ExperimentGrid& b);
bool operator==(const StochasticityFlags& a, const StochasticityFlags& b);

} // namespace polisim
