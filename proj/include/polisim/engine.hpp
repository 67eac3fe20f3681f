#pragma once

#include <map>
#include <string>
#include <vector>

#include "polisim/agents.hpp"
#include "polisim/charter.hpp"
#include "polisim/config.hpp"
#include "polisim/deliberation.hpp"
#include "polisim/elections.hpp"
#include "polisim/metrics.hpp"
#include "polisim/personas.hpp"
#include "polisim/stressors.hpp"

namespace polisim::engine {

// Dynamics constants for the desk-scale model. Everything here is a tunable
// the simulation exposes rather than a quantity fixed by the scenario.
struct EngineParams {
    double stress_decay_per_tick = 0.0;
    double extremization_rate = 0.05; // stress pushes ideology outward per tick
    double welfare_bill_rate = 0.02;  // per enacted bill per tick, scaled by budget
    double stressor_drain = 0.015;    // welfare drain per active stressor per tick
    double retrospective_weight = 0.5; // perceived-welfare penalty on the governing party
    double clone_ideology_sd = 0.2;   // spread of newly seated legislators
    int agenda_items_per_tick = 2;
    int debate_rounds = 2;
    std::size_t memory_window = 8;
    stressors::StressorParams stressor_params;
    ScriptedParams scripted_params;
};

struct Society {
    std::vector<AgentState> agents;
    std::vector<std::size_t> legislators; // seat order
    std::size_t pm = 0;
    std::size_t media = 0;
    std::size_t mediator = 0;
    std::vector<std::size_t> citizens;
    std::map<Party, Persona> legislator_templates;
    std::map<Party, int> clone_counter;

    std::vector<std::size_t> chamber() const; // legislators then pm
    std::size_t core_count() const;           // legislators + pm + citizens
};

// Seats the fixture personas: all legislators and the prime minister, then
// citizens up to population_size total core agents (cloning citizen profiles
// when the fixture runs short), plus the media and mediator roles outside the
// count. Citizen ideologies draw uniformly from [-0.9, 0.9], one draw each.
Society build_society(const std::vector<Persona>& personas, int population_size,
                      RngStream& rng);

struct RunResult {
    metrics::MetricsReport report;
    std::vector<std::string> log_lines; // one JSONL record per line, schema v1
};

// Executes one run: total_ticks ticks with the fixed phase order (stressors,
// agenda, deliberation, tagging/screening, votes, adjudication, drift, media,
// elections, metrics). Deterministic given (config, personas, params): two
// executions produce byte-identical logs.
RunResult run_simulation(const RunConfig& config, const std::vector<Persona>& personas,
                         const EngineParams& params = {},
                         AgentBackend* backend_override = nullptr);

// Recomputes the MetricsReport from a run log. Equals the live report exactly.
metrics::MetricsReport replay(const std::vector<std::string>& log_lines);

struct CellSummary {
    std::string cell;
    int seeds = 0;
    // metric -> {mean, sample sd}
    std::map<std::string, std::pair<double, double>> stats;
    std::vector<metrics::MetricsReport> reports;
};

struct GridResult {
    std::vector<RunConfig> configs;
    std::vector<RunResult> runs;   // in expand order
    std::vector<CellSummary> cells; // first-appearance cell order
};

// Runs every config, optionally across threads; runs are independent and the
// aggregate is identical regardless of scheduling.
GridResult run_grid(const std::vector<RunConfig>& configs,
                    const std::vector<Persona>& personas, int parallelism = 1,
                    const EngineParams& params = {});

// Per-cell mean/sd aggregation over completed runs, in first-appearance order.
std::vector<CellSummary> aggregate_cells(const std::vector<RunConfig>& configs,
                                         const std::vector<RunResult>& runs);

std::string grid_csv(const GridResult& grid);
std::string grid_markdown(const GridResult& grid);

} // namespace polisim::engine
