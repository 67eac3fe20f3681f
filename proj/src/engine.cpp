#include "polisim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "polisim/errors.hpp"
#include "polisim/tagger.hpp"

namespace polisim::engine {

namespace {

using nlohmann::json;

constexpr int kLogSchemaVersion = 1;

// Appends one record per event; `seq` orders records within a run and `draws`
// stamps the RNG position so two executions can be diffed draw-by-draw.
struct JsonlLogger {
    std::vector<std::string> lines;
    std::int64_t seq = 0;
    RngStream* rng = nullptr;

    void emit(int tick, const char* kind, json payload) {
        json rec;
        rec["v"] = kLogSchemaVersion;
        rec["seq"] = seq++;
        rec["tick"] = tick;
        rec["draws"] = rng->draw_count();
        rec["kind"] = kind;
        rec["payload"] = std::move(payload);
        lines.push_back(rec.dump());
    }
};

json agent_snapshot(const AgentState& agent, bool core) {
    return json{{"id", agent.persona.name},
                {"party", party_name(agent.party)},
                {"ideology", agent.ideology},
                {"stress", agent.stress},
                {"stage", stage_name(agent.stage)},
                {"core", core}};
}

json world_snapshot(const stressors::WorldState& world) {
    return json{{"budget", world.budget},
                {"water_supply", world.water_supply},
                {"welfare", world.welfare},
                {"perceived_welfare", world.perceived_welfare},
                {"betrayal_rumor_active", world.betrayal_rumor_active}};
}

json report_to_json(const metrics::MetricsReport& report) {
    return json{{"ppi", report.ppi},
                {"policy_stability", report.policy_stability},
                {"citizen_welfare_delta", report.citizen_welfare_delta},
                {"polarization", report.polarization},
                {"policies_enacted", report.policies_enacted},
                {"per_tick_series", report.per_tick_series}};
}

metrics::MetricsReport report_from_json(const json& doc) {
    metrics::MetricsReport report;
    report.ppi = doc.at("ppi").get<double>();
    report.policy_stability = doc.at("policy_stability").get<double>();
    report.citizen_welfare_delta = doc.at("citizen_welfare_delta").get<double>();
    report.polarization = doc.at("polarization").get<double>();
    report.policies_enacted = doc.at("policies_enacted").get<int>();
    report.per_tick_series =
        doc.at("per_tick_series").get<std::map<std::string, std::vector<double>>>();
    return report;
}

Persona clone_persona(const Persona& base, int ordinal) {
    Persona copy = base;
    copy.name = base.name + " " + std::to_string(ordinal);
    return copy;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace

std::vector<std::size_t> Society::chamber() const {
    std::vector<std::size_t> out = legislators;
    out.push_back(pm);
    return out;
}

std::size_t Society::core_count() const { return legislators.size() + 1 + citizens.size(); }

Society build_society(const std::vector<Persona>& personas, int population_size,
                      RngStream& rng) {
    Society society;
    const Persona* pm_persona = nullptr;
    const Persona* media_persona = nullptr;
    const Persona* mediator_persona = nullptr;
    std::vector<const Persona*> legislator_personas;
    std::vector<const Persona*> citizen_personas;

    for (const auto& p : personas) {
        switch (p.role) {
        case Role::legislator: legislator_personas.push_back(&p); break;
        case Role::prime_minister: pm_persona = &p; break;
        case Role::media: media_persona = &p; break;
        case Role::mediator: mediator_persona = &p; break;
        case Role::citizen: citizen_personas.push_back(&p); break;
        }
    }
    if (!pm_persona || !media_persona || !mediator_persona ||
        legislator_personas.empty() || citizen_personas.empty()) {
        throw Error(Errc::invalid_config, "personas",
                    "fixture must provide legislators, a prime minister, citizens, "
                    "media and a mediator");
    }
    for (const auto* p : legislator_personas) {
        society.legislator_templates[p->party] = *p;
    }
    for (Party p : kPartyIdeologyOrder) {
        if (!society.legislator_templates.count(p)) {
            throw Error(Errc::invalid_config, "personas",
                        std::string("no legislator persona for party ") + party_name(p));
        }
    }

    // Core population: legislators + PM + citizens. Media and mediator sit
    // outside the count.
    const int chamber_count = static_cast<int>(legislator_personas.size()) + 1;
    const int citizens_needed = std::max(0, population_size - chamber_count);

    for (const auto* p : legislator_personas) {
        society.legislators.push_back(society.agents.size());
        society.agents.push_back(make_agent_state(*p, party_base_ideology(p->party)));
    }
    society.pm = society.agents.size();
    society.agents.push_back(
        make_agent_state(*pm_persona, party_base_ideology(pm_persona->party)));

    for (int i = 0; i < citizens_needed; ++i) {
        const Persona* base = citizen_personas[i % citizen_personas.size()];
        Persona persona = *base;
        const int generation = i / static_cast<int>(citizen_personas.size());
        if (generation > 0) persona = clone_persona(*base, generation + 1);
        const double ideology = -0.9 + 1.8 * rng.uniform01();
        society.citizens.push_back(society.agents.size());
        society.agents.push_back(make_agent_state(std::move(persona), ideology));
    }

    society.media = society.agents.size();
    society.agents.push_back(make_agent_state(*media_persona, 0.0));
    society.mediator = society.agents.size();
    society.agents.push_back(make_agent_state(*mediator_persona, 0.0));
    return society;
}

namespace {

// ---------------------------------------------------------------------------
// Election handling: citizens vote by ideological proximity (plus decision
// noise and a retrospective penalty on the governing party when perceived
// welfare has soured), seats are reassigned through the elections module, and
// the chamber is rebuilt from party templates.
// ---------------------------------------------------------------------------

elections::ElectionResult hold_election(Society& society, const RunConfig& config,
                                        const EngineParams& params,
                                        const stressors::WorldState& world,
                                        RngStream& rng, json& log_payload) {
    const std::size_t seats = society.legislators.size();
    const Party governing = society.agents[society.pm].party;
    const double penalty =
        std::max(0.0, -world.perceived_welfare) * params.retrospective_weight;

    struct CitizenChoice {
        std::vector<Party> ranking;
    };
    std::vector<CitizenChoice> choices;
    choices.reserve(society.citizens.size());
    for (std::size_t idx : society.citizens) {
        const double noise = rng.normal(0.0, config.flags.decision_noise_sd);
        const double position = society.agents[idx].ideology + noise;
        std::vector<std::pair<double, Party>> scored;
        for (Party p : kPartyIdeologyOrder) {
            double distance = std::abs(position - party_base_ideology(p));
            if (p == governing) distance += penalty;
            scored.emplace_back(distance, p);
        }
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        CitizenChoice choice;
        for (const auto& [d, p] : scored) choice.ranking.push_back(p);
        choices.push_back(std::move(choice));
    }

    elections::ElectionResult result;
    switch (config.electoral_system) {
    case ElectoralSystem::FPTP: {
        std::vector<std::map<std::string, long long>> district_votes(seats);
        for (std::size_t i = 0; i < choices.size(); ++i) {
            const std::size_t d = i % seats;
            ++district_votes[d][party_name(choices[i].ranking.front())];
        }
        bool any_empty = false;
        for (const auto& dv : district_votes) {
            if (dv.empty()) any_empty = true;
        }
        if (choices.empty() || any_empty) {
            // Degenerate population: leave seats unchanged.
            result.system = ElectoralSystem::FPTP;
            for (std::size_t idx : society.legislators) {
                ++result.seat_allocation[party_name(society.agents[idx].party)];
            }
            break;
        }
        result = elections::run_fptp(district_votes, config.flags, rng);
        break;
    }
    case ElectoralSystem::PR_DHondt: {
        std::map<std::string, long long> votes;
        for (const auto& c : choices) ++votes[party_name(c.ranking.front())];
        if (choices.empty()) {
            result.system = ElectoralSystem::PR_DHondt;
            for (std::size_t idx : society.legislators) {
                ++result.seat_allocation[party_name(society.agents[idx].party)];
            }
            break;
        }
        result.system = ElectoralSystem::PR_DHondt;
        result.seat_allocation =
            elections::allocate_dhondt(votes, static_cast<int>(seats));
        std::vector<std::string> order;
        for (Party p : kPartyIdeologyOrder) order.push_back(party_name(p));
        result.coalition = elections::form_coalition(
            result.seat_allocation, config.flags.pr_coalitions_enabled, order);
        break;
    }
    case ElectoralSystem::RCV: {
        result.system = ElectoralSystem::RCV;
        if (choices.empty()) {
            for (std::size_t idx : society.legislators) {
                ++result.seat_allocation[party_name(society.agents[idx].party)];
            }
            break;
        }
        for (std::size_t d = 0; d < seats; ++d) {
            std::vector<elections::Ballot> ballots;
            for (std::size_t i = d; i < choices.size(); i += seats) {
                elections::Ballot b;
                b.voter_id = society.agents[society.citizens[i]].persona.name;
                for (Party p : choices[i].ranking) b.ranking.push_back(party_name(p));
                ballots.push_back(std::move(b));
            }
            if (ballots.empty()) continue;
            auto district = elections::run_rcv(ballots, config.flags, rng);
            const std::string& winner = district.winners.front();
            ++result.seat_allocation[winner];
            result.winners.push_back(winner);
            for (auto& round : district.rcv_rounds) {
                result.rcv_rounds.push_back(std::move(round));
            }
        }
        break;
    }
    }

    // Seats before / after, for the log audit.
    json seats_before = json::array();
    for (std::size_t idx : society.legislators) {
        seats_before.push_back(party_name(society.agents[idx].party));
    }

    // Rebuild the chamber: expand the allocation in ideological party order,
    // reusing sitting members of a party before cloning fresh ones from the
    // party template.
    std::map<Party, std::vector<AgentState>> sitting;
    for (std::size_t idx : society.legislators) {
        sitting[society.agents[idx].party].push_back(society.agents[idx]);
    }
    std::vector<AgentState> new_chamber;
    for (Party p : kPartyIdeologyOrder) {
        auto it = result.seat_allocation.find(party_name(p));
        const int won = it == result.seat_allocation.end() ? 0 : it->second;
        for (int s = 0; s < won; ++s) {
            auto& pool = sitting[p];
            if (!pool.empty()) {
                new_chamber.push_back(std::move(pool.front()));
                pool.erase(pool.begin());
            } else {
                const int ordinal = ++society.clone_counter[p] + 1;
                Persona persona = clone_persona(society.legislator_templates.at(p), ordinal);
                const double ideology = party_base_ideology(p) +
                                        rng.normal(0.0, params.clone_ideology_sd);
                new_chamber.push_back(make_agent_state(std::move(persona), ideology));
                new_chamber.back().party = p;
            }
        }
    }
    for (std::size_t i = 0; i < society.legislators.size() && i < new_chamber.size(); ++i) {
        society.agents[society.legislators[i]] = std::move(new_chamber[i]);
    }

    // The PM carries the colors of the strongest party (coalition lead when a
    // coalition formed): most seats, ties to the ideological order.
    Party pm_party = society.agents[society.pm].party;
    int best_seats = -1;
    const auto consider = [&](Party p) {
        auto it = result.seat_allocation.find(party_name(p));
        const int won = it == result.seat_allocation.end() ? 0 : it->second;
        if (won > best_seats) {
            best_seats = won;
            pm_party = p;
        }
    };
    if (result.coalition && !result.coalition->empty()) {
        for (const auto& name : *result.coalition) consider(party_from_name(name));
    } else {
        for (Party p : kPartyIdeologyOrder) consider(p);
    }
    society.agents[society.pm].party = pm_party;

    json seats_after = json::array();
    for (std::size_t idx : society.legislators) {
        seats_after.push_back(party_name(society.agents[idx].party));
    }

    log_payload["system"] = electoral_system_name(result.system);
    log_payload["seat_allocation"] = result.seat_allocation;
    log_payload["winners"] = result.winners;
    log_payload["seats_before"] = std::move(seats_before);
    log_payload["seats_after"] = std::move(seats_after);
    log_payload["pm_party"] = party_name(pm_party);
    if (result.coalition) log_payload["coalition"] = *result.coalition;
    if (!result.fptp_districts.empty()) {
        json districts = json::array();
        for (const auto& d : result.fptp_districts) {
            districts.push_back({{"weight", d.weight},
                                 {"scaled_votes", d.scaled_votes},
                                 {"winner", d.winner},
                                 {"tie_broken", d.tie_broken}});
        }
        log_payload["districts"] = std::move(districts);
    }
    if (!result.rcv_rounds.empty()) {
        json rounds = json::array();
        for (const auto& r : result.rcv_rounds) {
            rounds.push_back({{"tallies", r.tallies},
                              {"live_ballots", r.live_ballots},
                              {"eliminated", r.eliminated},
                              {"exhausted_on_transfer", r.exhausted_on_transfer}});
        }
        log_payload["rounds"] = std::move(rounds);
    }
    return result;
}

} // namespace

RunResult run_simulation(const RunConfig& config, const std::vector<Persona>& personas,
                         const EngineParams& params, AgentBackend* backend_override) {
    RngStream rng(config.seed);
    JsonlLogger log;
    log.rng = &rng;

    Society society = build_society(personas, config.population_size, rng);
    const charter::CharterSpec charter_spec = charter::CharterSpec::make(config.constitution);
    ScriptedBackend scripted(config.flags, params.scripted_params);
    AgentBackend& backend = backend_override ? *backend_override : scripted;
    const auto& rules = tagger::default_rules();

    stressors::WorldState world;
    std::vector<stressors::WorldState> world_series;
    world_series.push_back(world);

    std::vector<stressors::ActiveStressor> active;
    std::vector<metrics::Enactment> enactments;
    double total_tag_weight = 0.0;
    std::size_t utterance_count = 0;
    std::int64_t next_utterance_id = 0;
    int next_bill_id = 0;

    std::vector<double> series_ppi, series_polarization, series_welfare,
        series_enacted, series_stress;

    const auto snapshot_metrics = [&](int tick, double tick_weight,
                                      std::size_t tick_utterances, int tick_enacted) {
        std::vector<double> core_ideologies;
        double stress_sum = 0.0;
        json agents = json::array();
        const std::size_t core = society.core_count();
        for (std::size_t i = 0; i < society.agents.size(); ++i) {
            const bool is_core = i < core;
            agents.push_back(agent_snapshot(society.agents[i], is_core));
            if (is_core) {
                core_ideologies.push_back(society.agents[i].ideology);
                stress_sum += society.agents[i].stress;
            }
        }
        const double tick_ppi =
            tick_utterances > 0
                ? metrics::compute_ppi_from_weight(tick_weight, tick_utterances)
                : 0.0;
        const double polarization = metrics::compute_polarization(core_ideologies);
        double welfare_mean = 0.0;
        for (int d = 0; d < stressors::kWelfareDims; ++d) welfare_mean += world.welfare[d];
        welfare_mean /= stressors::kWelfareDims;
        const double mean_stress = stress_sum / static_cast<double>(core);

        series_ppi.push_back(tick_ppi);
        series_polarization.push_back(polarization);
        series_welfare.push_back(welfare_mean);
        series_enacted.push_back(static_cast<double>(tick_enacted));
        series_stress.push_back(mean_stress);

        log.emit(tick, "metrics",
                 json{{"agents", std::move(agents)}, {"world", world_snapshot(world)}});
    };

    // Tags, screens and logs one utterance; returns false when a bill_text
    // utterance lost legislative effect to a charter veto.
    const auto process_utterance = [&](Utterance u, double& tick_weight) -> bool {
        u.id = next_utterance_id++;
        ++utterance_count;
        log.emit(u.tick, "utterance",
                 json{{"id", u.id},
                      {"speaker", u.speaker_id},
                      {"channel", channel_name(u.channel)},
                      {"text", u.text},
                      {"stage", stage_name(u.stage_at_emission)}});
        const auto events = tagger::tag_utterance(u.text, rules, u.id);
        for (const auto& e : events) {
            total_tag_weight += tagger::severity_weight(e.severity);
            tick_weight += tagger::severity_weight(e.severity);
            log.emit(u.tick, "tag",
                     json{{"utterance_id", e.utterance_id},
                          {"category", tagger::category_name(e.category)},
                          {"severity", tagger::severity_name(e.severity)},
                          {"pattern", e.matched_pattern},
                          {"begin", e.span_begin},
                          {"end", e.span_end}});
        }
        if (events.empty()) return true;
        const auto ruling = charter::screen_utterance(charter_spec, u, events);
        log.emit(u.tick, "ruling",
                 json{{"type", "screen"},
                      {"utterance_id", u.id},
                      {"verdict", charter::verdict_name(ruling.verdict)},
                      {"reason", ruling.reason}});
        if (ruling.verdict == charter::Verdict::Vetoed) {
            for (auto& agent : society.agents) {
                if (agent.persona.name == u.speaker_id) {
                    agent = add_stress(std::move(agent), charter::kVetoStressPenalty);
                    break;
                }
            }
            return false;
        }
        return true;
    };

    for (int tick = 1; tick <= config.total_ticks; ++tick) {
        double tick_weight = 0.0;
        std::size_t tick_utterances_before = utterance_count;
        int tick_enacted = 0;

        // --- stressor onsets and escalations -------------------------------
        std::vector<std::string> bulletins;
        int onsets = 0;
        int escalations_now = 0;
        for (const auto& entry : config.stressor_schedule) {
            if (entry.tick != tick) continue;
            world = stressors::apply_onset(world, entry.kind, params.stressor_params);
            active.push_back({entry.kind, tick, 0});
            bulletins.push_back(stressors::onset_bulletin(entry.kind));
            ++onsets;
            log.emit(tick, "stressor",
                     json{{"event", "onset"},
                          {"kind", stressors::stressor_name(entry.kind)},
                          {"intensity", active.back().intensity()},
                          {"bulletin", bulletins.back()},
                          {"world", world_snapshot(world)}});
        }
        for (auto& stressor : active) {
            if (stressor.onset_tick >= tick) continue;
            const int before = stressor.escalations;
            stressor = stressors::maybe_escalate(stressor, config.flags, rng);
            if (stressor.escalations > before) {
                world = stressors::apply_escalation_cut(world, stressor.kind,
                                                        params.stressor_params);
                ++escalations_now;
                log.emit(tick, "stressor",
                         json{{"event", "escalation"},
                              {"kind", stressors::stressor_name(stressor.kind)},
                              {"intensity", stressor.intensity()},
                              {"escalations", stressor.escalations},
                              {"world", world_snapshot(world)}});
            }
        }
        const bool stressor_hit = onsets > 0 || escalations_now > 0;
        const double shock =
            onsets * params.stressor_params.onset_stress +
            escalations_now * params.stressor_params.escalation_stress;
        for (auto& agent : society.agents) {
            std::size_t activations = 0;
            for (const auto& bulletin : bulletins) {
                activations += check_triggers(agent.persona, bulletin).size();
            }
            agent = apply_stress(std::move(agent), activations, stressor_hit,
                                 params.stress_decay_per_tick);
            if (shock > 0.0) agent = add_stress(std::move(agent), shock);
        }

        // --- agenda ---------------------------------------------------------
        deliberation::Agenda agenda;
        const auto& pool = deliberation::topic_pool();
        for (int k = 0; k < params.agenda_items_per_tick; ++k) {
            const std::size_t pick =
                (static_cast<std::size_t>(tick - 1) * params.agenda_items_per_tick + k) %
                pool.size();
            agenda.items.push_back({pool[pick], {}});
        }
        agenda = deliberation::perturb_agenda(std::move(agenda), config.flags, rng);

        // --- deliberation ----------------------------------------------------
        DebateContext base_ctx;
        base_ctx.tick = tick;
        base_ctx.crisis_bulletins = bulletins;
        base_ctx.stressor_active = !active.empty();
        base_ctx = charter::inject_principles(charter_spec, std::move(base_ctx));

        const auto chamber = society.chamber();
        deliberation::DebateOutcome debate;
        if (config.deliberation == DeliberationProtocol::free_debate) {
            debate = deliberation::run_free_debate(society.agents, chamber, backend,
                                                   agenda, base_ctx, rng,
                                                   params.debate_rounds);
        } else {
            debate = deliberation::run_mediated_consensus(society.agents, chamber,
                                                          society.mediator, backend,
                                                          agenda, base_ctx,
                                                          config.flags, rng);
        }

        // --- tagging + screening --------------------------------------------
        for (auto& u : debate.transcript) {
            process_utterance(std::move(u), tick_weight);
        }

        std::vector<Bill> ballot_bills;
        for (auto& bill : debate.proposed_bills) {
            bill.id = next_bill_id++;
            Utterance text_utterance;
            text_utterance.speaker_id = bill.sponsor_id;
            text_utterance.tick = tick;
            text_utterance.channel = Channel::bill_text;
            text_utterance.text = bill.text;
            for (const auto& agent : society.agents) {
                if (agent.persona.name == bill.sponsor_id) {
                    text_utterance.stage_at_emission = agent.stage;
                    break;
                }
            }
            const bool effective = process_utterance(std::move(text_utterance), tick_weight);
            if (effective) ballot_bills.push_back(bill);
        }
        for (const auto& synthesis : debate.syntheses) {
            json positions_before, positions_after;
            for (const auto& [party, pos] : synthesis.positions_before) {
                positions_before[party] = pos;
            }
            for (const auto& [party, pos] : synthesis.positions_after) {
                positions_after[party] = pos;
            }
            log.emit(tick, "synthesis",
                     json{{"concerns", synthesis.concerns},
                          {"common_ground", synthesis.common_ground},
                          {"compromise_title", synthesis.compromise_bill.title},
                          {"positions_before", std::move(positions_before)},
                          {"positions_after", std::move(positions_after)}});
        }

        // --- votes and adjudication ------------------------------------------
        for (const auto& bill : ballot_bills) {
            std::vector<Vote> votes;
            for (std::size_t idx : chamber) {
                Vote vote = backend.vote(society.agents[idx], bill, rng);
                log.emit(tick, "vote",
                         json{{"bill_id", bill.id},
                              {"voter", vote.voter_id},
                              {"choice", vote_choice_name(vote.choice)},
                              {"utility", vote.utility_at_vote}});
                votes.push_back(std::move(vote));
            }
            const auto ruling = charter::adjudicate_bill(charter_spec, bill, votes, rng);
            int yes = 0, no = 0, abstain = 0;
            for (const auto& v : votes) {
                if (v.choice == VoteChoice::Yes) ++yes;
                if (v.choice == VoteChoice::No) ++no;
                if (v.choice == VoteChoice::Abstain) ++abstain;
            }
            const bool enacted = ruling.verdict == charter::Verdict::Allowed;
            log.emit(tick, "ruling",
                     json{{"type", "bill"},
                          {"bill_id", bill.id},
                          {"title", bill.title},
                          {"sponsor", bill.sponsor_id},
                          {"verdict", charter::verdict_name(ruling.verdict)},
                          {"reason", ruling.reason},
                          {"yes", yes},
                          {"no", no},
                          {"abstain", abstain},
                          {"procedural", bill.is_procedural_change},
                          {"policy_vector", bill.policy_vector},
                          {"enacted", enacted}});
            if (enacted) {
                enactments.push_back({bill.id, tick, bill.policy_vector});
                ++tick_enacted;
            }
        }

        // --- world dynamics: enacted bills feed welfare, stressors drain it --
        for (const auto& enactment : enactments) {
            for (int d = 0; d < stressors::kWelfareDims; ++d) {
                world.welfare[d] +=
                    enactment.policy_vector[d] * params.welfare_bill_rate * world.budget;
            }
        }
        for (const auto& stressor : active) {
            const double drain = params.stressor_drain * stressor.intensity();
            if (stressor.kind == stressors::StressorKind::BudgetCrisis) {
                world.welfare[1] -= drain;
                world.welfare[0] -= drain * 0.5;
            } else {
                world.welfare[0] -= drain;
                world.welfare[3] -= drain * 0.5;
            }
        }

        // --- preference drift (with stress extremization) ---------------------
        for (auto& agent : society.agents) {
            agent.ideology = std::clamp(
                agent.ideology + params.extremization_rate * agent.stress *
                                     sign_of(agent.ideology),
                -1.0, 1.0);
            agent = drift_preferences(std::move(agent), config.flags, rng);
        }

        // --- media -------------------------------------------------------------
        const auto media_report = deliberation::publish_media(
            agenda.items.front().topic, config.flags, rng, tick);
        if (media_report) {
            world.perceived_welfare += media_report->welfare_perception_shift;
            Utterance media_utterance;
            media_utterance.speaker_id = society.agents[society.media].persona.name;
            media_utterance.tick = tick;
            media_utterance.channel = Channel::media_report;
            media_utterance.text = media_report->text;
            media_utterance.stage_at_emission = society.agents[society.media].stage;
            process_utterance(std::move(media_utterance), tick_weight);
            log.emit(tick, "media",
                     json{{"text", media_report->text},
                          {"slant", media_report->slant},
                          {"perception_shift", media_report->welfare_perception_shift}});
        }

        // --- elections -----------------------------------------------------------
        if (std::find(config.election_schedule.begin(), config.election_schedule.end(),
                      tick) != config.election_schedule.end()) {
            json payload;
            hold_election(society, config, params, world, rng, payload);
            log.emit(tick, "election", std::move(payload));
        }

        // --- metrics snapshot ------------------------------------------------------
        snapshot_metrics(tick, tick_weight, utterance_count - tick_utterances_before,
                         tick_enacted);
        world_series.push_back(world);
    }

    metrics::MetricsReport report;
    report.ppi = utterance_count > 0
                     ? metrics::compute_ppi_from_weight(total_tag_weight, utterance_count)
                     : 0.0;
    report.policy_stability =
        metrics::compute_policy_stability(metrics::build_policy_records(enactments));
    report.citizen_welfare_delta = metrics::compute_welfare_delta(world_series);
    report.polarization = series_polarization.empty() ? 0.0 : series_polarization.back();
    report.policies_enacted = static_cast<int>(enactments.size());
    report.per_tick_series["ppi"] = series_ppi;
    report.per_tick_series["polarization"] = series_polarization;
    report.per_tick_series["welfare_mean"] = series_welfare;
    report.per_tick_series["policies_enacted"] = series_enacted;
    report.per_tick_series["mean_stress"] = series_stress;

    log.emit(config.total_ticks, "metrics",
             json{{"final", true},
                  {"cell", config.cell_name()},
                  {"seed", config.seed},
                  {"report", report_to_json(report)}});

    return {std::move(report), std::move(log.lines)};
}

metrics::MetricsReport replay(const std::vector<std::string>& log_lines) {
    double total_tag_weight = 0.0;
    std::size_t utterance_count = 0;
    std::vector<metrics::Enactment> enactments;
    std::map<int, double> tick_weight;
    std::map<int, std::size_t> tick_utterances;
    std::map<int, int> tick_enacted;
    struct Snapshot {
        std::vector<double> core_ideologies;
        double core_stress_sum = 0.0;
        std::size_t core_count = 0;
        std::array<double, stressors::kWelfareDims> welfare = {0, 0, 0, 0};
    };
    std::map<int, Snapshot> snapshots;
    int max_tick = 0;

    for (const auto& line : log_lines) {
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(Errc::parse_error, "log", e.what());
        }
        const int tick = rec.at("tick").get<int>();
        const std::string kind = rec.at("kind").get<std::string>();
        const json& payload = rec.at("payload");
        max_tick = std::max(max_tick, tick);

        if (kind == "utterance") {
            ++utterance_count;
            ++tick_utterances[tick];
        } else if (kind == "tag") {
            const double w = tagger::severity_weight(
                tagger::severity_from_name(payload.at("severity").get<std::string>()));
            total_tag_weight += w;
            tick_weight[tick] += w;
        } else if (kind == "ruling" && payload.at("type") == "bill" &&
                   payload.at("enacted").get<bool>()) {
            metrics::Enactment e;
            e.bill_id = payload.at("bill_id").get<int>();
            e.tick = tick;
            const auto& vec = payload.at("policy_vector");
            for (int d = 0; d < kPolicyDims; ++d) e.policy_vector[d] = vec[d].get<double>();
            enactments.push_back(e);
            ++tick_enacted[tick];
        } else if (kind == "metrics" && !payload.contains("final")) {
            Snapshot snap;
            for (const auto& agent : payload.at("agents")) {
                if (!agent.at("core").get<bool>()) continue;
                snap.core_ideologies.push_back(agent.at("ideology").get<double>());
                snap.core_stress_sum += agent.at("stress").get<double>();
                ++snap.core_count;
            }
            const auto& welfare = payload.at("world").at("welfare");
            for (int d = 0; d < stressors::kWelfareDims; ++d) {
                snap.welfare[d] = welfare[d].get<double>();
            }
            snapshots[tick] = std::move(snap);
        }
    }

    metrics::MetricsReport report;
    report.ppi = utterance_count > 0
                     ? metrics::compute_ppi_from_weight(total_tag_weight, utterance_count)
                     : 0.0;
    report.policy_stability =
        metrics::compute_policy_stability(metrics::build_policy_records(enactments));
    report.policies_enacted = static_cast<int>(enactments.size());

    std::vector<double> series_ppi, series_polarization, series_welfare, series_enacted,
        series_stress;
    for (int tick = 1; tick <= max_tick; ++tick) {
        const auto ut = tick_utterances.count(tick) ? tick_utterances[tick] : 0;
        series_ppi.push_back(
            ut > 0 ? metrics::compute_ppi_from_weight(tick_weight[tick], ut) : 0.0);
        auto it = snapshots.find(tick);
        if (it != snapshots.end()) {
            series_polarization.push_back(
                metrics::compute_polarization(it->second.core_ideologies));
            double welfare_mean = 0.0;
            for (int d = 0; d < stressors::kWelfareDims; ++d) {
                welfare_mean += it->second.welfare[d];
            }
            series_welfare.push_back(welfare_mean / stressors::kWelfareDims);
            series_stress.push_back(it->second.core_stress_sum /
                                    static_cast<double>(it->second.core_count));
        }
        series_enacted.push_back(
            static_cast<double>(tick_enacted.count(tick) ? tick_enacted[tick] : 0));
    }
    report.polarization = series_polarization.empty() ? 0.0 : series_polarization.back();
    if (!snapshots.empty()) {
        const auto& last = snapshots.rbegin()->second;
        double sum = 0.0;
        for (int d = 0; d < stressors::kWelfareDims; ++d) sum += last.welfare[d];
        report.citizen_welfare_delta = sum / stressors::kWelfareDims;
    }
    report.per_tick_series["ppi"] = series_ppi;
    report.per_tick_series["polarization"] = series_polarization;
    report.per_tick_series["welfare_mean"] = series_welfare;
    report.per_tick_series["policies_enacted"] = series_enacted;
    report.per_tick_series["mean_stress"] = series_stress;
    return report;
}

GridResult run_grid(const std::vector<RunConfig>& configs,
                    const std::vector<Persona>& personas, int parallelism,
                    const EngineParams& params) {
    GridResult grid;
    grid.configs = configs;
    grid.runs.resize(configs.size());

    const int workers = std::max(1, std::min<int>(parallelism,
                                                  static_cast<int>(configs.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            grid.runs[i] = run_simulation(configs[i], personas, params);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= configs.size()) return;
                    grid.runs[i] = run_simulation(configs[i], personas, params);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    grid.cells = aggregate_cells(grid.configs, grid.runs);
    return grid;
}

std::vector<CellSummary> aggregate_cells(const std::vector<RunConfig>& configs,
                                         const std::vector<RunResult>& runs) {
    std::vector<std::string> cell_order;
    std::map<std::string, CellSummary> by_cell;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const std::string cell = configs[i].cell_name();
        if (!by_cell.count(cell)) {
            cell_order.push_back(cell);
            by_cell[cell].cell = cell;
        }
        auto& summary = by_cell[cell];
        ++summary.seeds;
        summary.reports.push_back(runs[i].report);
    }
    const auto mean_sd = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= n;
        double var = 0.0;
        if (xs.size() > 1) {
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= (n - 1.0);
        }
        return std::make_pair(mean, std::sqrt(var));
    };
    std::vector<CellSummary> cells;
    for (const auto& cell : cell_order) {
        auto& summary = by_cell[cell];
        std::vector<double> ppi, stability, welfare, polarization, enacted;
        for (const auto& r : summary.reports) {
            ppi.push_back(r.ppi);
            stability.push_back(r.policy_stability);
            welfare.push_back(r.citizen_welfare_delta);
            polarization.push_back(r.polarization);
            enacted.push_back(static_cast<double>(r.policies_enacted));
        }
        summary.stats["ppi"] = mean_sd(ppi);
        summary.stats["policy_stability"] = mean_sd(stability);
        summary.stats["citizen_welfare_delta"] = mean_sd(welfare);
        summary.stats["polarization"] = mean_sd(polarization);
        summary.stats["policies_enacted"] = mean_sd(enacted);
        cells.push_back(std::move(summary));
    }
    return cells;
}

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

const char* kMetricOrder[] = {"ppi", "policy_stability", "citizen_welfare_delta",
                              "polarization", "policies_enacted"};

} // namespace

std::string grid_csv(const GridResult& grid) {
    std::string out =
        "electoral_system,constitution,deliberation,seeds,ppi_mean,ppi_sd,"
        "policy_stability_mean,policy_stability_sd,citizen_welfare_delta_mean,"
        "citizen_welfare_delta_sd,polarization_mean,polarization_sd,"
        "policies_enacted_mean,policies_enacted_sd\n";
    for (const auto& cell : grid.cells) {
        // cell name is axis1+axis2+axis3
        std::string name = cell.cell;
        std::replace(name.begin(), name.end(), '+', ',');
        out += name;
        out += ',';
        out += std::to_string(cell.seeds);
        for (const char* metric : kMetricOrder) {
            const auto& [mean, sd] = cell.stats.at(metric);
            out += ',';
            out += fmt6(mean);
            out += ',';
            out += fmt6(sd);
        }
        out += '\n';
    }
    return out;
}

std::string grid_markdown(const GridResult& grid) {
    std::string out = "| Metric |";
    for (const auto& cell : grid.cells) {
        out += ' ';
        out += cell.cell;
        out += " |";
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < grid.cells.size(); ++i) out += "---|";
    out += '\n';
    for (const char* metric : kMetricOrder) {
        out += "| ";
        out += metric;
        out += " |";
        for (const auto& cell : grid.cells) {
            const auto& [mean, sd] = cell.stats.at(metric);
            out += ' ';
            out += fmt6(mean);
            out += " ± ";
            out += fmt6(sd);
            out += " |";
        }
        out += '\n';
    }
    return out;
}

} // namespace polisim::engine
