#include "polisim/config.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "polisim/errors.hpp"

namespace polisim {

namespace {

// ---------------------------------------------------------------------------
// Minimal indentation-sectioned document reader for the two config layouts.
// Supports `key: value`, `key:` section headers, inline `[a, b, c]` lists,
// quoted `- "item"` block lists and `#` comments. Not a YAML implementation.
// ---------------------------------------------------------------------------

struct Document {
    std::map<std::string, std::string> scalars;
    std::map<std::string, std::vector<std::string>> lists;
    std::vector<std::string> order; // paths in file order, for diagnostics
};

std::string strip_comment(const std::string& line) {
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quote = !in_quote;
        if (line[i] == '#' && !in_quote) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string> parse_inline_list(const std::string& raw, const std::string& key) {
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
        throw Error(Errc::malformed_value, key, raw);
    }
    std::vector<std::string> items;
    std::string inner = raw.substr(1, raw.size() - 2);
    std::stringstream in(inner);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw Error(Errc::malformed_value, key, raw);
        items.push_back(unquote(item));
    }
    return items;
}

Document parse_document(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string raw;
    // (indent, name) stack of open sections; the innermost may be an open
    // block-list key.
    std::vector<std::pair<int, std::string>> stack;
    std::string open_list_path;
    int open_list_indent = -1;

    while (std::getline(in, raw)) {
        std::string line = strip_comment(raw);
        const std::string content = trim(line);
        if (content.empty()) continue;
        int indent = 0;
        while (indent < static_cast<int>(line.size()) && line[indent] == ' ') ++indent;

        if (content.rfind("- ", 0) == 0 || content == "-") {
            if (open_list_path.empty() || indent <= open_list_indent) {
                throw Error(Errc::malformed_value, content, "list item outside a list");
            }
            const std::string item = trim(content.substr(1));
            if (item.empty()) {
                throw Error(Errc::malformed_value, open_list_path, "empty list item");
            }
            doc.lists[open_list_path].push_back(unquote(item));
            continue;
        }

        const auto colon = content.find(':');
        if (colon == std::string::npos) {
            throw Error(Errc::malformed_value, content, "expected key: value");
        }
        const std::string key = trim(content.substr(0, colon));
        const std::string value = trim(content.substr(colon + 1));
        if (key.empty()) throw Error(Errc::malformed_value, content, "empty key");

        while (!stack.empty() && stack.back().first >= indent) stack.pop_back();
        open_list_path.clear();
        open_list_indent = -1;

        std::string path;
        for (const auto& [ind, name] : stack) {
            path += name;
            path += '.';
        }
        path += key;

        if (value.empty()) {
            // Section header or block-list key: resolved by what follows.
            stack.emplace_back(indent, key);
            open_list_path = path;
            open_list_indent = indent;
            doc.order.push_back(path);
        } else if (!value.empty() && value.front() == '[') {
            doc.lists[path] = parse_inline_list(value, key);
            doc.order.push_back(path);
        } else {
            doc.scalars[path] = unquote(value);
            doc.order.push_back(path);
        }
    }
    return doc;
}

int to_int(const std::string& raw, const std::string& key) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(raw, &pos);
    } catch (const std::exception&) {
        throw Error(Errc::malformed_value, key, raw);
    }
    if (pos != raw.size()) throw Error(Errc::malformed_value, key, raw);
    return v;
}

double to_real(const std::string& raw, const std::string& key) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(raw, &pos);
    } catch (const std::exception&) {
        throw Error(Errc::malformed_value, key, raw);
    }
    if (pos != raw.size()) throw Error(Errc::malformed_value, key, raw);
    return v;
}

bool to_bool(const std::string& raw, const std::string& key) {
    if (raw == "true") return true;
    if (raw == "false") return false;
    throw Error(Errc::malformed_value, key, raw);
}

const char* kElectoralNames[] = {"FPTP", "PR_DHondt", "RCV"};
const char* kConstitutionNames[] = {"minimal_charter", "cai_charter"};
const char* kDeliberationNames[] = {"free_debate", "mediated_consensus"};

} // namespace

const char* electoral_system_name(ElectoralSystem s) {
    return kElectoralNames[static_cast<int>(s)];
}

ElectoralSystem electoral_system_from_name(const std::string& name) {
    for (int i = 0; i < 3; ++i) {
        if (name == kElectoralNames[i]) return static_cast<ElectoralSystem>(i);
    }
    throw Error(Errc::malformed_value, "electoral_system", name);
}

const char* constitution_name(Constitution c) {
    return kConstitutionNames[static_cast<int>(c)];
}

Constitution constitution_from_name(const std::string& name) {
    for (int i = 0; i < 2; ++i) {
        if (name == kConstitutionNames[i]) return static_cast<Constitution>(i);
    }
    throw Error(Errc::malformed_value, "constitution", name);
}

const char* deliberation_name(DeliberationProtocol d) {
    return kDeliberationNames[static_cast<int>(d)];
}

DeliberationProtocol deliberation_from_name(const std::string& name) {
    for (int i = 0; i < 2; ++i) {
        if (name == kDeliberationNames[i]) return static_cast<DeliberationProtocol>(i);
    }
    throw Error(Errc::malformed_value, "deliberation", name);
}

std::string RunConfig::cell_name() const {
    std::string out = electoral_system_name(electoral_system);
    out += '+';
    out += constitution_name(constitution);
    out += '+';
    out += deliberation_name(deliberation);
    return out;
}

std::string RunConfig::run_name() const {
    return cell_name() + "_seed" + std::to_string(seed);
}

ExperimentGrid parse_experiment_grid(const std::string& text) {
    const Document doc = parse_document(text);

    static const std::set<std::string> known = {
        "experiment_name",
        "grid",
        "grid.electoral_system",
        "grid.constitution",
        "grid.deliberation",
        "parameters",
        "parameters.seeds_per_cell",
        "parameters.total_ticks",
        "parameters.population_size",
        "parameters.election_schedule",
        "parameters.stressor_rotation",
    };
    for (const auto& path : doc.order) {
        if (!known.count(path)) throw Error(Errc::malformed_value, path, "unknown key");
    }

    const auto scalar = [&](const std::string& path) -> const std::string& {
        auto it = doc.scalars.find(path);
        if (it == doc.scalars.end()) {
            const auto dot = path.rfind('.');
            throw Error(Errc::missing_key,
                        dot == std::string::npos ? path : path.substr(dot + 1), "");
        }
        return it->second;
    };
    const auto list = [&](const std::string& path) -> const std::vector<std::string>& {
        auto it = doc.lists.find(path);
        if (it == doc.lists.end() || it->second.empty()) {
            const auto dot = path.rfind('.');
            throw Error(Errc::missing_key,
                        dot == std::string::npos ? path : path.substr(dot + 1), "");
        }
        return it->second;
    };

    ExperimentGrid grid;
    grid.experiment_name = scalar("experiment_name");
    for (const auto& v : list("grid.electoral_system")) {
        grid.electoral_systems.push_back(electoral_system_from_name(v));
    }
    for (const auto& v : list("grid.constitution")) {
        grid.constitutions.push_back(constitution_from_name(v));
    }
    for (const auto& v : list("grid.deliberation")) {
        grid.deliberations.push_back(deliberation_from_name(v));
    }
    grid.seeds_per_cell = to_int(scalar("parameters.seeds_per_cell"), "seeds_per_cell");
    grid.total_ticks = to_int(scalar("parameters.total_ticks"), "total_ticks");
    grid.population_size =
        to_int(scalar("parameters.population_size"), "population_size");
    for (const auto& v : list("parameters.election_schedule")) {
        grid.election_schedule.push_back(to_int(v, "election_schedule"));
    }
    grid.stressor_rotation = list("parameters.stressor_rotation");

    if (grid.seeds_per_cell < 1) {
        throw Error(Errc::out_of_range, "seeds_per_cell", "must be >= 1");
    }
    if (grid.total_ticks < 1) {
        throw Error(Errc::out_of_range, "total_ticks", "must be >= 1");
    }
    if (grid.population_size < 1) {
        throw Error(Errc::out_of_range, "population_size", "must be >= 1");
    }
    for (int tick : grid.election_schedule) {
        if (tick < 1 || tick > grid.total_ticks) {
            throw Error(Errc::out_of_range, "election_schedule",
                        std::to_string(tick) + " outside [1, total_ticks]");
        }
    }
    return grid;
}

std::string serialize_experiment_grid(const ExperimentGrid& grid) {
    std::ostringstream out;
    out << "experiment_name: " << grid.experiment_name << "\n";
    out << "grid:\n";
    const auto join = [](auto items, auto name_fn) {
        std::string s = "[";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) s += ", ";
            s += name_fn(items[i]);
        }
        s += "]";
        return s;
    };
    out << "  electoral_system: " << join(grid.electoral_systems, electoral_system_name)
        << "\n";
    out << "  constitution: " << join(grid.constitutions, constitution_name) << "\n";
    out << "  deliberation: " << join(grid.deliberations, deliberation_name) << "\n";
    out << "parameters:\n";
    out << "  seeds_per_cell: " << grid.seeds_per_cell << "\n";
    out << "  total_ticks: " << grid.total_ticks << "\n";
    out << "  population_size: " << grid.population_size << "\n";
    out << "  election_schedule: "
        << join(grid.election_schedule, [](int t) { return std::to_string(t); }) << "\n";
    out << "  stressor_rotation:\n";
    for (const auto& r : grid.stressor_rotation) {
        out << "    - \"" << r << "\"\n";
    }
    return out.str();
}

StochasticityFlags parse_flags(const std::string& text, FlagsParseMode mode) {
    const Document doc = parse_document(text);

    struct Key {
        const char* path;
        const char* name;
    };
    static const Key keys[] = {
        {"stochasticity.decision_noise_sd", "decision_noise_sd"},
        {"stochasticity.preference_drift_sd", "preference_drift_sd"},
        {"stochasticity.agenda_noise_p", "agenda_noise_p"},
        {"stochasticity.tie_break_tau", "tie_break_tau"},
        {"stressors.escalate_probability", "escalate_probability"},
        {"institutions.pr_coalitions_enabled", "pr_coalitions_enabled"},
        {"institutions.rcv_transfer_loss", "rcv_transfer_loss"},
        {"institutions.fptp_malapportionment_sd", "fptp_malapportionment_sd"},
        {"deliberation.mediator_strength", "mediator_strength"},
        {"deliberation.media_effect_enabled", "media_effect_enabled"},
        {"deliberation.media_bias_sd", "media_bias_sd"},
    };

    std::set<std::string> known = {"stochasticity", "stressors", "institutions",
                                   "deliberation"};
    for (const auto& k : keys) known.insert(k.path);
    for (const auto& path : doc.order) {
        if (!known.count(path)) throw Error(Errc::malformed_value, path, "unknown key");
    }

    StochasticityFlags flags; // defaults
    const auto lookup = [&](const char* path, const char* name) -> const std::string* {
        auto it = doc.scalars.find(path);
        if (it != doc.scalars.end()) return &it->second;
        if (mode == FlagsParseMode::strict) throw Error(Errc::missing_key, name, "");
        return nullptr;
    };

    if (const auto* v = lookup(keys[0].path, keys[0].name))
        flags.decision_noise_sd = to_real(*v, keys[0].name);
    if (const auto* v = lookup(keys[1].path, keys[1].name))
        flags.preference_drift_sd = to_real(*v, keys[1].name);
    if (const auto* v = lookup(keys[2].path, keys[2].name))
        flags.agenda_noise_p = to_real(*v, keys[2].name);
    if (const auto* v = lookup(keys[3].path, keys[3].name))
        flags.tie_break_tau = to_real(*v, keys[3].name);
    if (const auto* v = lookup(keys[4].path, keys[4].name))
        flags.escalate_probability = to_real(*v, keys[4].name);
    if (const auto* v = lookup(keys[5].path, keys[5].name))
        flags.pr_coalitions_enabled = to_bool(*v, keys[5].name);
    if (const auto* v = lookup(keys[6].path, keys[6].name))
        flags.rcv_transfer_loss = to_real(*v, keys[6].name);
    if (const auto* v = lookup(keys[7].path, keys[7].name))
        flags.fptp_malapportionment_sd = to_real(*v, keys[7].name);
    if (const auto* v = lookup(keys[8].path, keys[8].name))
        flags.mediator_strength = to_real(*v, keys[8].name);
    if (const auto* v = lookup(keys[9].path, keys[9].name))
        flags.media_effect_enabled = to_bool(*v, keys[9].name);
    if (const auto* v = lookup(keys[10].path, keys[10].name))
        flags.media_bias_sd = to_real(*v, keys[10].name);

    const auto check_prob = [](double v, const char* name) {
        if (v < 0.0 || v > 1.0) throw Error(Errc::out_of_range, name, "not in [0,1]");
    };
    const auto check_nonneg = [](double v, const char* name) {
        if (v < 0.0) throw Error(Errc::out_of_range, name, "must be >= 0");
    };
    check_prob(flags.agenda_noise_p, "agenda_noise_p");
    check_prob(flags.escalate_probability, "escalate_probability");
    check_prob(flags.rcv_transfer_loss, "rcv_transfer_loss");
    check_prob(flags.mediator_strength, "mediator_strength");
    check_nonneg(flags.decision_noise_sd, "decision_noise_sd");
    check_nonneg(flags.preference_drift_sd, "preference_drift_sd");
    check_nonneg(flags.fptp_malapportionment_sd, "fptp_malapportionment_sd");
    check_nonneg(flags.media_bias_sd, "media_bias_sd");
    if (flags.tie_break_tau <= 0.0) {
        throw Error(Errc::out_of_range, "tie_break_tau", "must be > 0");
    }
    return flags;
}

std::string serialize_flags(const StochasticityFlags& f) {
    std::ostringstream out;
    out.precision(17);
    out << "stochasticity:\n";
    out << "  decision_noise_sd: " << f.decision_noise_sd << "\n";
    out << "  preference_drift_sd: " << f.preference_drift_sd << "\n";
    out << "  agenda_noise_p: " << f.agenda_noise_p << "\n";
    out << "  tie_break_tau: " << f.tie_break_tau << "\n";
    out << "stressors:\n";
    out << "  escalate_probability: " << f.escalate_probability << "\n";
    out << "institutions:\n";
    out << "  pr_coalitions_enabled: " << (f.pr_coalitions_enabled ? "true" : "false")
        << "\n";
    out << "  rcv_transfer_loss: " << f.rcv_transfer_loss << "\n";
    out << "  fptp_malapportionment_sd: " << f.fptp_malapportionment_sd << "\n";
    out << "deliberation:\n";
    out << "  mediator_strength: " << f.mediator_strength << "\n";
    out << "  media_effect_enabled: " << (f.media_effect_enabled ? "true" : "false")
        << "\n";
    out << "  media_bias_sd: " << f.media_bias_sd << "\n";
    return out.str();
}

std::vector<RunConfig> expand_grid(const ExperimentGrid& grid,
                                   const StochasticityFlags& flags) {
    if (grid.stressor_rotation.empty()) {
        throw Error(Errc::missing_key, "stressor_rotation", "");
    }
    // Parse each rotation entry once; entries are assigned per seed.
    std::vector<std::vector<stressors::ScheduleEntry>> schedules;
    for (const auto& spec : grid.stressor_rotation) {
        auto schedule = stressors::parse_schedule(spec);
        for (const auto& entry : schedule) {
            if (entry.tick < 1 || entry.tick > grid.total_ticks) {
                throw Error(Errc::out_of_range, "stressor_rotation",
                            std::to_string(entry.tick) + " outside [1, total_ticks]");
            }
        }
        schedules.push_back(std::move(schedule));
    }

    std::vector<RunConfig> runs;
    runs.reserve(grid.electoral_systems.size() * grid.constitutions.size() *
                 grid.deliberations.size() * grid.seeds_per_cell);
    for (ElectoralSystem es : grid.electoral_systems) {
        for (Constitution c : grid.constitutions) {
            for (DeliberationProtocol d : grid.deliberations) {
                for (int seed = 0; seed < grid.seeds_per_cell; ++seed) {
                    RunConfig run;
                    run.electoral_system = es;
                    run.constitution = c;
                    run.deliberation = d;
                    run.seed = static_cast<std::uint64_t>(seed);
                    run.flags = flags;
                    run.stressor_schedule = schedules[seed % schedules.size()];
                    run.total_ticks = grid.total_ticks;
                    run.population_size = grid.population_size;
                    run.election_schedule = grid.election_schedule;
                    runs.push_back(std::move(run));
                }
            }
        }
    }
    return runs;
}

bool operator==(const ExperimentGrid& a, const ExperimentGrid& b) {
    return a.experiment_name == b.experiment_name &&
           a.electoral_systems == b.electoral_systems &&
           a.constitutions == b.constitutions && a.deliberations == b.deliberations &&
           a.seeds_per_cell == b.seeds_per_cell && a.total_ticks == b.total_ticks &&
           a.population_size == b.population_size &&
           a.election_schedule == b.election_schedule &&
           a.stressor_rotation == b.stressor_rotation;
}

bool operator==(const StochasticityFlags& a, const StochasticityFlags& b) {
    return a.decision_noise_sd == b.decision_noise_sd &&
           a.preference_drift_sd == b.preference_drift_sd &&
           a.agenda_noise_p == b.agenda_noise_p && a.tie_break_tau == b.tie_break_tau &&
           a.escalate_probability == b.escalate_probability &&
           a.pr_coalitions_enabled == b.pr_coalitions_enabled &&
           a.rcv_transfer_loss == b.rcv_transfer_loss &&
           a.fptp_malapportionment_sd == b.fptp_malapportionment_sd &&
           a.mediator_strength == b.mediator_strength &&
           a.media_effect_enabled == b.media_effect_enabled &&
           a.media_bias_sd == b.media_bias_sd;
}

} // namespace polisim
