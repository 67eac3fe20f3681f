// polisim command line: grid runner, transcript tagger, report aggregator.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "polisim/config.hpp"
#include "polisim/engine.hpp"
#include "polisim/errors.hpp"
#include "polisim/llm_adapter.hpp"
#include "polisim/metrics.hpp"
#include "polisim/personas.hpp"
#include "polisim/tagger.hpp"

namespace fs = std::filesystem;
using namespace polisim;

namespace {

#ifndef POLISIM_DATA_DIR
#define POLISIM_DATA_DIR "data"
#endif

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, path.string(), "cannot open");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, path.string(), "cannot write");
    out << content;
}

int cmd_run(const std::string& grid_path, const std::string& flags_path,
            const std::string& out_dir, const std::string& personas_path,
            const std::string& cell_filter, long long seed_override,
            const std::string& backend_name, int parallel) {
    const auto grid = parse_experiment_grid(read_file(grid_path));
    const auto flags = parse_flags(read_file(flags_path), FlagsParseMode::strict);
    const auto personas = load_personas(read_file(personas_path));

    auto configs = expand_grid(grid, flags);
    if (!cell_filter.empty()) {
        std::erase_if(configs, [&](const RunConfig& c) {
            return c.cell_name() != cell_filter;
        });
        if (configs.empty()) {
            std::cerr << "no grid cell matches '" << cell_filter << "'\n";
            return 2;
        }
    }
    if (seed_override >= 0) {
        // Keep one run per cell, at the requested seed.
        std::vector<RunConfig> filtered;
        for (auto& c : configs) {
            if (c.seed == 0 || configs.size() == 1) {
                c.seed = static_cast<std::uint64_t>(seed_override);
                filtered.push_back(c);
            }
        }
        std::vector<RunConfig> unique;
        for (const auto& c : filtered) {
            bool seen = false;
            for (const auto& u : unique) {
                if (u.run_name() == c.run_name()) seen = true;
            }
            if (!seen) unique.push_back(c);
        }
        configs = std::move(unique);
    }

    std::unique_ptr<llm::Transport> transport;
    std::unique_ptr<llm::LlmBackend> llm_backend;
    AgentBackend* backend_override = nullptr;
    if (backend_name == "llm") {
        const char* endpoint = std::getenv("POLISIM_LLM_ENDPOINT");
        if (!endpoint || !*endpoint) {
            std::cerr << "backend 'llm' requires POLISIM_LLM_ENDPOINT "
                         "(and optionally POLISIM_LLM_API_KEY)\n";
            return 2;
        }
        const char* key = std::getenv("POLISIM_LLM_API_KEY");
        llm_backend = std::make_unique<llm::LlmBackend>(
            llm::make_http_transport(endpoint, key ? key : ""));
        backend_override = llm_backend.get();
        if (parallel > 1) {
            std::cerr << "note: llm backend runs sequentially\n";
            parallel = 1;
        }
    }

    fs::create_directories(out_dir);
    engine::GridResult result;
    if (backend_override) {
        // External backend: share one adapter across sequential runs.
        result.configs = configs;
        for (const auto& config : configs) {
            result.runs.push_back(
                engine::run_simulation(config, personas, {}, backend_override));
        }
        result = engine::run_grid(configs, personas, 1); // aggregation only
    } else {
        result = engine::run_grid(configs, personas, parallel);
    }

    for (std::size_t i = 0; i < result.configs.size(); ++i) {
        std::string content;
        for (const auto& line : result.runs[i].log_lines) {
            content += line;
            content += '\n';
        }
        write_file(fs::path(out_dir) / (result.configs[i].run_name() + ".jsonl"),
                   content);
    }
    write_file(fs::path(out_dir) / "grid_summary.csv", engine::grid_csv(result));

    std::cout << grid_markdown(result);
    std::cout << "\n" << result.configs.size() << " run(s) written to " << out_dir
              << "\n";
    return 0;
}

int cmd_tag(const std::string& rules_path, const std::string& in_path) {
    const auto rules = rules_path.empty()
                           ? tagger::default_rules()
                           : tagger::load_rules(read_file(rules_path));
    std::ifstream in(in_path);
    if (!in) throw Error(Errc::io_error, in_path, "cannot open");
    std::string line;
    std::int64_t line_no = 0;
    double total_weight = 0.0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++count;
        for (const auto& event : tagger::tag_utterance(line, rules, line_no)) {
            total_weight += tagger::severity_weight(event.severity);
            std::cout << line_no << '\t' << tagger::category_name(event.category) << '\t'
                      << tagger::severity_name(event.severity) << '\t'
                      << event.matched_pattern << '\t' << event.span_begin << ':'
                      << event.span_end << '\n';
        }
    }
    if (count > 0) {
        std::cout << "# utterances=" << count
                  << " ppi=" << metrics::compute_ppi_from_weight(total_weight, count)
                  << '\n';
    }
    return 0;
}

int cmd_report(const std::string& runs_dir, const std::string& format) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(runs_dir)) {
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "no .jsonl run logs under " << runs_dir << "\n";
        return 2;
    }

    // Rebuild a grid result from the logs: cell and seed come from the final
    // metrics record of each log.
    engine::GridResult grid;
    for (const auto& file : files) {
        std::ifstream in(file);
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) lines.push_back(line);
        }
        const auto report = engine::replay(lines);
        // Parse the trailing final record for the cell axes.
        RunConfig config;
        for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
            const auto rec = nlohmann::json::parse(*it);
            if (rec.at("kind") != "metrics" || !rec.at("payload").contains("final")) {
                continue;
            }
            const std::string cell = rec.at("payload").at("cell").get<std::string>();
            const auto p1 = cell.find('+');
            const auto p2 = cell.find('+', p1 + 1);
            config.electoral_system = electoral_system_from_name(cell.substr(0, p1));
            config.constitution =
                constitution_from_name(cell.substr(p1 + 1, p2 - p1 - 1));
            config.deliberation = deliberation_from_name(cell.substr(p2 + 1));
            config.seed = rec.at("payload").at("seed").get<std::uint64_t>();
            break;
        }
        grid.configs.push_back(config);
        engine::RunResult run;
        run.report = report;
        grid.runs.push_back(std::move(run));
    }
    // Reuse the aggregation path by re-running the summary logic.
    std::vector<std::string> cell_order;
    std::map<std::string, engine::CellSummary> by_cell;
    for (std::size_t i = 0; i < grid.configs.size(); ++i) {
        const std::string cell = grid.configs[i].cell_name();
        if (!by_cell.count(cell)) {
            cell_order.push_back(cell);
            by_cell[cell].cell = cell;
        }
        ++by_cell[cell].seeds;
        by_cell[cell].reports.push_back(grid.runs[i].report);
    }
    const auto mean_sd = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        if (xs.size() > 1) {
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= static_cast<double>(xs.size() - 1);
        }
        return std::make_pair(mean, std::sqrt(var));
    };
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
        grid.cells.push_back(summary);
    }

    if (format == "csv") {
        std::cout << engine::grid_csv(grid);
    } else {
        std::cout << engine::grid_markdown(grid);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polisim - deterministic agent-polity simulator"};
    app.require_subcommand(1);

    const std::string data_dir = POLISIM_DATA_DIR;

    auto* run = app.add_subcommand("run", "expand a grid file and execute runs");
    std::string grid_path = data_dir + "/grid.yml";
    std::string flags_path = data_dir + "/flags.txt";
    std::string personas_path = data_dir + "/personas.json";
    std::string out_dir = "runs";
    std::string cell;
    long long seed = -1;
    std::string backend = "scripted";
    int parallel = 1;
    run->add_option("--grid", grid_path, "experiment grid file");
    run->add_option("--flags", flags_path, "stochasticity flags file");
    run->add_option("--personas", personas_path, "persona fixture file");
    run->add_option("--out", out_dir, "output directory for logs and summary");
    run->add_option("--cell", cell, "run a single cell, e.g. FPTP+cai_charter+free_debate");
    run->add_option("--seed", seed, "run each selected cell once with this seed");
    run->add_option("--backend", backend, "scripted|llm")
        ->check(CLI::IsMember({"scripted", "llm"}));
    run->add_option("--parallel", parallel, "worker threads across runs")
        ->check(CLI::PositiveNumber);

    auto* tag = app.add_subcommand("tag", "tag a transcript file (one utterance per line)");
    std::string rules_path;
    std::string in_path;
    tag->add_option("--rules", rules_path, "rule table (default: built-in)");
    tag->add_option("--in", in_path, "transcript file")->required();

    auto* report = app.add_subcommand("report", "aggregate run logs into a summary");
    std::string runs_dir;
    std::string format = "md";
    report->add_option("--runs", runs_dir, "directory of .jsonl run logs")->required();
    report->add_option("--format", format, "csv|md")
        ->check(CLI::IsMember({"csv", "md"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(grid_path, flags_path, out_dir, personas_path, cell, seed,
                           backend, parallel);
        }
        if (tag->parsed()) return cmd_tag(rules_path, in_path);
        if (report->parsed()) return cmd_report(runs_dir, format);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
