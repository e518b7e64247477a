#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "phgame/checks.hpp"
#include "phgame/errors.hpp"
#include "phgame/run.hpp"
#include "phgame/scenario.hpp"

namespace fs = std::filesystem;
using namespace phgame;

namespace {

enum Exit : int {
    kOk = 0,
    kCheckFailed = 1,
    kInvalid = 2,
    kNotConverged = 3,
    kDomain = 4,
};

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_max;
    std::optional<double> tol_p;
    std::optional<double> tol_f;
    std::optional<double> tol_gradient;
};

Scenario load(const std::string& name, const Overrides& o) {
    Scenario s = resolve_scenario(name);
    if (o.dt) s.simulation.dt = *o.dt;
    if (o.t_max) s.simulation.t_max = *o.t_max;
    if (o.tol_p) s.simulation.tolerances.momentum = *o.tol_p;
    if (o.tol_f) s.simulation.tolerances.force = *o.tol_f;
    if (o.tol_gradient) s.certification.gradient = *o.tol_gradient;
    if (o.dt && s.simulation.dt_min > s.simulation.dt) s.simulation.dt_min = s.simulation.dt;
    validate_scenario(s);
    return s;
}

int exit_code(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::converged: return kOk;
        case TerminationReason::t_max_reached: return kNotConverged;
        case TerminationReason::domain_violation:
        case TerminationReason::singular_configuration: return kDomain;
    }
    return kDomain;
}

void print_check(const CheckReport& report) {
    for (const auto& p : report.properties) {
        const char* status = p.informational ? "info" : (p.passed ? "PASS" : "FAIL");
        std::printf("  %-34s %-4s worst=%.3e tol=%.1e n=%zu%s%s\n", p.name.c_str(), status, p.worst, p.tolerance,
                    p.samples, p.note.empty() ? "" : "  # ", p.note.c_str());
    }
}

struct RunJob {
    std::string name;
    std::string output;
    int code = kOk;
};

RunJob run_one(const std::string& name, const Overrides& overrides, const fs::path& out_root,
               const std::optional<CheckSuite>& checks) {
    RunJob job{name, {}, kOk};
    char line[512];
    try {
        const Scenario s = load(name, overrides);
        const fs::path dir = out_root / s.name;
        const RunArtifacts a = run(s, dir);
        std::snprintf(line, sizeof line,
                      "%s: %s at t=%.4g  H=%.6e  |F|=%.3e  verdict=%s  steps=%zu  wall=%.2fs\n  -> %s\n",
                      s.name.c_str(), std::string(to_string(a.summary.reason)).c_str(), a.summary.final_time,
                      a.summary.final_hamiltonian, a.summary.final_pseudo_gradient_norm, a.summary.verdict.c_str(),
                      a.summary.steps, a.summary.wall_time_seconds, dir.string().c_str());
        job.output = line;
        if (!a.summary.diagnostic.empty()) {
            job.output += "  " + a.summary.diagnostic + "\n";
        }
        if (a.report.alternative_equilibrium) {
            job.output += "  note: certified point is not at the rest lengths (alternative equilibrium)\n";
        }
        job.code = exit_code(a.summary.reason);
        if (checks) {
            const CheckReport report = run_checks(s, *checks);
            write_text(dir / "checks.json", format_check_report(report));
            job.output += "  checks: " + std::string(report.passed() ? "pass" : "FAIL") + "\n";
            if (job.code == kOk && !report.passed()) {
                job.code = kCheckFailed;
            }
        }
    } catch (const ParseError& e) {
        job.output = name + ": " + e.what() + "\n";
        job.code = kInvalid;
    } catch (const ValidationError& e) {
        job.output = name + ": invalid scenario: " + e.what() + "\n";
        job.code = kInvalid;
    } catch (const DimensionError& e) {
        job.output = name + ": invalid scenario: " + e.what() + "\n";
        job.code = kInvalid;
    } catch (const Error& e) {
        job.output = name + ": " + e.what() + "\n";
        job.code = kDomain;
    }
    return job;
}

int worst_code(const std::vector<RunJob>& jobs) {
    int code = kOk;
    for (const auto& j : jobs) {
        code = std::max(code, j.code);
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Port-Hamiltonian agent networks and their potential games"};
    app.require_subcommand(1);

    Overrides overrides;
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--dt", overrides.dt, "Integrator step")->check(CLI::PositiveNumber);
        cmd->add_option("--t-max", overrides.t_max, "Final time")->check(CLI::PositiveNumber);
        cmd->add_option("--tol-p", overrides.tol_p, "Momentum tolerance for equilibrium detection")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--tol-f", overrides.tol_f, "Force tolerance for equilibrium detection")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--tol-gradient", overrides.tol_gradient, "Pseudo-gradient tolerance for certification")
            ->check(CLI::NonNegativeNumber);
    };

    // run
    std::vector<std::string> run_names;
    std::string out_root = "runs";
    unsigned jobs = 1;
    std::string run_checks_name;
    auto* run_cmd = app.add_subcommand("run", "Simulate, certify the final state and write the result files");
    run_cmd->add_option("scenarios", run_names, "Bundled scenario names or scenario files")->required();
    run_cmd->add_option("-o,--output", out_root, "Output root; each scenario writes to <root>/<name>");
    run_cmd->add_option("-j,--jobs", jobs, "Scenarios run in parallel")->check(CLI::Range(1u, 256u));
    run_cmd->add_option("--check", run_checks_name, "Also run a property suite: potential, gradients, passivity, all");
    add_overrides(run_cmd);

    // check
    std::string check_name;
    std::string which = "all";
    std::string check_out;
    std::size_t samples = 1000;
    auto* check_cmd = app.add_subcommand("check", "Run property suites on a scenario");
    check_cmd->add_option("scenario", check_name, "Bundled scenario name or scenario file")->required();
    check_cmd->add_option("--which", which, "potential, gradients, passivity or all")
        ->check(CLI::IsMember({"potential", "gradients", "passivity", "all"}));
    check_cmd->add_option("--samples", samples, "Random points per sampled property")->check(CLI::PositiveNumber);
    check_cmd->add_option("-o,--output", check_out, "Write the JSON report here");
    add_overrides(check_cmd);

    // validate
    std::vector<std::string> validate_names;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate scenarios");
    validate_cmd->add_option("scenarios", validate_names, "Bundled scenario names or scenario files")->required();

    // scenarios
    auto* scenarios_cmd = app.add_subcommand("scenarios", "Bundled scenarios");
    scenarios_cmd->require_subcommand(1);
    auto* list_cmd = scenarios_cmd->add_subcommand("list", "List bundled scenarios");
    std::vector<std::string> export_names;
    std::string export_dir = ".";
    auto* export_cmd = scenarios_cmd->add_subcommand("export", "Write bundled scenarios as files");
    export_cmd->add_option("names", export_names, "Scenario names (default: all)");
    export_cmd->add_option("-o,--output", export_dir, "Directory to write <name>.json into");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    if (*run_cmd) {
        std::optional<CheckSuite> suite;
        if (!run_checks_name.empty()) {
            suite = parse_check_suite(run_checks_name);
            if (!suite) {
                std::cerr << "unknown check suite '" << run_checks_name << "'\n";
                return kInvalid;
            }
        }
        std::vector<RunJob> results(run_names.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t k = next++; k < run_names.size(); k = next++) {
                results[k] = run_one(run_names[k], overrides, out_root, suite);
            }
        };
        std::vector<std::thread> pool;
        const unsigned threads = std::min<unsigned>(jobs, static_cast<unsigned>(run_names.size()));
        for (unsigned t = 1; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& t : pool) {
            t.join();
        }
        for (const auto& r : results) {
            std::cout << r.output;
        }
        return worst_code(results);
    }

    if (*check_cmd) {
        try {
            const Scenario s = load(check_name, overrides);
            CheckSettings settings;
            settings.samples = samples;
            const CheckReport report = run_checks(s, *parse_check_suite(which), settings);
            std::cout << s.name << ": " << (report.passed() ? "pass" : "FAIL") << "\n";
            print_check(report);
            if (!check_out.empty()) {
                write_text(check_out, format_check_report(report));
            }
            return report.passed() ? kOk : kCheckFailed;
        } catch (const ParseError& e) {
            std::cerr << e.what() << "\n";
            return kInvalid;
        } catch (const ValidationError& e) {
            std::cerr << "invalid scenario: " << e.what() << "\n";
            return kInvalid;
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return kDomain;
        }
    }

    if (*validate_cmd) {
        int code = kOk;
        for (const auto& name : validate_names) {
            try {
                const Scenario s = resolve_scenario(name);
                const auto structure = analyze_structure(build_network(s).graph());
                std::cout << name << ": ok (" << s.positions.size() << " agents, " << s.edges.size() << " edges, "
                          << (structure.acyclic ? "acyclic" : "cyclic") << ", "
                          << (structure.connected ? "connected" : "disconnected") << ")\n";
            } catch (const Error& e) {
                std::cout << name << ": " << e.what() << "\n";
                code = kInvalid;
            }
        }
        return code;
    }

    if (*list_cmd) {
        for (const auto& name : bundled_scenario_names()) {
            const Scenario s = bundled_scenario(name);
            std::printf("%-22s %zu agents, %2zu edges  %s\n", name.c_str(), s.positions.size(), s.edges.size(),
                        s.description.c_str());
        }
        return kOk;
    }

    if (*export_cmd) {
        const auto& names = export_names.empty() ? bundled_scenario_names() : export_names;
        try {
            fs::create_directories(export_dir);
            for (const auto& name : names) {
                const fs::path path = fs::path(export_dir) / (name + ".json");
                save_scenario(bundled_scenario(name), path);
                std::cout << path.string() << "\n";
            }
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return kInvalid;
        }
        return kOk;
    }
    return kOk;
}
