#include "phgame/run.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phgame/errors.hpp"

namespace phgame {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void append_number(std::string& out, double v) {
    std::array<char, 32> buf{};
    const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
    out.append(buf.data(), static_cast<std::size_t>(len));
}

std::string coordinate_name(std::size_t c, std::size_t dimension) {
    if (dimension <= 3) {
        return std::string(1, "xyz"[c]);
    }
    return "c" + std::to_string(c + 1);
}

template <typename Enum, std::size_t K>
Enum enum_from_string(const std::string& s, const std::array<Enum, K>& values, const char* field) {
    for (Enum v : values) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw ParseError(field, "unknown value '" + s + "'");
}

constexpr std::array kReasons = {TerminationReason::converged, TerminationReason::t_max_reached,
                                 TerminationReason::domain_violation, TerminationReason::singular_configuration};

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(what, e.what());
    }
}

}  // namespace

std::vector<std::string> trajectory_columns(const Network& network) {
    const std::size_t n = network.dimension();
    std::vector<std::string> cols{"t"};
    for (const char* prefix : {"q", "p"}) {
        for (std::size_t i = 0; i < network.num_agents(); ++i) {
            for (std::size_t c = 0; c < n; ++c) {
                cols.push_back(std::string(prefix) + "_" + std::to_string(i + 1) + "_" + coordinate_name(c, n));
            }
        }
    }
    for (std::size_t j = 0; j < network.num_edges(); ++j) {
        cols.push_back("dist_e" + std::to_string(j + 1));
    }
    cols.emplace_back("H");
    cols.emplace_back("u_norm");
    return cols;
}

std::string format_trajectory(const Network& network, const Trajectory& trajectory) {
    std::string out;
    const auto cols = trajectory_columns(network);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out += k == 0 ? "" : ",";
        out += cols[k];
    }
    out += '\n';
    for (const auto& s : trajectory.samples) {
        append_number(out, s.t);
        for (const Vector* v : {&s.state.q, &s.state.p, &s.edge_lengths}) {
            for (Eigen::Index k = 0; k < v->size(); ++k) {
                out += ',';
                append_number(out, (*v)(k));
            }
        }
        out += ',';
        append_number(out, s.hamiltonian);
        out += ',';
        append_number(out, s.control.norm());
        out += '\n';
    }
    return out;
}

TrajectoryTable parse_trajectory(std::string_view text) {
    TrajectoryTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (table.columns.empty()) {
            for (auto f : fields) {
                table.columns.emplace_back(f);
            }
            continue;
        }
        if (fields.size() != table.columns.size()) {
            throw ParseError("line " + std::to_string(line_no),
                             "expected " + std::to_string(table.columns.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const auto [ptr, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), row[k]);
            if (ec != std::errc() || ptr != fields[k].data() + fields[k].size()) {
                throw ParseError("line " + std::to_string(line_no) + ", column " + table.columns[k],
                                 "not a number: '" + std::string(fields[k]) + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) {
        throw ParseError("line 1", "missing header");
    }
    return table;
}

TrajectoryTable read_trajectory(const std::filesystem::path& path) { return parse_trajectory(read_text(path)); }

std::string format_equilibrium_report(const EquilibriumReport& r) {
    ordered_json j;
    j["verdict"] = to_string(r.verdict);
    j["is_variational_equilibrium"] = r.is_variational_equilibrium;
    j["interior"] = r.interior;
    j["pseudo_gradient_norm"] = r.pseudo_gradient_norm;
    j["momentum_norm"] = r.momentum_norm;
    j["force_residual"] = r.force_residual;
    j["potential_value"] = r.potential_value;
    j["per_player_gradient_norms"] = r.per_player_gradient_norms;
    j["max_rest_length_deviation"] = r.max_rest_length_deviation;
    j["alternative_equilibrium"] = r.alternative_equilibrium;
    return j.dump(2) + "\n";
}

EquilibriumReport parse_equilibrium_report(std::string_view text) {
    const json j = parse_json(text, "equilibrium report");
    try {
        EquilibriumReport r;
        r.verdict = enum_from_string(j.at("verdict").get<std::string>(),
                                     std::array{EquilibriumVerdict::variational_equilibrium,
                                                EquilibriumVerdict::not_equilibrium, EquilibriumVerdict::indeterminate,
                                                EquilibriumVerdict::infeasible},
                                     "verdict");
        r.is_variational_equilibrium = j.at("is_variational_equilibrium").get<bool>();
        r.interior = j.at("interior").get<bool>();
        r.pseudo_gradient_norm = j.at("pseudo_gradient_norm").get<double>();
        r.momentum_norm = j.at("momentum_norm").get<double>();
        r.force_residual = j.at("force_residual").get<double>();
        r.potential_value = j.at("potential_value").get<double>();
        r.per_player_gradient_norms = j.at("per_player_gradient_norms").get<std::vector<double>>();
        r.max_rest_length_deviation = j.at("max_rest_length_deviation").get<double>();
        r.alternative_equilibrium = j.at("alternative_equilibrium").get<bool>();
        return r;
    } catch (const json::exception& e) {
        throw ParseError("equilibrium report", e.what());
    }
}

std::string format_summary(const RunSummary& s) {
    ordered_json j;
    j["scenario"] = s.scenario;
    j["termination"] = to_string(s.reason);
    j["diagnostic"] = s.diagnostic;
    j["final_time"] = s.final_time;
    j["final_hamiltonian"] = s.final_hamiltonian;
    j["final_pseudo_gradient_norm"] = s.final_pseudo_gradient_norm;
    j["verdict"] = s.verdict;
    j["samples"] = s.samples;
    j["steps"] = s.steps;
    j["rejected_steps"] = s.rejected_steps;
    j["max_step_increase"] = s.max_step_increase;
    j["steps_above_tolerance"] = s.steps_above_tolerance;
    j["wall_time_seconds"] = s.wall_time_seconds;
    return j.dump(2) + "\n";
}

RunSummary parse_summary(std::string_view text) {
    const json j = parse_json(text, "run summary");
    try {
        RunSummary s;
        s.scenario = j.at("scenario").get<std::string>();
        s.reason = enum_from_string(j.at("termination").get<std::string>(), kReasons, "termination");
        s.diagnostic = j.at("diagnostic").get<std::string>();
        s.final_time = j.at("final_time").get<double>();
        s.final_hamiltonian = j.at("final_hamiltonian").get<double>();
        s.final_pseudo_gradient_norm = j.at("final_pseudo_gradient_norm").get<double>();
        s.verdict = j.at("verdict").get<std::string>();
        s.samples = j.at("samples").get<std::size_t>();
        s.steps = j.at("steps").get<std::size_t>();
        s.rejected_steps = j.at("rejected_steps").get<std::size_t>();
        s.max_step_increase = j.at("max_step_increase").get<double>();
        s.steps_above_tolerance = j.at("steps_above_tolerance").get<std::size_t>();
        s.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        return s;
    } catch (const json::exception& e) {
        throw ParseError("run summary", e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string(), "cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

RunArtifacts run_in_memory(const Scenario& scenario) {
    const auto start = std::chrono::steady_clock::now();
    const Network network = build_network(scenario);
    const NetworkState initial = initial_state(scenario, network);
    const PotentialGame game = build_game(scenario, network);

    RunArtifacts a;
    a.trajectory = simulate(network, initial, scenario.simulation);
    const auto& last = a.trajectory.final_sample();
    a.report = certify_equilibrium(game, last.state.collective(), scenario.certification);

    RunSummary& s = a.summary;
    s.scenario = scenario.name;
    s.reason = a.trajectory.reason;
    s.diagnostic = a.trajectory.diagnostic;
    s.final_time = last.t;
    s.final_hamiltonian = last.hamiltonian;
    s.final_pseudo_gradient_norm = a.report.pseudo_gradient_norm;
    s.verdict = to_string(a.report.verdict);
    s.samples = a.trajectory.samples.size();
    s.steps = a.trajectory.stats.steps;
    s.rejected_steps = a.trajectory.stats.rejected_steps;
    // -inf when no step was taken; JSON has no infinities.
    s.max_step_increase = a.trajectory.stats.steps == 0 ? 0.0 : a.trajectory.stats.max_step_increase;
    s.steps_above_tolerance = a.trajectory.stats.steps_above_tolerance;
    s.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return a;
}

RunArtifacts run(const Scenario& scenario, const std::filesystem::path& output_dir) {
    RunArtifacts a = run_in_memory(scenario);
    std::filesystem::create_directories(output_dir);
    a.trajectory_path = output_dir / "trajectory.csv";
    a.report_path = output_dir / "equilibrium.json";
    a.summary_path = output_dir / "summary.json";
    write_text(a.trajectory_path, format_trajectory(build_network(scenario), a.trajectory));
    write_text(a.report_path, format_equilibrium_report(a.report));
    write_text(a.summary_path, format_summary(a.summary));
    return a;
}

}  // namespace phgame
