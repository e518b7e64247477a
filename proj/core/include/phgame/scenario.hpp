#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phgame/game.hpp"
#include "phgame/simulate.hpp"

namespace phgame {

/// Version written to and required in the `format_version` field.
inline constexpr int kScenarioFormatVersion = 1;

/// A complete, validated run description. Edges are stored 0-based; the
/// file format is 1-based. Every default is resolved at load time, so a
/// serialized scenario records all values actually used.
struct Scenario {
    std::string name;
    std::string description;
    std::size_t dimension = 2;
    std::vector<Vector> positions;
    std::vector<Vector> velocities;
    std::vector<Edge> edges;
    std::vector<CouplingSpec> couplings;
    SimulationSettings simulation;
    CertificationTolerances certification;
    /// Empty means "derive from the initial state" (default_decision_boxes).
    std::vector<DecisionBox> decision_boxes;
    std::vector<ObjectiveScaling> objective_scalings;
    /// Barrier edges must start within critical_distance - feasibility_margin.
    double feasibility_margin = 1e-6;
    std::uint64_t seed = 0;

    friend bool operator==(const Scenario& a, const Scenario& b);
};

Network build_network(const Scenario& scenario);
NetworkState initial_state(const Scenario& scenario, const Network& network);
/// Uses the declared boxes, or default_decision_boxes with horizon t_max.
PotentialGame build_game(const Scenario& scenario, const Network& network);

/// Throws ValidationError naming the violated invariant: graph structure,
/// coupling parameters, array sizes, settings, initial feasibility.
void validate_scenario(const Scenario& scenario);

/// Parses and validates. Throws ParseError (with line/column or field path)
/// or ValidationError.
Scenario parse_scenario(std::string_view text, const std::string& source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Positions drawn uniformly in [-half_width, half_width]^n until every
/// barrier edge is shorter than max_edge_fraction * critical distance.
std::vector<Vector> sample_feasible_positions(const ConstraintGraph& graph, const std::vector<CouplingSpec>& couplings,
                                              std::uint64_t seed, double half_width, double max_edge_fraction = 0.95);

const std::vector<std::string>& bundled_scenario_names();
/// Throws ValidationError for an unknown name.
Scenario bundled_scenario(std::string_view name);
/// Bundled name or file path.
Scenario resolve_scenario(const std::string& name_or_path);

/// The 9-agent, 16-edge barrier-spring network with initial positions drawn
/// from `seed` (zero initial velocities).
Scenario nine_agent_scenario(std::uint64_t seed);

}  // namespace phgame
