#include "phgame/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "phgame/errors.hpp"
#include "phgame/random.hpp"

namespace phgame {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

bool same_vector(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

bool same_vectors(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_vector);
}

bool same_settings(const SimulationSettings& a, const SimulationSettings& b) {
    return a.dt == b.dt && a.t_max == b.t_max && a.output_interval == b.output_interval &&
           a.tolerances.momentum == b.tolerances.momentum && a.tolerances.force == b.tolerances.force &&
           a.adaptive == b.adaptive && a.hamiltonian_increase_tolerance == b.hamiltonian_increase_tolerance &&
           a.dt_min == b.dt_min && a.state_mode == b.state_mode && a.reproject == b.reproject;
}

}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
    return a.name == b.name && a.description == b.description && a.dimension == b.dimension &&
           same_vectors(a.positions, b.positions) && same_vectors(a.velocities, b.velocities) &&
           a.edges == b.edges && a.couplings == b.couplings && same_settings(a.simulation, b.simulation) &&
           a.certification.gradient == b.certification.gradient &&
           a.certification.rest_length == b.certification.rest_length && a.decision_boxes == b.decision_boxes &&
           a.objective_scalings == b.objective_scalings && a.feasibility_margin == b.feasibility_margin &&
           a.seed == b.seed;
}

Network build_network(const Scenario& scenario) {
    return {ConstraintGraph(scenario.positions.size(), scenario.edges, scenario.dimension), scenario.couplings};
}

NetworkState initial_state(const Scenario& scenario, const Network& network) {
    const auto n = static_cast<Eigen::Index>(scenario.dimension);
    Vector q(network.agent_coords());
    Vector p(network.agent_coords());
    for (std::size_t i = 0; i < scenario.positions.size(); ++i) {
        q.segment(static_cast<Eigen::Index>(i) * n, n) = scenario.positions[i];
        p.segment(static_cast<Eigen::Index>(i) * n, n) = scenario.velocities[i];
    }
    return NetworkState::from_positions(network, std::move(q), std::move(p));
}

PotentialGame build_game(const Scenario& scenario, const Network& network) {
    auto boxes = scenario.decision_boxes.empty()
                     ? default_decision_boxes(network, initial_state(scenario, network), scenario.simulation.t_max)
                     : scenario.decision_boxes;
    return {network, std::move(boxes), scenario.objective_scalings};
}

void validate_scenario(const Scenario& s) {
    if (s.name.empty()) {
        throw ValidationError("scenario name must not be empty");
    }
    if (s.dimension == 0) {
        throw ValidationError("dimension must be positive");
    }
    if (s.velocities.size() != s.positions.size()) {
        throw ValidationError("every agent needs a position and a velocity");
    }
    const auto n = static_cast<Eigen::Index>(s.dimension);
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        if (s.positions[i].size() != n || s.velocities[i].size() != n) {
            throw ValidationError("agent " + std::to_string(i + 1) + ": position and velocity need " +
                                  std::to_string(n) + " components");
        }
        if (!s.positions[i].allFinite() || !s.velocities[i].allFinite()) {
            throw ValidationError("agent " + std::to_string(i + 1) + ": non-finite initial state");
        }
    }
    if (!(s.feasibility_margin > 0.0)) {
        throw ValidationError("feasibility_margin must be positive");
    }
    const Network network = build_network(s);
    const auto state = initial_state(s, network);
    check_initial_feasibility(network, state, s.feasibility_margin);
    const SimulationSettings& sim = s.simulation;
    if (!(sim.dt > 0.0) || !(sim.t_max > 0.0) || !(sim.output_interval > 0.0) || !(sim.dt_min > 0.0) ||
        sim.dt_min > sim.dt) {
        throw ValidationError("integrator settings need dt, t_max, output_interval > 0 and 0 < dt_min <= dt");
    }
    if (!(sim.tolerances.momentum >= 0.0) || !(sim.tolerances.force >= 0.0) ||
        !(s.certification.gradient >= 0.0) || !(s.certification.rest_length >= 0.0)) {
        throw ValidationError("tolerances must be non-negative");
    }
    // Constructing the game validates boxes and scalings.
    (void)build_game(s, network);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ParseError(source_ + ": " + path, what);
    }

    void expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) const {
        if (!j.is_object()) {
            fail(path, "expected an object");
        }
        for (const auto& [key, value] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(path, "unknown field '" + key + "'");
            }
        }
    }

    const json& field(const json& obj, const std::string& key, const std::string& path) const {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            fail(path, "missing required field '" + key + "'");
        }
        return *it;
    }

    double number(const json& j, const std::string& path) const {
        if (!j.is_number()) {
            fail(path, "expected a number");
        }
        return j.get<double>();
    }

    std::uint64_t unsigned_integer(const json& j, const std::string& path) const {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
            fail(path, "expected a non-negative integer");
        }
        return j.get<std::uint64_t>();
    }

    bool boolean(const json& j, const std::string& path) const {
        if (!j.is_boolean()) {
            fail(path, "expected true or false");
        }
        return j.get<bool>();
    }

    std::string string(const json& j, const std::string& path) const {
        if (!j.is_string()) {
            fail(path, "expected a string");
        }
        return j.get<std::string>();
    }

    Vector vector(const json& j, const std::string& path, Eigen::Index size) const {
        if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
            fail(path, "expected an array of " + std::to_string(size) + " numbers");
        }
        Vector v(size);
        for (Eigen::Index k = 0; k < size; ++k) {
            v(k) = number(j[static_cast<std::size_t>(k)], path + "[" + std::to_string(k) + "]");
        }
        return v;
    }

    double optional_number(const json& obj, const std::string& key, const std::string& path, double fallback) const {
        const auto it = obj.find(key);
        return it == obj.end() ? fallback : number(*it, path + "." + key);
    }

    bool optional_boolean(const json& obj, const std::string& key, const std::string& path, bool fallback) const {
        const auto it = obj.find(key);
        return it == obj.end() ? fallback : boolean(*it, path + "." + key);
    }

private:
    std::string source_;
};

SpringModel parse_spring(const Reader& r, const json& j, const std::string& path) {
    if (!j.is_object()) {
        r.fail(path, "expected an object");
    }
    const auto model = r.string(r.field(j, "model", path), path + ".model");
    try {
        if (model == "constant") {
            r.expect_object(j, path, {"model", "stiffness", "rest_length", "critical_distance"});
            return SpringModel::constant(
                r.number(r.field(j, "stiffness", path), path + ".stiffness"),
                r.number(r.field(j, "rest_length", path), path + ".rest_length"),
                r.optional_number(j, "critical_distance", path, std::numeric_limits<double>::infinity()));
        }
        if (model == "barrier") {
            r.expect_object(j, path, {"model", "k_inner", "k_outer", "rest_length", "critical_distance"});
            return SpringModel::barrier(r.number(r.field(j, "k_inner", path), path + ".k_inner"),
                                        r.number(r.field(j, "k_outer", path), path + ".k_outer"),
                                        r.number(r.field(j, "rest_length", path), path + ".rest_length"),
                                        r.number(r.field(j, "critical_distance", path), path + ".critical_distance"));
        }
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
    r.fail(path + ".model", "expected \"constant\" or \"barrier\", got \"" + model + "\"");
}

CouplingSpec parse_coupling(const Reader& r, const json& j, const std::string& path, std::size_t dimension) {
    r.expect_object(j, path, {"spring", "damping"});
    SpringModel spring = parse_spring(r, r.field(j, "spring", path), path + ".spring");
    const json& d = r.field(j, "damping", path);
    const auto n = static_cast<Eigen::Index>(dimension);
    try {
        if (d.is_number()) {
            return {std::move(spring), d.get<double>(), dimension};
        }
        if (!d.is_array() || static_cast<Eigen::Index>(d.size()) != n) {
            r.fail(path + ".damping", "expected a number or a " + std::to_string(n) + "x" + std::to_string(n) +
                                          " array");
        }
        Matrix D(n, n);
        for (Eigen::Index row = 0; row < n; ++row) {
            D.row(row) = r.vector(d[static_cast<std::size_t>(row)],
                                  path + ".damping[" + std::to_string(row) + "]", n)
                             .transpose();
        }
        return {std::move(spring), std::move(D)};
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

StateMode parse_state_mode(const Reader& r, const json& j, const std::string& path) {
    const auto s = r.string(j, path);
    if (s == "positions") return StateMode::positions;
    if (s == "redundant") return StateMode::redundant;
    r.fail(path, "expected \"positions\" or \"redundant\"");
}

std::string_view state_mode_name(StateMode mode) {
    return mode == StateMode::positions ? "positions" : "redundant";
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + line_column(text, e.byte), "malformed JSON");
    }

    const Reader r(source);
    r.expect_object(root, "$", {"format_version", "name", "description", "dimension", "seed", "agents",
                                "default_coupling", "edges", "integrator", "equilibrium", "game", "metadata"});

    const auto version = r.unsigned_integer(r.field(root, "format_version", "$"), "$.format_version");
    if (version != kScenarioFormatVersion) {
        r.fail("$.format_version", "unsupported version " + std::to_string(version) + " (expected " +
                                       std::to_string(kScenarioFormatVersion) + ")");
    }

    Scenario s;
    s.name = r.string(r.field(root, "name", "$"), "$.name");
    if (root.contains("description")) {
        s.description = r.string(root["description"], "$.description");
    }
    s.dimension = r.unsigned_integer(r.field(root, "dimension", "$"), "$.dimension");
    if (s.dimension == 0) {
        r.fail("$.dimension", "must be positive");
    }
    const auto n = static_cast<Eigen::Index>(s.dimension);
    if (root.contains("seed")) {
        s.seed = r.unsigned_integer(root["seed"], "$.seed");
    }

    const json& agents = r.field(root, "agents", "$");
    if (!agents.is_array()) {
        r.fail("$.agents", "expected an array");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "$.agents[" + std::to_string(i) + "]";
        r.expect_object(agents[i], path, {"position", "velocity"});
        s.positions.push_back(r.vector(r.field(agents[i], "position", path), path + ".position", n));
        s.velocities.push_back(agents[i].contains("velocity")
                                   ? r.vector(agents[i]["velocity"], path + ".velocity", n)
                                   : Vector::Zero(n));
    }

    std::optional<CouplingSpec> shared;
    if (root.contains("default_coupling")) {
        shared = parse_coupling(r, root["default_coupling"], "$.default_coupling", s.dimension);
    }

    const json& edges = r.field(root, "edges", "$");
    if (!edges.is_array()) {
        r.fail("$.edges", "expected an array");
    }
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const std::string path = "$.edges[" + std::to_string(j) + "]";
        const json& e = edges[j];
        std::uint64_t tail = 0;
        std::uint64_t head = 0;
        std::optional<CouplingSpec> own;
        if (e.is_array()) {
            if (e.size() != 2) {
                r.fail(path, "expected [tail, head]");
            }
            tail = r.unsigned_integer(e[0], path + "[0]");
            head = r.unsigned_integer(e[1], path + "[1]");
        } else {
            r.expect_object(e, path, {"tail", "head", "coupling"});
            tail = r.unsigned_integer(r.field(e, "tail", path), path + ".tail");
            head = r.unsigned_integer(r.field(e, "head", path), path + ".head");
            if (e.contains("coupling")) {
                own = parse_coupling(r, e["coupling"], path + ".coupling", s.dimension);
            }
        }
        if (tail == 0 || head == 0) {
            r.fail(path, "agent indices are 1-based");
        }
        s.edges.push_back({static_cast<std::size_t>(tail - 1), static_cast<std::size_t>(head - 1)});
        if (own) {
            s.couplings.push_back(std::move(*own));
        } else if (shared) {
            s.couplings.push_back(*shared);
        } else {
            r.fail(path, "no coupling given and no default_coupling declared");
        }
    }

    if (root.contains("integrator")) {
        const json& j = root["integrator"];
        const std::string path = "$.integrator";
        r.expect_object(j, path, {"dt", "t_max", "output_interval", "adaptive", "hamiltonian_increase_tolerance",
                                  "dt_min", "state_mode", "reproject"});
        auto& sim = s.simulation;
        sim.dt = r.optional_number(j, "dt", path, sim.dt);
        sim.t_max = r.optional_number(j, "t_max", path, sim.t_max);
        sim.output_interval = r.optional_number(j, "output_interval", path, sim.output_interval);
        sim.adaptive = r.optional_boolean(j, "adaptive", path, sim.adaptive);
        sim.hamiltonian_increase_tolerance =
            r.optional_number(j, "hamiltonian_increase_tolerance", path, sim.hamiltonian_increase_tolerance);
        sim.dt_min = r.optional_number(j, "dt_min", path, sim.dt_min);
        if (j.contains("state_mode")) {
            sim.state_mode = parse_state_mode(r, j["state_mode"], path + ".state_mode");
        }
        sim.reproject = r.optional_boolean(j, "reproject", path, sim.reproject);
    }

    if (root.contains("equilibrium")) {
        const json& j = root["equilibrium"];
        const std::string path = "$.equilibrium";
        r.expect_object(j, path, {"tol_p", "tol_f", "tol_gradient", "rest_length_tolerance"});
        s.simulation.tolerances.momentum = r.optional_number(j, "tol_p", path, s.simulation.tolerances.momentum);
        s.simulation.tolerances.force = r.optional_number(j, "tol_f", path, s.simulation.tolerances.force);
        s.certification.gradient = r.optional_number(j, "tol_gradient", path, s.certification.gradient);
        s.certification.rest_length =
            r.optional_number(j, "rest_length_tolerance", path, s.certification.rest_length);
    }

    if (root.contains("game")) {
        const json& j = root["game"];
        const std::string path = "$.game";
        r.expect_object(j, path, {"decision_boxes", "objective_scaling"});
        if (j.contains("decision_boxes")) {
            const json& boxes = j["decision_boxes"];
            if (!boxes.is_array()) {
                r.fail(path + ".decision_boxes", "expected an array");
            }
            for (std::size_t i = 0; i < boxes.size(); ++i) {
                const std::string bp = path + ".decision_boxes[" + std::to_string(i) + "]";
                r.expect_object(boxes[i], bp, {"lower", "upper"});
                s.decision_boxes.push_back({r.vector(r.field(boxes[i], "lower", bp), bp + ".lower", 2 * n),
                                            r.vector(r.field(boxes[i], "upper", bp), bp + ".upper", 2 * n)});
            }
        }
        if (j.contains("objective_scaling")) {
            const json& list = j["objective_scaling"];
            if (!list.is_array()) {
                r.fail(path + ".objective_scaling", "expected an array");
            }
            for (std::size_t k = 0; k < list.size(); ++k) {
                const std::string sp = path + ".objective_scaling[" + std::to_string(k) + "]";
                r.expect_object(list[k], sp, {"player", "edge", "factor"});
                const auto player = r.unsigned_integer(r.field(list[k], "player", sp), sp + ".player");
                const auto edge = r.unsigned_integer(r.field(list[k], "edge", sp), sp + ".edge");
                if (player == 0 || edge == 0) {
                    r.fail(sp, "player and edge indices are 1-based");
                }
                s.objective_scalings.push_back({static_cast<std::size_t>(player - 1),
                                                static_cast<std::size_t>(edge - 1),
                                                r.number(r.field(list[k], "factor", sp), sp + ".factor")});
            }
        }
    }

    if (root.contains("metadata")) {
        const json& j = root["metadata"];
        r.expect_object(j, "$.metadata", {"feasibility_margin", "feasibility_radius"});
        s.feasibility_margin = r.optional_number(j, "feasibility_margin", "$.metadata", s.feasibility_margin);
    }

    try {
        validate_scenario(s);
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), "cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

ordered_json vector_json(const Vector& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        a.push_back(v(k));
    }
    return a;
}

ordered_json spring_json(const SpringModel& spring) {
    ordered_json j;
    if (const auto* c = std::get_if<ConstantStiffness>(&spring.stiffness())) {
        j["model"] = "constant";
        j["stiffness"] = c->stiffness;
        j["rest_length"] = spring.rest_length();
        if (std::isfinite(spring.critical_distance())) {
            j["critical_distance"] = spring.critical_distance();
        }
    } else {
        const auto& b = std::get<BarrierStiffness>(spring.stiffness());
        j["model"] = "barrier";
        j["k_inner"] = b.inner_stiffness;
        j["k_outer"] = b.outer_stiffness;
        j["rest_length"] = spring.rest_length();
        j["critical_distance"] = spring.critical_distance();
    }
    return j;
}

ordered_json coupling_json(const CouplingSpec& c) {
    ordered_json j;
    j["spring"] = spring_json(c.spring);
    if (c.isotropic_damping()) {
        j["damping"] = c.damping(0, 0);
    } else {
        ordered_json rows = ordered_json::array();
        for (Eigen::Index r = 0; r < c.damping.rows(); ++r) {
            rows.push_back(vector_json(c.damping.row(r).transpose()));
        }
        j["damping"] = rows;
    }
    return j;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
    ordered_json root;
    root["format_version"] = kScenarioFormatVersion;
    root["name"] = s.name;
    if (!s.description.empty()) {
        root["description"] = s.description;
    }
    root["dimension"] = s.dimension;
    root["seed"] = s.seed;

    ordered_json agents = ordered_json::array();
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        ordered_json a;
        a["position"] = vector_json(s.positions[i]);
        a["velocity"] = vector_json(s.velocities[i]);
        agents.push_back(a);
    }
    root["agents"] = agents;

    const bool shared = !s.couplings.empty() &&
                        std::all_of(s.couplings.begin(), s.couplings.end(),
                                    [&](const CouplingSpec& c) { return c == s.couplings.front(); });
    if (shared) {
        root["default_coupling"] = coupling_json(s.couplings.front());
    }
    ordered_json edges = ordered_json::array();
    for (std::size_t j = 0; j < s.edges.size(); ++j) {
        if (shared) {
            edges.push_back(ordered_json::array({s.edges[j].tail + 1, s.edges[j].head + 1}));
        } else {
            ordered_json e;
            e["tail"] = s.edges[j].tail + 1;
            e["head"] = s.edges[j].head + 1;
            e["coupling"] = coupling_json(s.couplings[j]);
            edges.push_back(e);
        }
    }
    root["edges"] = edges;

    const auto& sim = s.simulation;
    ordered_json integ;
    integ["dt"] = sim.dt;
    integ["t_max"] = sim.t_max;
    integ["output_interval"] = sim.output_interval;
    integ["adaptive"] = sim.adaptive;
    integ["hamiltonian_increase_tolerance"] = sim.hamiltonian_increase_tolerance;
    integ["dt_min"] = sim.dt_min;
    integ["state_mode"] = state_mode_name(sim.state_mode);
    integ["reproject"] = sim.reproject;
    root["integrator"] = integ;

    ordered_json eq;
    eq["tol_p"] = sim.tolerances.momentum;
    eq["tol_f"] = sim.tolerances.force;
    eq["tol_gradient"] = s.certification.gradient;
    eq["rest_length_tolerance"] = s.certification.rest_length;
    root["equilibrium"] = eq;

    if (!s.decision_boxes.empty() || !s.objective_scalings.empty()) {
        ordered_json game;
        if (!s.decision_boxes.empty()) {
            ordered_json boxes = ordered_json::array();
            for (const auto& b : s.decision_boxes) {
                ordered_json bj;
                bj["lower"] = vector_json(b.lower);
                bj["upper"] = vector_json(b.upper);
                boxes.push_back(bj);
            }
            game["decision_boxes"] = boxes;
        }
        if (!s.objective_scalings.empty()) {
            ordered_json list = ordered_json::array();
            for (const auto& sc : s.objective_scalings) {
                ordered_json sj;
                sj["player"] = sc.player + 1;
                sj["edge"] = sc.edge + 1;
                sj["factor"] = sc.factor;
                list.push_back(sj);
            }
            game["objective_scaling"] = list;
        }
        root["game"] = game;
    }

    ordered_json meta;
    meta["feasibility_margin"] = s.feasibility_margin;
    double radius = std::numeric_limits<double>::infinity();
    for (const auto& c : s.couplings) {
        if (c.spring.is_barrier()) {
            radius = std::min(radius, c.spring.critical_distance() - s.feasibility_margin);
        }
    }
    if (std::isfinite(radius)) {
        // Informational; recomputed from the couplings on load.
        meta["feasibility_radius"] = radius;
    }
    root["metadata"] = meta;

    return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << serialize_scenario(scenario);
}

// ---------------------------------------------------------------------------
// Bundled scenarios

std::vector<Vector> sample_feasible_positions(const ConstraintGraph& graph, const std::vector<CouplingSpec>& couplings,
                                              std::uint64_t seed, double half_width, double max_edge_fraction) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(graph.dimension());
    std::vector<Vector> positions(graph.num_agents(), Vector(n));
    constexpr int kAttempts = 1'000'000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        for (auto& q : positions) {
            for (Eigen::Index c = 0; c < n; ++c) {
                q(c) = rng.uniform(-half_width, half_width);
            }
        }
        bool ok = true;
        for (std::size_t j = 0; j < graph.num_edges() && ok; ++j) {
            const auto& e = graph.edge(j);
            const double length = (positions[e.head] - positions[e.tail]).norm();
            const auto& spring = couplings.at(j).spring;
            ok = length > 0.0 && (!spring.is_barrier() || length < max_edge_fraction * spring.critical_distance());
        }
        if (ok) {
            return positions;
        }
    }
    throw ValidationError("could not draw feasible initial positions; half_width too large for the barriers");
}

namespace {

std::vector<Edge> one_based(std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
    std::vector<Edge> edges;
    for (const auto& [t, h] : pairs) {
        edges.push_back({t - 1, h - 1});
    }
    return edges;
}

Vector vec2(double x, double y) {
    Vector v(2);
    v << x, y;
    return v;
}

Scenario with_zero_velocities(Scenario s) {
    s.velocities.assign(s.positions.size(), Vector::Zero(static_cast<Eigen::Index>(s.dimension)));
    return s;
}

Scenario two_agent_linear() {
    Scenario s;
    s.name = "two_agent_linear";
    s.description = "Two agents on one linear spring (k = 1, rest length 0.6), overdamped (d = 2).";
    s.dimension = 2;
    s.positions = {vec2(0.0, 0.0), vec2(1.0, 0.0)};
    s.edges = one_based({{1, 2}});
    s.couplings.assign(1, CouplingSpec(SpringModel::constant(1.0, 0.6), 2.0, 2));
    s.simulation.t_max = 100.0;
    return with_zero_velocities(std::move(s));
}

Scenario path4_acyclic() {
    Scenario s;
    s.name = "path4_acyclic";
    s.description = "Path graph 1-2-3-4 with barrier springs; acyclic, so the run must reach H = 0.";
    s.dimension = 2;
    s.positions = {vec2(0.0, 0.0), vec2(0.8, 0.3), vec2(1.1, -0.45), vec2(1.9, -0.2)};
    s.edges = one_based({{1, 2}, {2, 3}, {3, 4}});
    s.couplings.assign(3, CouplingSpec(SpringModel::barrier(0.8, 0.06, 0.6, 1.0), 0.5, 2));
    s.simulation.t_max = 200.0;
    return with_zero_velocities(std::move(s));
}

Scenario triangle_cyclic() {
    Scenario s;
    s.name = "triangle_cyclic";
    s.description = "Triangle of linear springs (k = 1, rest length 0.6); the smallest cyclic graph.";
    s.dimension = 2;
    s.positions = {vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.3, 0.8)};
    s.edges = one_based({{1, 2}, {2, 3}, {3, 1}});
    s.couplings.assign(3, CouplingSpec(SpringModel::constant(1.0, 0.6), 0.5, 2));
    s.simulation.t_max = 100.0;
    return with_zero_velocities(std::move(s));
}

Scenario asymmetric_objective() {
    Scenario s = triangle_cyclic();
    s.name = "asymmetric_objective";
    s.description =
        "Triangle whose player 1 weighs edge 1 twice; a negative control that is not a potential game.";
    s.objective_scalings = {{0, 0, 2.0}};
    return s;
}

}  // namespace

Scenario nine_agent_scenario(std::uint64_t seed) {
    Scenario s;
    s.name = "paper_sec5";
    s.description =
        "9 agents, 16 distance constraints, barrier springs (k_inner 0.8, k_outer 0.06, rest 0.6, critical 1) "
        "with damping 0.2; initial positions drawn from the seed, zero initial velocities.";
    s.dimension = 2;
    s.seed = seed;
    s.edges = one_based({{1, 2}, {1, 4}, {1, 8}, {1, 9}, {2, 3}, {2, 6}, {2, 7}, {3, 5},
                         {3, 6}, {3, 8}, {4, 5}, {4, 7}, {6, 7}, {6, 9}, {7, 8}, {7, 9}});
    s.couplings.assign(s.edges.size(), CouplingSpec(SpringModel::barrier(0.8, 0.06, 0.6, 1.0), 0.2, 2));
    const ConstraintGraph graph(9, s.edges, 2);
    s.positions = sample_feasible_positions(graph, s.couplings, seed, 0.45);
    s.simulation.t_max = 300.0;
    return with_zero_velocities(std::move(s));
}

const std::vector<std::string>& bundled_scenario_names() {
    static const std::vector<std::string> names = {"paper_sec5", "two_agent_linear", "path4_acyclic",
                                                   "triangle_cyclic", "asymmetric_objective"};
    return names;
}

Scenario bundled_scenario(std::string_view name) {
    if (name == "paper_sec5") return nine_agent_scenario(2019);
    if (name == "two_agent_linear") return two_agent_linear();
    if (name == "path4_acyclic") return path4_acyclic();
    if (name == "triangle_cyclic") return triangle_cyclic();
    if (name == "asymmetric_objective") return asymmetric_objective();
    throw ValidationError("unknown bundled scenario '" + std::string(name) + "'");
}

Scenario resolve_scenario(const std::string& name_or_path) {
    const auto& names = bundled_scenario_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
        return bundled_scenario(name_or_path);
    }
    return load_scenario(name_or_path);
}

}  // namespace phgame
