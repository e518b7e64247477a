#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "phgame/errors.hpp"
#include "phgame/run.hpp"
#include "phgame/scenario.hpp"

using namespace phgame;

namespace {

const char* kMinimal = R"({
  "format_version": 1,
  "name": "minimal",
  "dimension": 2,
  "agents": [
    {"position": [0.0, 0.0]},
    {"position": [1.0, 0.0], "velocity": [0.0, 0.1]}
  ],
  "default_coupling": {
    "spring": {"model": "constant", "stiffness": 1.0, "rest_length": 0.6},
    "damping": 2.0
  },
  "edges": [[1, 2]]
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

std::string parse_error_message(const std::string& text) {
    try {
        parse_scenario(text, "test.json");
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Scenario, NineAgentBundledScenarioParameters) {
    const Scenario s = bundled_scenario("paper_sec5");
    ASSERT_EQ(s.positions.size(), 9u);
    ASSERT_EQ(s.edges.size(), 16u);
    const std::vector<std::pair<int, int>> expected = {{1, 2}, {1, 4}, {1, 8}, {1, 9}, {2, 3}, {2, 6},
                                                       {2, 7}, {3, 5}, {3, 6}, {3, 8}, {4, 5}, {4, 7},
                                                       {6, 7}, {6, 9}, {7, 8}, {7, 9}};
    for (std::size_t j = 0; j < 16; ++j) {
        EXPECT_EQ(s.edges[j].tail + 1, static_cast<std::size_t>(expected[j].first));
        EXPECT_EQ(s.edges[j].head + 1, static_cast<std::size_t>(expected[j].second));
        const auto& spring = s.couplings[j].spring;
        ASSERT_TRUE(spring.is_barrier());
        const auto& k = std::get<BarrierStiffness>(spring.stiffness());
        EXPECT_EQ(k.inner_stiffness, 0.8);
        EXPECT_EQ(k.outer_stiffness, 0.06);
        EXPECT_EQ(spring.rest_length(), 0.6);
        EXPECT_EQ(spring.critical_distance(), 1.0);
    }
    for (const auto& v : s.velocities) {
        EXPECT_TRUE(v.isZero(0.0));
    }
    const Network net = build_network(s);
    EXPECT_LT(edge_lengths(net, initial_state(s, net)).maxCoeff(), 0.95);
}

TEST(Scenario, MinimalTextUsesSharedDefaultCoupling) {
    const Scenario s = parse_scenario(kMinimal);
    EXPECT_EQ(s.name, "minimal");
    ASSERT_EQ(s.couplings.size(), 1u);
    EXPECT_FALSE(s.couplings[0].spring.is_barrier());
    EXPECT_EQ(s.couplings[0].damping, 2.0 * Matrix::Identity(2, 2));
    EXPECT_EQ(s.velocities[0], Vector::Zero(2));
    EXPECT_EQ(s.velocities[1](1), 0.1);
    // Defaults are resolved and recorded.
    EXPECT_EQ(s.simulation.dt, 1e-3);
    EXPECT_EQ(s.simulation.t_max, 100.0);
    EXPECT_EQ(s.simulation.output_interval, 0.01);
    EXPECT_EQ(s.simulation.tolerances.momentum, 1e-6);
    EXPECT_EQ(s.certification.gradient, 1e-6);
}

TEST(Scenario, InfeasibleInitialEdgeRejected) {
    std::string text = replace(kMinimal, R"("model": "constant", "stiffness": 1.0)",
                               R"("model": "barrier", "k_inner": 0.8, "k_outer": 0.06, "critical_distance": 1.2)");
    EXPECT_NO_THROW(parse_scenario(text));
    text = replace(text, "[1.0, 0.0], \"velocity\"", "[1.5, 0.0], \"velocity\"");
    try {
        parse_scenario(text);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("edge 1"), std::string::npos) << e.what();
    }
}

TEST(Scenario, MalformedJsonReportsLineAndColumn) {
    const std::string text = replace(kMinimal, R"("name": "minimal",)", R"("name": "minimal")");
    const std::string msg = parse_error_message(text);
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("test.json"), std::string::npos) << msg;
}

TEST(Scenario, FieldErrorsNameThePath) {
    EXPECT_NE(parse_error_message(replace(kMinimal, "\"dimension\": 2", "\"dimension\": 2, \"bogus\": 1"))
                  .find("unknown field 'bogus'"),
              std::string::npos);
    EXPECT_NE(parse_error_message(replace(kMinimal, "[1.0, 0.0]", "[1.0]")).find("$.agents[1].position"),
              std::string::npos);
    EXPECT_NE(parse_error_message(replace(kMinimal, "\"damping\": 2.0", "\"damping\": \"high\""))
                  .find("$.default_coupling.damping"),
              std::string::npos);
    EXPECT_NE(parse_error_message(replace(kMinimal, "\"format_version\": 1", "\"format_version\": 7"))
                  .find("unsupported version"),
              std::string::npos);
    EXPECT_NE(parse_error_message(replace(kMinimal, "[[1, 2]]", "[[0, 1]]")).find("1-based"), std::string::npos);
    EXPECT_NE(parse_error_message(replace(kMinimal, "\"model\": \"constant\"", "\"model\": \"cubic\"")).find("cubic"),
              std::string::npos);
}

TEST(Scenario, GraphAndCouplingValidation) {
    EXPECT_THROW(parse_scenario(replace(kMinimal, "[[1, 2]]", "[[1, 1]]")), ValidationError);
    EXPECT_THROW(parse_scenario(replace(kMinimal, "[[1, 2]]", "[[1, 3]]")), ValidationError);
    EXPECT_THROW(parse_scenario(replace(kMinimal, "[[1, 2]]", "[[1, 2], [2, 1]]")), ValidationError);
    EXPECT_THROW(parse_scenario(replace(kMinimal, "\"damping\": 2.0", "\"damping\": -1")), ValidationError);
    EXPECT_THROW(parse_scenario(replace(kMinimal, "\"stiffness\": 1.0", "\"stiffness\": 0")), ValidationError);
}

TEST(Scenario, PerEdgeCouplingAndMatrixDamping) {
    const std::string text = replace(kMinimal, "[[1, 2]]", R"([{"tail": 2, "head": 1, "coupling": {
        "spring": {"model": "barrier", "k_inner": 1, "k_outer": 0.5, "rest_length": 0.6, "critical_distance": 2},
        "damping": [[2.0, 0.5], [0.5, 1.0]]}}])");
    const Scenario s = parse_scenario(text);
    EXPECT_EQ(s.edges[0].tail, 1u);
    EXPECT_TRUE(s.couplings[0].spring.is_barrier());
    EXPECT_EQ(s.couplings[0].damping(0, 1), 0.5);
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
}

TEST(Scenario, RoundTripAllBundled) {
    for (const auto& name : bundled_scenario_names()) {
        const Scenario s = bundled_scenario(name);
        const std::string text = serialize_scenario(s);
        const Scenario back = parse_scenario(text, name);
        EXPECT_EQ(back, s) << name;
        EXPECT_EQ(serialize_scenario(back), text) << name;
    }
}

TEST(Scenario, RoundTripKeepsFullPrecision) {
    Scenario s = parse_scenario(kMinimal);
    s.positions[1] << 0.1 + 0.2, 1.0 / 3.0;
    s.simulation.dt = 1.0 / 1024.0 + 1e-17;
    s.decision_boxes = std::vector<DecisionBox>(2, DecisionBox{Vector::Constant(4, -9.75), Vector::Constant(4, 9.5)});
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
}

TEST(Scenario, RecordsFeasibilityRadiusForBarriers) {
    const std::string text = serialize_scenario(bundled_scenario("path4_acyclic"));
    EXPECT_NE(text.find("\"feasibility_radius\": 0.999999"), std::string::npos) << text;
}

TEST(Scenario, ShippedFilesMatchBundledScenarios) {
    const std::filesystem::path dir = PHGAME_SCENARIO_DIR;
    for (const auto& name : bundled_scenario_names()) {
        const auto path = dir / (name + ".json");
        ASSERT_TRUE(std::filesystem::exists(path)) << path;
        EXPECT_EQ(load_scenario(path), bundled_scenario(name)) << name;
    }
}

TEST(Scenario, ResolveByNameOrPath) {
    EXPECT_EQ(resolve_scenario("triangle_cyclic").name, "triangle_cyclic");
    EXPECT_THROW(resolve_scenario("/nonexistent/file.json"), ParseError);
    EXPECT_THROW(bundled_scenario("nope"), ValidationError);
}

TEST(Scenario, NineAgentSeedsGiveDistinctFeasibleStarts) {
    const Scenario a = nine_agent_scenario(1);
    const Scenario b = nine_agent_scenario(2);
    EXPECT_NE(a.positions[0], b.positions[0]);
    EXPECT_EQ(nine_agent_scenario(1), a);
    EXPECT_NO_THROW(validate_scenario(b));
}
