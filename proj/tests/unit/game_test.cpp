#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "phgame/errors.hpp"
#include "phgame/game.hpp"
#include "phgame/scenario.hpp"

using namespace phgame;

namespace {

PotentialGame bundled_game(const std::string& name) {
    const Scenario s = bundled_scenario(name);
    return build_game(s, build_network(s));
}

std::vector<DecisionBox> boxes(std::size_t players, std::size_t n, double position, double velocity) {
    Vector lo(2 * n), hi(2 * n);
    lo << Vector::Constant(n, -position), Vector::Constant(n, -velocity);
    hi = -lo;
    return std::vector<DecisionBox>(players, DecisionBox{lo, hi});
}

/// J_i summed edge by edge from the positions: 1/2 |v_i|^2 plus every spring
/// that touches agent i.
double objective_oracle(const Network& net, std::size_t i, const Vector& x, double edge_weight = 1.0,
                        std::size_t weighted_edge = kNoEdge) {
    const std::size_t n = net.dimension();
    const auto nn = net.agent_coords();
    const Vector q = x.head(nn);
    double J = 0.5 * oracle::agent(x.tail(nn), i, n).squaredNorm();
    for (std::size_t j = 0; j < net.num_edges(); ++j) {
        const auto& e = net.graph().edge(j);
        if (e.tail != i && e.head != i) {
            continue;
        }
        const double h = oracle::spring_energy(net.coupling(j).spring,
                                               (oracle::agent(q, e.head, n) - oracle::agent(q, e.tail, n)).norm());
        J += (j == weighted_edge ? edge_weight : 1.0) * h;
    }
    return J;
}

}  // namespace

TEST(PotentialGame, RejectsBadBoxesAndScalings) {
    const Scenario s = bundled_scenario("triangle_cyclic");
    const Network net = build_network(s);
    EXPECT_THROW(PotentialGame(net, boxes(2, 2, 5, 5)), ValidationError);
    auto bad = boxes(3, 2, 5, 5);
    bad[1].upper(0) = bad[1].lower(0);
    EXPECT_THROW(PotentialGame(net, bad), ValidationError);
    // Edge 2 joins agents 2 and 3, not agent 1.
    EXPECT_THROW(PotentialGame(net, boxes(3, 2, 5, 5), {{0, 1, 2.0}}), ValidationError);
    EXPECT_NO_THROW(PotentialGame(net, boxes(3, 2, 5, 5), {{0, 0, 2.0}}));
}

TEST(PotentialGame, PlayerDecisionLayout) {
    const auto game = bundled_game("triangle_cyclic");
    Vector x = Vector::LinSpaced(12, 0, 11);
    const Vector x1 = game.player_decision(x, 1);
    EXPECT_EQ(x1, (Vector(4) << 2, 3, 8, 9).finished());
    const Vector y = game.with_player_decision(x, 2, Vector::Constant(4, -1));
    EXPECT_EQ(y, (Vector(12) << 0, 1, 2, 3, -1, -1, 6, 7, 8, 9, -1, -1).finished());
}

TEST(LocalObjective, PlayerWithoutEdgesHasOnlyKineticTerm) {
    const Network net(ConstraintGraph(3, {{0, 1}}, 2), {CouplingSpec(SpringModel::constant(1.0, 0.6), 1.0, 2)});
    const PotentialGame game(net, boxes(3, 2, 10, 10));
    Vector x(12);
    x << 0, 0, 1, 0, 5, 5, 0, 0, 0, 0, 0.3, -0.4;
    EXPECT_DOUBLE_EQ(local_objective(game, 2, x), 0.125);
}

TEST(LocalObjective, AllZeroAtRestConfiguration) {
    const auto game = bundled_game("triangle_cyclic");
    Vector x = Vector::Zero(12);
    x << 0.0, 0.0, 0.6, 0.0, 0.3, 0.6 * std::sqrt(3.0) / 2.0, 0, 0, 0, 0, 0, 0;
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(local_objective(game, i, x), 0.0, 1e-15);
    }
    EXPECT_NEAR(potential_function(game.network(), x), 0.0, 1e-15);
    EXPECT_NEAR(potential_function_ordered(game.network(), x), 0.0, 1e-15);
}

TEST(LocalObjective, MatchesEdgeSumOracle) {
    const auto game = bundled_game("paper_sec5");
    Rng rng(21);
    for (int k = 0; k < 200; ++k) {
        const Vector x = sample_feasible_decision(game, rng);
        for (std::size_t i = 0; i < 9; ++i) {
            const double expected = objective_oracle(game.network(), i, x);
            EXPECT_NEAR(local_objective(game, i, x), expected, 1e-12 * std::max(1.0, expected));
        }
    }
}

TEST(PotentialFunction, EqualsHamiltonianAndOrderedSum) {
    const auto game = bundled_game("paper_sec5");
    const Network& net = game.network();
    Rng rng(22);
    for (int k = 0; k < 500; ++k) {
        const Vector x = sample_feasible_decision(game, rng);
        const double H = oracle::edge_sum_hamiltonian(net, x.head(18), x.tail(18));
        const double tol = 1e-12 * std::max(1.0, H);
        EXPECT_NEAR(potential_function(net, x), H, tol);
        EXPECT_NEAR(potential_function_ordered(net, x), H, tol);
    }
}

TEST(StateMap, ToPortHamiltonianStacksEdgeVectorsAndVelocities) {
    const auto game = bundled_game("paper_sec5");
    const Network& net = game.network();
    Rng rng(23);
    const Vector x = sample_feasible_decision(game, rng);
    const Vector xph = to_port_hamiltonian(net, x);
    ASSERT_EQ(xph.size(), 32 + 18);
    EXPECT_LE((xph.head(32) - oracle::direct_differences(net.graph(), x.head(18))).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(xph.tail(18), x.tail(18));
    const auto s = state_from_collective(net, x);
    EXPECT_EQ(s.collective(), x);
}

TEST(ExactPotential, TwoAgentGamePasses) {
    const auto game = bundled_game("two_agent_linear");
    const auto r = check_exact_potential(game, 1000, 1);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.samples, 1000u);
    EXPECT_LE(r.max_deviation, 1e-9);
}

TEST(ExactPotential, NineAgentBarrierGamePasses) {
    const auto r = check_exact_potential(bundled_game("paper_sec5"), 1000, 2);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.failures, 0u);
}

TEST(ExactPotential, DirectDifferencesAgreeWithChecker) {
    // Recompute one deviation by hand.
    const auto game = bundled_game("paper_sec5");
    const Network& net = game.network();
    Rng rng(24);
    const Vector x = sample_feasible_decision(game, rng);
    const Vector y = game.with_player_decision(x, 4, sample_player_deviation(game, 4, x, rng));
    ASSERT_TRUE(game.feasible(y));
    const double dJ = objective_oracle(net, 4, x) - objective_oracle(net, 4, y);
    const double dH = oracle::edge_sum_hamiltonian(net, x.head(18), x.tail(18)) -
                      oracle::edge_sum_hamiltonian(net, y.head(18), y.tail(18));
    EXPECT_NEAR(dJ, dH, 1e-9 * std::max(1.0, std::abs(dH)));
    for (std::size_t i = 0; i < 9; ++i) {
        if (i != 4) {
            EXPECT_EQ(game.player_decision(x, i), game.player_decision(y, i));
        }
    }
}

TEST(ExactPotential, AsymmetricObjectiveFails) {
    const auto game = bundled_game("asymmetric_objective");
    const auto r = check_exact_potential(game, 1000, 3);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.max_deviation, 1e-3);
    // The scaled objective itself is what the oracle says it is.
    Rng rng(25);
    const Vector x = sample_feasible_decision(game, rng);
    EXPECT_NEAR(local_objective(game, 0, x), objective_oracle(game.network(), 0, x, 2.0, 0), 1e-12);
}

TEST(PseudoGradient, ZeroAtRest) {
    const auto game = bundled_game("triangle_cyclic");
    Vector x = Vector::Zero(12);
    x << 0.0, 0.0, 0.6, 0.0, 0.3, 0.6 * std::sqrt(3.0) / 2.0, 0, 0, 0, 0, 0, 0;
    EXPECT_LE(pseudo_gradient(game, x).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PseudoGradient, PerPlayerBlocksMatchFiniteDifferences) {
    for (const char* name : {"paper_sec5", "triangle_cyclic", "asymmetric_objective"}) {
        const auto game = bundled_game(name);
        const Network& net = game.network();
        const auto nn = net.agent_coords();
        const auto n = static_cast<Eigen::Index>(net.dimension());
        Rng rng(26);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const Vector x = sample_feasible_decision(game, rng);
            const Vector d = edge_lengths(net, state_from_collective(net, x));
            bool smooth = true;
            for (Eigen::Index j = 0; j < d.size(); ++j) {
                const auto& s = net.coupling(static_cast<std::size_t>(j)).spring;
                smooth = smooth && d(j) > 1e-3 &&
                         (!s.is_barrier() || (std::abs(d(j) - 0.6) > 1e-3 && d(j) < 1.0 - 1e-3));
            }
            if (!smooth) {
                continue;
            }
            const Vector F = pseudo_gradient(game, x);
            for (std::size_t i = 0; i < game.num_players(); ++i) {
                const Vector fd = oracle::fd_gradient(
                    [&](const Vector& yi) { return local_objective(game, i, game.with_player_decision(x, i, yi)); },
                    game.player_decision(x, i));
                Vector analytic(2 * n);
                const auto off = static_cast<Eigen::Index>(i) * n;
                analytic << F.segment(off, n), F.segment(nn + off, n);
                worst = std::max(worst, oracle::rel_err(analytic, fd));
            }
        }
        EXPECT_LE(worst, 1e-6) << name;
    }
}

TEST(PseudoGradient, FactorizationThroughIncidence) {
    const auto game = bundled_game("paper_sec5");
    const Network& net = game.network();
    const Matrix& Bbar = net.expanded_incidence();
    Rng rng(27);
    for (int k = 0; k < 1000; ++k) {
        const Vector x = sample_feasible_decision(game, rng);
        const auto g = hamiltonian_gradient(net, state_from_collective(net, x));
        Vector assembled(36);
        assembled << Bbar.transpose() * g.dz, g.dp;
        const Vector F = pseudo_gradient(game, x);
        EXPECT_LE((F - assembled).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, assembled.cwiseAbs().maxCoeff()));
        EXPECT_LE((F - pseudo_gradient_factored(net, x)).cwiseAbs().maxCoeff(),
                  1e-12 * std::max(1.0, assembled.cwiseAbs().maxCoeff()));
    }
}

TEST(PseudoGradient, SingularWhenIncidentEdgeCollapses) {
    const auto game = bundled_game("two_agent_linear");
    EXPECT_THROW(pseudo_gradient(game, Vector::Zero(8)), SingularConfiguration);
}

TEST(Certify, RestConfigurationIsVariationalEquilibrium) {
    const auto game = bundled_game("triangle_cyclic");
    Vector x = Vector::Zero(12);
    x << 0.0, 0.0, 0.6, 0.0, 0.3, 0.6 * std::sqrt(3.0) / 2.0, 0, 0, 0, 0, 0, 0;
    const auto r = certify_equilibrium(game, x);
    EXPECT_TRUE(r.is_variational_equilibrium);
    EXPECT_EQ(r.verdict, EquilibriumVerdict::variational_equilibrium);
    EXPECT_TRUE(r.interior);
    EXPECT_FALSE(r.alternative_equilibrium);
    EXPECT_EQ(r.per_player_gradient_norms.size(), 3u);
    EXPECT_LE(r.potential_value, 1e-15);
}

TEST(Certify, MovingStateIsNotEquilibrium) {
    const auto game = bundled_game("triangle_cyclic");
    Vector x = Vector::Zero(12);
    x << 0.0, 0.0, 0.6, 0.0, 0.3, 0.6 * std::sqrt(3.0) / 2.0, 0.1, 0, -0.1, 0, 0, 0;
    const auto r = certify_equilibrium(game, x);
    EXPECT_EQ(r.verdict, EquilibriumVerdict::not_equilibrium);
    EXPECT_DOUBLE_EQ(r.momentum_norm, 0.1);
    EXPECT_GE(r.pseudo_gradient_norm, 0.1);
}

TEST(Certify, StrainedStationaryPointIsFlaggedAsAlternative) {
    const Network net(ConstraintGraph(3, {{0, 1}, {1, 2}, {0, 2}}, 2),
                      std::vector<CouplingSpec>(3, CouplingSpec(SpringModel::constant(1.0, 0.6), 0.5, 2)));
    const PotentialGame game(net, boxes(3, 2, 10, 10));
    Vector x = Vector::Zero(12);
    x << 0.0, 0.0, 0.4, 0.0, 0.8, 0.0, 0, 0, 0, 0, 0, 0;
    const auto r = certify_equilibrium(game, x);
    EXPECT_TRUE(r.is_variational_equilibrium);
    EXPECT_TRUE(r.alternative_equilibrium);
    EXPECT_NEAR(r.max_rest_length_deviation, 0.2, 1e-15);
}

TEST(Certify, BoundaryPointIsIndeterminateAndOutsideIsInfeasible) {
    const Network net(ConstraintGraph(2, {{0, 1}}, 2), {CouplingSpec(SpringModel::constant(1.0, 0.6), 1.0, 2)});
    const PotentialGame game(net, boxes(2, 2, 1.0, 1.0));
    Vector x = Vector::Zero(8);
    x << 0.4, 0.0, 1.0, 0.0, 0, 0, 0, 0;
    EXPECT_EQ(certify_equilibrium(game, x).verdict, EquilibriumVerdict::indeterminate);
    x(2) = 1.2;
    EXPECT_EQ(certify_equilibrium(game, x).verdict, EquilibriumVerdict::infeasible);
}

TEST(DefaultBoxes, ContainInitialStateStrictly) {
    const Scenario s = bundled_scenario("paper_sec5");
    const Network net = build_network(s);
    const auto x0 = initial_state(s, net);
    const PotentialGame game(net, default_decision_boxes(net, x0, 300.0));
    const Vector x = x0.collective();
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_TRUE(game.box(i).interior(game.player_decision(x, i)));
    }
}

TEST(Sampling, DecisionsAndDeviationsStayFeasible) {
    const auto game = bundled_game("paper_sec5");
    Rng rng(28);
    for (int k = 0; k < 200; ++k) {
        const Vector x = sample_feasible_decision(game, rng);
        ASSERT_TRUE(game.feasible(x));
        const std::size_t i = rng.index(9);
        ASSERT_TRUE(game.feasible(game.with_player_decision(x, i, sample_player_deviation(game, i, x, rng))));
    }
}
