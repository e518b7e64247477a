#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "phgame/errors.hpp"
#include "phgame/scenario.hpp"
#include "phgame/simulate.hpp"

using namespace phgame;

namespace {

struct Setup {
    Network net;
    NetworkState initial;
};

Setup from_bundled(const std::string& name) {
    const Scenario s = bundled_scenario(name);
    Network net = build_network(s);
    NetworkState x0 = initial_state(s, net);
    return {std::move(net), std::move(x0)};
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return worst;
}

std::vector<double> hamiltonians(const Trajectory& t) {
    std::vector<double> H;
    for (const auto& s : t.samples) {
        H.push_back(s.hamiltonian);
    }
    return H;
}

}  // namespace

TEST(Simulate, TwoAgentLinearConvergesToRestLength) {
    const auto [net, x0] = from_bundled("two_agent_linear");
    const auto traj = simulate(net, x0);
    ASSERT_TRUE(traj.converged()) << traj.diagnostic;
    const auto& last = traj.final_sample();
    EXPECT_NEAR(last.edge_lengths(0), 0.6, 1e-5);
    EXPECT_LE(last.hamiltonian, 1e-10);
    EXPECT_LE(last.state.p.cwiseAbs().maxCoeff(), 1e-6);
    // Total momentum is conserved: the midpoint stays at x = 0.5.
    EXPECT_NEAR(0.5 * (last.state.q(0) + last.state.q(2)), 0.5, 1e-12);
}

TEST(Simulate, OverdampedTwoAgentApproachesMonotonically) {
    const auto [net, x0] = from_bundled("two_agent_linear");
    const auto traj = simulate(net, x0);
    // Relative coordinate obeys s'' = -2 d s' - 2 k (s - r); d = 2 is
    // overdamped, so |s - r| never changes sign.
    for (const auto& s : traj.samples) {
        EXPECT_GE(s.edge_lengths(0), 0.6 - 1e-12);
    }
}

TEST(Simulate, TwoAgentMatchesClosedFormRelativeMotion) {
    // s(t) - r for s'' + 2 d s' + 2 k (s - r) = 0, s(0) = 1, s'(0) = 0.
    const auto [net, x0] = from_bundled("two_agent_linear");
    SimulationSettings settings;
    settings.t_max = 5.0;
    const auto traj = simulate(net, x0, settings);
    const double d = 2.0;
    const double k = 1.0;
    const double a = -d + std::sqrt(d * d - 2 * k);
    const double b = -d - std::sqrt(d * d - 2 * k);
    const double c1 = 0.4 * -b / (a - b);
    const double c2 = 0.4 * a / (a - b);
    for (const auto& s : traj.samples) {
        const double expected = 0.6 + c1 * std::exp(a * s.t) + c2 * std::exp(b * s.t);
        EXPECT_NEAR(s.edge_lengths(0), expected, 1e-10) << "t = " << s.t;
    }
}

TEST(Simulate, RestStartIsSingleSample) {
    const Network net(ConstraintGraph(2, {{0, 1}}, 2), {CouplingSpec(SpringModel::constant(1.0, 0.6), 1.0, 2)});
    Vector q(4);
    q << 0.0, 0.0, 0.6, 0.0;
    const auto traj = simulate(net, NetworkState::from_positions(net, q, Vector::Zero(4)));
    EXPECT_TRUE(traj.converged());
    ASSERT_EQ(traj.samples.size(), 1u);
    EXPECT_EQ(traj.samples[0].t, 0.0);
    EXPECT_EQ(traj.samples[0].hamiltonian, 0.0);
    EXPECT_EQ(traj.stats.steps, 0u);
}

TEST(Simulate, SampleTimesAreOnTheOutputGrid) {
    const auto [net, x0] = from_bundled("triangle_cyclic");
    SimulationSettings settings;
    settings.t_max = 1.0;
    settings.output_interval = 0.1;
    const auto traj = simulate(net, x0, settings);
    ASSERT_EQ(traj.samples.size(), 11u);
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        EXPECT_NEAR(traj.samples[k].t, 0.1 * static_cast<double>(k), 1e-12);
    }
    EXPECT_EQ(traj.reason, TerminationReason::t_max_reached);
    EXPECT_EQ(traj.stats.steps, 1000u);
}

TEST(Simulate, HamiltonianNonIncreasingOnNineAgentNetwork) {
    const auto [net, x0] = from_bundled("paper_sec5");
    const auto traj = simulate(net, x0);
    ASSERT_TRUE(traj.converged()) << traj.diagnostic;
    EXPECT_LE(traj.stats.max_step_increase, 1e-8);
    EXPECT_EQ(traj.stats.steps_above_tolerance, 0u);
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        EXPECT_LE(traj.samples[k].hamiltonian, traj.samples[k - 1].hamiltonian + 1e-8);
        EXPECT_LT(traj.samples[k].edge_lengths.maxCoeff(), 1.0);
    }
}

TEST(Simulate, InitialInfeasibilityRejected) {
    const Network net(ConstraintGraph(2, {{0, 1}}, 2),
                      {CouplingSpec(SpringModel::barrier(0.8, 0.06, 0.6, 1.0), 1.0, 2)});
    Vector q(4);
    q << 0.0, 0.0, 1.5, 0.0;
    EXPECT_THROW(simulate(net, NetworkState::from_positions(net, q, Vector::Zero(4))), ValidationError);
    q(2) = 1.0 - 1e-7;  // inside the pole but within the feasibility margin
    EXPECT_THROW(simulate(net, NetworkState::from_positions(net, q, Vector::Zero(4))), ValidationError);
}

TEST(Simulate, BarrierHoldsAgainstFastSeparation) {
    const Network net(ConstraintGraph(2, {{0, 1}}, 2),
                      {CouplingSpec(SpringModel::barrier(0.8, 0.06, 0.6, 1.0), 0.1, 2)});
    Vector q(4), p(4);
    q << 0.0, 0.0, 0.6, 0.0;
    p << -2.0, 0.0, 2.0, 0.0;
    SimulationSettings settings;
    settings.t_max = 20.0;
    const auto traj = simulate(net, NetworkState::from_positions(net, q, p), settings);
    ASSERT_NE(traj.reason, TerminationReason::domain_violation) << traj.diagnostic;
    double longest = 0.0;
    for (const auto& s : traj.samples) {
        longest = std::max(longest, s.edge_lengths(0));
    }
    EXPECT_GT(longest, 0.9);
    EXPECT_LT(longest, 1.0);
}

TEST(Simulate, CoarseStepAgainstBarrierIsRetriedOrReported) {
    const Network net(ConstraintGraph(2, {{0, 1}}, 2),
                      {CouplingSpec(SpringModel::barrier(0.8, 0.06, 0.6, 1.0), 0.1, 2)});
    Vector q(4), p(4);
    q << 0.0, 0.0, 0.6, 0.0;
    p << -2.0, 0.0, 2.0, 0.0;
    SimulationSettings settings;
    settings.dt = 0.2;
    settings.output_interval = 0.2;
    settings.t_max = 5.0;
    settings.dt_min = 0.05;
    const auto traj = simulate(net, NetworkState::from_positions(net, q, p), settings);
    if (traj.reason == TerminationReason::domain_violation) {
        EXPECT_NE(traj.diagnostic.find("edge 1"), std::string::npos) << traj.diagnostic;
    } else {
        EXPECT_GT(traj.stats.rejected_steps, 0u);
    }
    for (const auto& s : traj.samples) {
        EXPECT_LT(s.edge_lengths(0), 1.0);
    }
}

TEST(Simulate, AdaptiveModeKeepsStepIncreasesBelowTolerance) {
    const auto [net, x0] = from_bundled("paper_sec5");
    SimulationSettings settings;
    settings.dt = 0.05;
    settings.output_interval = 0.05;
    settings.adaptive = true;
    settings.t_max = 300.0;
    const auto traj = simulate(net, x0, settings);
    EXPECT_EQ(traj.integrator, "rk4-adaptive");
    EXPECT_EQ(traj.stats.steps_above_tolerance, 0u);
    EXPECT_TRUE(traj.converged()) << traj.diagnostic;
}

TEST(Simulate, RedundantStateDriftIsTinyAndReprojectionMatchesPositions) {
    const auto [net, x0] = from_bundled("triangle_cyclic");
    SimulationSettings settings;
    settings.t_max = 10.0;
    const auto base = simulate(net, x0, settings);
    settings.state_mode = StateMode::redundant;
    const auto drift = simulate(net, x0, settings);
    EXPECT_LE(drift.stats.max_consistency_drift, 1e-12);
    settings.reproject = true;
    const auto projected = simulate(net, x0, settings);
    ASSERT_EQ(projected.samples.size(), base.samples.size());
    EXPECT_LE(max_abs_difference(hamiltonians(projected), hamiltonians(base)), 1e-12);
}

TEST(Simulate, DeterministicRepeat) {
    const auto [net, x0] = from_bundled("paper_sec5");
    SimulationSettings settings;
    settings.t_max = 5.0;
    const auto a = simulate(net, x0, settings);
    const auto b = simulate(net, x0, settings);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        EXPECT_EQ(a.samples[k].state.q, b.samples[k].state.q);
        EXPECT_EQ(a.samples[k].state.p, b.samples[k].state.p);
    }
}

TEST(Simulate, NonzeroTotalMomentumNeverSettles) {
    // 1^T B = 0, so the closed loop conserves the sum of momenta.
    const auto [net, x0] = from_bundled("two_agent_linear");
    NetworkState drifting = x0;
    drifting.p << 0.1, 0.0, 0.1, 0.0;
    SimulationSettings settings;
    settings.t_max = 30.0;
    const auto traj = simulate(net, drifting, settings);
    EXPECT_EQ(traj.reason, TerminationReason::t_max_reached);
    const Vector& p = traj.final_sample().state.p;
    EXPECT_NEAR(p(0) + p(2), 0.2, 1e-12);
}

TEST(Invariance, TranslationLeavesEnergyAndDistancesUnchanged) {
    const auto [net, x0] = from_bundled("triangle_cyclic");
    NetworkState moved = x0;
    for (int i = 0; i < 3; ++i) {
        moved.q.segment(2 * i, 2) += Eigen::Vector2d(3.0, -7.0);
    }
    moved = NetworkState::from_positions(net, moved.q, moved.p);
    const auto a = simulate(net, x0);
    const auto b = simulate(net, moved);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        EXPECT_NEAR(a.samples[k].hamiltonian, b.samples[k].hamiltonian, 1e-10);
        EXPECT_LE((a.samples[k].edge_lengths - b.samples[k].edge_lengths).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LE((a.samples[k].state.z - b.samples[k].state.z).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Invariance, FlippingAnEdgeLeavesTrajectoryUnchanged) {
    const auto [net, x0] = from_bundled("triangle_cyclic");
    const auto a = simulate(net, x0);
    for (std::size_t j = 0; j < 3; ++j) {
        const Network flipped = net.with_flipped_edge(j);
        const auto b = simulate(flipped, NetworkState::from_positions(flipped, x0.q, x0.p));
        ASSERT_EQ(a.samples.size(), b.samples.size());
        for (std::size_t k = 0; k < a.samples.size(); ++k) {
            EXPECT_LE((a.samples[k].state.q - b.samples[k].state.q).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_NEAR(a.samples[k].hamiltonian, b.samples[k].hamiltonian, 1e-10);
        }
    }
}

TEST(Simulate, InvalidSettingsRejected) {
    const auto [net, x0] = from_bundled("two_agent_linear");
    SimulationSettings s;
    s.dt = 0.0;
    EXPECT_THROW(simulate(net, x0, s), ValidationError);
    s = {};
    s.dt_min = 1.0;
    EXPECT_THROW(simulate(net, x0, s), ValidationError);
}
