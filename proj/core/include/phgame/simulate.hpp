#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "phgame/dynamics.hpp"

namespace phgame {

enum class TerminationReason { converged, t_max_reached, domain_violation, singular_configuration };

std::string_view to_string(TerminationReason reason);

/// How the integrator carries the state.
enum class StateMode {
    /// Integrate (q, p); z = B-bar q is recomputed at every evaluation.
    positions,
    /// Integrate (z, q, p) jointly with zdot = B-bar p. Exposes the drift of
    /// the redundant representation; see SimulationSettings::reproject.
    redundant,
};

struct SimulationSettings {
    double dt = 1e-3;
    double t_max = 100.0;
    double output_interval = 0.01;
    EquilibriumTolerances tolerances{};
    /// Adaptive mode halves the step whenever H rises by more than
    /// hamiltonian_increase_tolerance over one step and grows it back to dt.
    bool adaptive = false;
    double hamiltonian_increase_tolerance = 1e-8;
    /// Smallest step tried when a step crosses a barrier.
    double dt_min = 1e-9;
    StateMode state_mode = StateMode::positions;
    /// Redundant mode only: reset z to B-bar q after every step.
    bool reproject = false;
};

struct TrajectorySample {
    double t = 0.0;
    NetworkState state;
    double hamiltonian = 0.0;
    Vector edge_lengths;
    Vector control;
};

struct IntegrationStats {
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    /// Largest H(t_{k+1}) - H(t_k) over accepted steps; negative if H
    /// strictly decreased on every step.
    double max_step_increase = -std::numeric_limits<double>::infinity();
    /// Accepted steps whose H increase exceeded the tolerance.
    std::size_t steps_above_tolerance = 0;
    /// Largest |z - B-bar q|_inf seen (before reprojection).
    double max_consistency_drift = 0.0;
    double smallest_step = std::numeric_limits<double>::infinity();
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::string integrator = "rk4";
    double step_size = 0.0;
    TerminationReason reason = TerminationReason::t_max_reached;
    std::string diagnostic;
    IntegrationStats stats;

    const TrajectorySample& final_sample() const { return samples.back(); }
    bool converged() const { return reason == TerminationReason::converged; }
};

/// Throws ValidationError unless every barrier edge satisfies
/// |z_j| <= critical_distance - domain_margin and no edge with positive rest
/// length has zero length.
void check_initial_feasibility(const Network& network, const NetworkState& state, double domain_margin = 1e-6);

/// Integrates the closed loop with fixed-step RK4 (or the adaptive variant)
/// until detect_equilibrium succeeds or t_max is reached. Samples are taken
/// at t = 0, every output_interval, and at termination.
///
/// A step that crosses a barrier is retried as two half steps, recursively
/// down to dt_min; past that the run ends with domain_violation.
Trajectory simulate(const Network& network, const NetworkState& initial, const SimulationSettings& settings = {});

}  // namespace phgame
