#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "phgame/dynamics.hpp"

namespace phgame {

/// Time-dependent input u(t) in R^{nN}.
using InputSignal = std::function<Vector(double)>;

/// Sum of three sinusoids per coordinate with random frequencies and
/// phases, scaled so that |u_k(t)| <= amplitude for all t.
InputSignal random_input_signal(Eigen::Index size, double amplitude, std::uint64_t seed);

enum class PortConnection {
    /// zdot = B-bar p, pdot = u (the agents alone).
    open_loop,
    /// Closed loop plus an external force: pdot = closed-loop pdot + u.
    closed_loop,
};

/// Energy bookkeeping along a driven trajectory. `supplied` is the running
/// integral of u^T y with y = p; it is integrated alongside the state with
/// the same RK4 steps.
struct SupplyTrace {
    std::vector<double> t;
    std::vector<double> hamiltonian;
    std::vector<double> kinetic;
    std::vector<double> supplied;
    /// False if the run stopped early at a barrier.
    bool completed = true;
};

SupplyTrace integrate_supply(const Network& network, const NetworkState& initial, const InputSignal& input,
                             PortConnection connection, double dt, double t_end, std::size_t sample_every = 1);

enum class Storage { hamiltonian, kinetic };

/// max_t [V(t) - V(0) - integral u^T y]; the dissipation inequality holds
/// along the trace when this is <= the integration tolerance.
double max_storage_excess(const SupplyTrace& trace, Storage storage);

}  // namespace phgame
