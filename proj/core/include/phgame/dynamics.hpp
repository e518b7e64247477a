#pragma once

#include "phgame/network.hpp"

namespace phgame {

// Closed-loop port-Hamiltonian model of the agent network.
//
// State (z; p) with z = B-bar q the stacked edge vectors and p the momenta.
//   H(z, p) = 1/2 sum_i |p_i|^2 + sum_j h_j(z_j)
// Open loop:   zdot = B-bar dH/dp,  pdot = u,  y = dH/dp
// Control:     u = -B-bar^T (D^c B-bar dH/dp + dH/dz)
// Closed loop: zdot = B-bar dH/dp,  pdot = -B-bar^T dH/dz - B-bar^T D^c B-bar dH/dp
//
// Every function reads z from the state; callers keep z consistent with q.
// Domain and singularity errors carry the index of the offending edge.

double kinetic_energy(const NetworkState& state);
double potential_energy(const Network& network, const NetworkState& state);
double hamiltonian(const Network& network, const NetworkState& state);

struct HamiltonianGradient {
    Vector dz;  ///< nM, per-edge spring gradients
    Vector dp;  ///< nN, equals p
};

HamiltonianGradient hamiltonian_gradient(const Network& network, const NetworkState& state);

/// Per-agent aggregated spring force B-bar^T dH/dz.
Vector agent_spring_forces(const Network& network, const NetworkState& state);

/// Matrix form of the distributed control law.
Vector control_law(const Network& network, const NetworkState& state);

/// Control of agent i computed only from the edges in L_i:
/// u_i = -sum_{l in L_i} b_{i,l} f_l with f_l the edge force.
Vector agent_control(const Network& network, const NetworkState& state, std::size_t agent);

struct StateRate {
    Vector z_dot;
    Vector p_dot;
};

StateRate open_loop_rhs(const Network& network, const NetworkState& state, const Vector& input);
StateRate closed_loop_rhs(const Network& network, const NetworkState& state);

/// Output y = dH/dp of the open loop.
inline const Vector& output(const NetworkState& state) { return state.p; }

/// Analytic dH/dt along the closed loop: -(dH/dp)^T B-bar^T D^c B-bar (dH/dp).
double hamiltonian_rate(const Network& network, const NetworkState& state);

/// K = [[0, -B-bar], [B-bar^T, B-bar^T D^c B-bar]] so that xdot_pH = -K grad H.
Matrix collective_matrix(const Network& network);

struct EquilibriumTolerances {
    double momentum = 1e-6;
    double force = 1e-6;
};

struct EquilibriumCheck {
    bool at_equilibrium = false;
    double momentum_residual = 0.0;  ///< |p|_inf
    double force_residual = 0.0;     ///< |B-bar^T dH/dz|_inf
};

/// Membership test for S = {(z; p) : p = 0, dH/dz in ker B-bar^T}.
EquilibriumCheck detect_equilibrium(const Network& network, const NetworkState& state,
                                    const EquilibriumTolerances& tolerances = {});

/// |z_j| per edge.
Vector edge_lengths(const Network& network, const NetworkState& state);

}  // namespace phgame
