#include "phgame/dynamics.hpp"

#include <string>

#include "phgame/errors.hpp"

namespace phgame {

namespace {

void check_state(const Network& network, const NetworkState& state) {
    if (state.z.size() != network.edge_coords() || state.p.size() != network.agent_coords()) {
        throw DimensionError("state does not match the network: expected z in R^" +
                             std::to_string(network.edge_coords()) + " and p in R^" +
                             std::to_string(network.agent_coords()));
    }
}

template <typename Fn>
auto for_edge(std::size_t j, Fn&& fn) {
    try {
        return fn();
    } catch (const DomainViolation& e) {
        throw e.at_edge(j);
    } catch (const SingularConfiguration& e) {
        throw e.at_edge(j);
    }
}

}  // namespace

double kinetic_energy(const NetworkState& state) { return 0.5 * state.p.squaredNorm(); }

double potential_energy(const Network& network, const NetworkState& state) {
    check_state(network, state);
    const auto n = static_cast<Eigen::Index>(network.dimension());
    double total = 0.0;
    for (std::size_t j = 0; j < network.num_edges(); ++j) {
        const double length = state.z.segment(static_cast<Eigen::Index>(j) * n, n).norm();
        total += for_edge(j, [&] { return network.coupling(j).spring.potential(length); });
    }
    return total;
}

double hamiltonian(const Network& network, const NetworkState& state) {
    return kinetic_energy(state) + potential_energy(network, state);
}

HamiltonianGradient hamiltonian_gradient(const Network& network, const NetworkState& state) {
    check_state(network, state);
    const auto n = static_cast<Eigen::Index>(network.dimension());
    HamiltonianGradient g{Vector(state.z.size()), state.p};
    for (std::size_t j = 0; j < network.num_edges(); ++j) {
        const auto zj = state.z.segment(static_cast<Eigen::Index>(j) * n, n);
        const double scale = for_edge(j, [&] { return network.coupling(j).spring.gradient_scale(zj.norm()); });
        g.dz.segment(static_cast<Eigen::Index>(j) * n, n) = scale * zj;
    }
    return g;
}

Vector agent_spring_forces(const Network& network, const NetworkState& state) {
    return network.expanded_incidence().transpose() * hamiltonian_gradient(network, state).dz;
}

Vector control_law(const Network& network, const NetworkState& state) {
    const auto g = hamiltonian_gradient(network, state);
    const auto& Bbar = network.expanded_incidence();
    return -(Bbar.transpose() * (network.damping() * (Bbar * g.dp) + g.dz));
}

Vector agent_control(const Network& network, const NetworkState& state, std::size_t agent) {
    check_state(network, state);
    const auto n = static_cast<Eigen::Index>(network.dimension());
    const auto& graph = network.graph();
    Vector u = Vector::Zero(n);
    for (const std::size_t j : graph.incident_edges(agent)) {
        const auto& e = graph.edge(j);
        const Vector w = state.p.segment(static_cast<Eigen::Index>(e.head) * n, n) -
                         state.p.segment(static_cast<Eigen::Index>(e.tail) * n, n);
        const Vector f = for_edge(j, [&] {
            return edge_force(network.coupling(j), state.z.segment(static_cast<Eigen::Index>(j) * n, n), w);
        });
        const double b = agent == e.head ? 1.0 : -1.0;
        u -= b * f;
    }
    return u;
}

StateRate open_loop_rhs(const Network& network, const NetworkState& state, const Vector& input) {
    check_state(network, state);
    if (input.size() != network.agent_coords()) {
        throw DimensionError("open_loop_rhs: input must have " + std::to_string(network.agent_coords()) +
                             " entries");
    }
    // The open loop only reads dH/dp = p, but the state must still lie in
    // the spring domains for H to be defined.
    const auto g = hamiltonian_gradient(network, state);
    return {network.expanded_incidence() * g.dp, input};
}

StateRate closed_loop_rhs(const Network& network, const NetworkState& state) {
    const auto g = hamiltonian_gradient(network, state);
    const auto& Bbar = network.expanded_incidence();
    return {Bbar * g.dp, -(Bbar.transpose() * g.dz) - network.dissipation() * g.dp};
}

double hamiltonian_rate(const Network& network, const NetworkState& state) {
    check_state(network, state);
    const Vector w = network.expanded_incidence() * state.p;
    return -w.dot(network.damping() * w);
}

Matrix collective_matrix(const Network& network) {
    const auto& Bbar = network.expanded_incidence();
    const auto nm = network.edge_coords();
    const auto nn = network.agent_coords();
    Matrix K = Matrix::Zero(nm + nn, nm + nn);
    K.topRightCorner(nm, nn) = -Bbar;
    K.bottomLeftCorner(nn, nm) = Bbar.transpose();
    K.bottomRightCorner(nn, nn) = network.dissipation();
    return K;
}

EquilibriumCheck detect_equilibrium(const Network& network, const NetworkState& state,
                                    const EquilibriumTolerances& tolerances) {
    EquilibriumCheck check;
    check.momentum_residual = state.p.size() ? state.p.cwiseAbs().maxCoeff() : 0.0;
    check.force_residual = agent_spring_forces(network, state).cwiseAbs().maxCoeff();
    check.at_equilibrium =
        check.momentum_residual <= tolerances.momentum && check.force_residual <= tolerances.force;
    return check;
}

Vector edge_lengths(const Network& network, const NetworkState& state) {
    check_state(network, state);
    const auto n = static_cast<Eigen::Index>(network.dimension());
    Vector lengths(static_cast<Eigen::Index>(network.num_edges()));
    for (Eigen::Index j = 0; j < lengths.size(); ++j) {
        lengths(j) = state.z.segment(j * n, n).norm();
    }
    return lengths;
}

}  // namespace phgame
