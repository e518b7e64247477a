#pragma once

#include <vector>

#include "phgame/couplings.hpp"
#include "phgame/graph.hpp"

namespace phgame {

/// Constraint graph plus one coupling per edge, with the matrices the
/// closed loop needs assembled once. Immutable after construction.
class Network {
public:
    /// Throws ValidationError when the coupling count differs from the edge
    /// count or a damping matrix is not n x n.
    Network(ConstraintGraph graph, std::vector<CouplingSpec> couplings);

    const ConstraintGraph& graph() const noexcept { return graph_; }
    const IncidenceMatrix& incidence() const noexcept { return incidence_; }
    const Matrix& expanded_incidence() const noexcept { return incidence_.expanded; }
    const std::vector<CouplingSpec>& couplings() const noexcept { return couplings_; }
    const CouplingSpec& coupling(std::size_t j) const { return couplings_.at(j); }

    /// D^c = blockdiag(D^c_j), nM x nM.
    const Matrix& damping() const noexcept { return damping_; }
    /// B-bar^T D^c B-bar, nN x nN.
    const Matrix& dissipation() const noexcept { return dissipation_; }

    std::size_t num_agents() const noexcept { return graph_.num_agents(); }
    std::size_t num_edges() const noexcept { return graph_.num_edges(); }
    std::size_t dimension() const noexcept { return graph_.dimension(); }
    Eigen::Index agent_coords() const noexcept {
        return static_cast<Eigen::Index>(graph_.num_agents() * graph_.dimension());
    }
    Eigen::Index edge_coords() const noexcept {
        return static_cast<Eigen::Index>(graph_.num_edges() * graph_.dimension());
    }

    /// Same couplings with edge j reversed.
    Network with_flipped_edge(std::size_t j) const;

private:
    ConstraintGraph graph_;
    std::vector<CouplingSpec> couplings_;
    IncidenceMatrix incidence_;
    Matrix damping_;
    Matrix dissipation_;
};

/// Port-Hamiltonian state (z; p) together with the absolute positions q.
/// Agents have unit mass, so p is also the velocity.
struct NetworkState {
    Vector q;
    Vector p;
    Vector z;

    /// Builds the state with z = B-bar q.
    static NetworkState from_positions(const Network& network, Vector q, Vector p);

    /// Game-side collective decision x = (q; qdot).
    Vector collective() const;
};

}  // namespace phgame
