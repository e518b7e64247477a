#include "phgame/network.hpp"

#include <string>
#include <utility>

#include "phgame/errors.hpp"

namespace phgame {

Network::Network(ConstraintGraph graph, std::vector<CouplingSpec> couplings)
    : graph_(std::move(graph)), couplings_(std::move(couplings)), incidence_(build_incidence(graph_)) {
    if (couplings_.size() != graph_.num_edges()) {
        throw ValidationError("network has " + std::to_string(graph_.num_edges()) + " edges but " +
                              std::to_string(couplings_.size()) + " couplings");
    }
    const auto n = static_cast<Eigen::Index>(graph_.dimension());
    damping_ = Matrix::Zero(edge_coords(), edge_coords());
    for (std::size_t j = 0; j < couplings_.size(); ++j) {
        if (couplings_[j].damping.rows() != n) {
            throw ValidationError("edge " + std::to_string(j + 1) + ": damping matrix must be " +
                                  std::to_string(n) + "x" + std::to_string(n));
        }
        damping_.block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(j) * n, n, n) =
            couplings_[j].damping;
    }
    dissipation_ = incidence_.expanded.transpose() * damping_ * incidence_.expanded;
}

Network Network::with_flipped_edge(std::size_t j) const {
    return {graph_.with_flipped_edge(j), couplings_};
}

NetworkState NetworkState::from_positions(const Network& network, Vector q, Vector p) {
    if (q.size() != network.agent_coords() || p.size() != network.agent_coords()) {
        throw DimensionError("state needs " + std::to_string(network.agent_coords()) +
                             " position and momentum entries");
    }
    NetworkState s;
    s.z = relative_distances(network.expanded_incidence(), q);
    s.q = std::move(q);
    s.p = std::move(p);
    return s;
}

Vector NetworkState::collective() const {
    Vector x(q.size() + p.size());
    x << q, p;
    return x;
}

}  // namespace phgame
