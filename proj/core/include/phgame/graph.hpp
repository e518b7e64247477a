#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace phgame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Oriented edge between two agents, 0-based. `tail` carries -1 in the
/// incidence matrix and `head` carries +1, so the relative position of the
/// edge is q_head - q_tail.
struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Distance-constraint graph over N agents living in R^n.
///
/// Construction validates the graph: at least two vertices and one edge, no
/// self-loops, no repeated vertex pair in either orientation, and all
/// indices in range. Immutable afterwards.
class ConstraintGraph {
public:
    ConstraintGraph(std::size_t num_agents, std::vector<Edge> edges, std::size_t dimension);

    std::size_t num_agents() const noexcept { return num_agents_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t j) const { return edges_.at(j); }

    /// Edges that touch agent i (the set L_i), in edge order.
    const std::vector<std::size_t>& incident_edges(std::size_t i) const { return incident_.at(i); }

    /// Same graph with edge j reversed.
    ConstraintGraph with_flipped_edge(std::size_t j) const;

    friend bool operator==(const ConstraintGraph& a, const ConstraintGraph& b) {
        return a.num_agents_ == b.num_agents_ && a.dimension_ == b.dimension_ && a.edges_ == b.edges_;
    }

private:
    std::size_t num_agents_;
    std::vector<Edge> edges_;
    std::size_t dimension_;
    std::vector<std::vector<std::size_t>> incident_;
};

/// Incidence matrix B (N x M, entries in {-1, 0, +1}) together with its
/// dimension expansion B-bar = B^T kron I_n (nM x nN), so that z = B-bar q.
struct IncidenceMatrix {
    Matrix entries;
    Matrix expanded;

    /// Sign of agent i on edge j: -1 tail, +1 head, 0 otherwise.
    double sign(std::size_t agent, std::size_t edge) const { return entries(agent, edge); }
};

IncidenceMatrix build_incidence(const ConstraintGraph& graph);

/// z = B-bar q. Throws DimensionError if q does not have nN entries.
Vector relative_distances(const Matrix& expanded_incidence, const Vector& positions);

/// Edge-local form of the relative distance map: z_j = q_head - q_tail.
Vector relative_distances(const ConstraintGraph& graph, const Vector& positions);

struct GraphStructure {
    bool connected = false;
    bool acyclic = false;
    std::size_t components = 0;
    /// Numerical rank of B; equals N - components for every graph.
    std::size_t incidence_rank = 0;
};

/// Connectivity and acyclicity. A graph is a spanning tree iff it is
/// connected and M = N - 1; acyclic in general iff M = N - components.
GraphStructure analyze_structure(const ConstraintGraph& graph);

}  // namespace phgame
