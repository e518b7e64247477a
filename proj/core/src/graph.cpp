#include "phgame/graph.hpp"

#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "phgame/errors.hpp"

namespace phgame {

ConstraintGraph::ConstraintGraph(std::size_t num_agents, std::vector<Edge> edges, std::size_t dimension)
    : num_agents_(num_agents), edges_(std::move(edges)), dimension_(dimension), incident_(num_agents) {
    if (num_agents_ < 2) {
        throw ValidationError("graph needs at least 2 agents, got " + std::to_string(num_agents_));
    }
    if (edges_.empty()) {
        throw ValidationError("graph needs at least one edge");
    }
    if (dimension_ == 0) {
        throw ValidationError("ambient dimension must be positive");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t j = 0; j < edges_.size(); ++j) {
        const auto [tail, head] = edges_[j];
        if (tail >= num_agents_ || head >= num_agents_) {
            throw ValidationError("edge " + std::to_string(j + 1) + " references an agent outside 1.." +
                                  std::to_string(num_agents_));
        }
        if (tail == head) {
            throw ValidationError("edge " + std::to_string(j + 1) + " is a self-loop on agent " +
                                  std::to_string(tail + 1));
        }
        if (!seen.emplace(std::min(tail, head), std::max(tail, head)).second) {
            throw ValidationError("edge " + std::to_string(j + 1) + " duplicates the pair {" +
                                  std::to_string(tail + 1) + "," + std::to_string(head + 1) + "}");
        }
        incident_[tail].push_back(j);
        incident_[head].push_back(j);
    }
}

ConstraintGraph ConstraintGraph::with_flipped_edge(std::size_t j) const {
    auto flipped = edges_;
    std::swap(flipped.at(j).tail, flipped.at(j).head);
    return {num_agents_, std::move(flipped), dimension_};
}

IncidenceMatrix build_incidence(const ConstraintGraph& graph) {
    const auto N = static_cast<Eigen::Index>(graph.num_agents());
    const auto M = static_cast<Eigen::Index>(graph.num_edges());
    const auto n = static_cast<Eigen::Index>(graph.dimension());

    IncidenceMatrix result;
    result.entries = Matrix::Zero(N, M);
    for (Eigen::Index j = 0; j < M; ++j) {
        const auto& e = graph.edge(static_cast<std::size_t>(j));
        result.entries(static_cast<Eigen::Index>(e.tail), j) = -1.0;
        result.entries(static_cast<Eigen::Index>(e.head), j) = 1.0;
    }

    // B^T kron I_n: block (j, i) is b_{i,j} I_n.
    result.expanded = Matrix::Zero(n * M, n * N);
    for (Eigen::Index j = 0; j < M; ++j) {
        for (Eigen::Index i = 0; i < N; ++i) {
            const double b = result.entries(i, j);
            if (b != 0.0) {
                result.expanded.block(j * n, i * n, n, n) = b * Matrix::Identity(n, n);
            }
        }
    }
    return result;
}

Vector relative_distances(const Matrix& expanded_incidence, const Vector& positions) {
    if (expanded_incidence.cols() != positions.size()) {
        throw DimensionError("relative_distances: expanded incidence has " +
                             std::to_string(expanded_incidence.cols()) + " columns but q has " +
                             std::to_string(positions.size()) + " entries");
    }
    return expanded_incidence * positions;
}

Vector relative_distances(const ConstraintGraph& graph, const Vector& positions) {
    const auto n = static_cast<Eigen::Index>(graph.dimension());
    if (positions.size() != n * static_cast<Eigen::Index>(graph.num_agents())) {
        throw DimensionError("relative_distances: q has " + std::to_string(positions.size()) +
                             " entries, expected " + std::to_string(n * graph.num_agents()));
    }
    Vector z(n * static_cast<Eigen::Index>(graph.num_edges()));
    for (std::size_t j = 0; j < graph.num_edges(); ++j) {
        const auto& e = graph.edge(j);
        z.segment(static_cast<Eigen::Index>(j) * n, n) =
            positions.segment(static_cast<Eigen::Index>(e.head) * n, n) -
            positions.segment(static_cast<Eigen::Index>(e.tail) * n, n);
    }
    return z;
}

namespace {

std::size_t count_components(const ConstraintGraph& graph) {
    std::vector<std::size_t> parent(graph.num_agents());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::size_t components = graph.num_agents();
    for (const auto& e : graph.edges()) {
        const auto a = find(e.tail);
        const auto b = find(e.head);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

}  // namespace

GraphStructure analyze_structure(const ConstraintGraph& graph) {
    GraphStructure s;
    s.components = count_components(graph);
    s.connected = s.components == 1;
    s.acyclic = graph.num_edges() + s.components == graph.num_agents();
    s.incidence_rank = static_cast<std::size_t>(build_incidence(graph).entries.fullPivLu().rank());
    return s;
}

}  // namespace phgame
