#include "phgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "phgame/dynamics.hpp"
#include "phgame/errors.hpp"

namespace phgame {

namespace {

/// Feasibility radius used when sampling: keep barrier edges this far
/// inside the critical distance.
constexpr double kSamplingMargin = 1e-6;

double sampling_limit(const SpringModel& spring) {
    return spring.is_barrier() ? spring.critical_distance() - kSamplingMargin
                               : std::numeric_limits<double>::infinity();
}

Eigen::Index coords(const Network& net) { return net.agent_coords(); }

void check_collective(const Network& net, const Vector& x) {
    if (x.size() != 2 * coords(net)) {
        throw DimensionError("collective decision must have " + std::to_string(2 * coords(net)) + " entries");
    }
}

/// Edge vector z_l read straight from the positions in x.
Vector edge_vector(const Network& net, const Vector& x, std::size_t edge) {
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const auto& e = net.graph().edge(edge);
    return x.segment(static_cast<Eigen::Index>(e.head) * n, n) - x.segment(static_cast<Eigen::Index>(e.tail) * n, n);
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

bool edges_feasible(const Network& net, const Vector& x, const std::vector<std::size_t>& edges) {
    for (const auto j : edges) {
        if (!(edge_vector(net, x, j).norm() < sampling_limit(net.coupling(j).spring))) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> all_edges(const Network& net) {
    std::vector<std::size_t> edges(net.num_edges());
    for (std::size_t j = 0; j < edges.size(); ++j) {
        edges[j] = j;
    }
    return edges;
}

}  // namespace

bool DecisionBox::contains(const Eigen::Ref<const Vector>& xi) const {
    return ((xi - lower).array() >= 0.0).all() && ((upper - xi).array() >= 0.0).all();
}

bool DecisionBox::interior(const Eigen::Ref<const Vector>& xi) const {
    return ((xi - lower).array() > 0.0).all() && ((upper - xi).array() > 0.0).all();
}

PotentialGame::PotentialGame(Network network, std::vector<DecisionBox> boxes, std::vector<ObjectiveScaling> scalings)
    : network_(std::move(network)), boxes_(std::move(boxes)) {
    const auto block = static_cast<Eigen::Index>(2 * network_.dimension());
    if (boxes_.size() != network_.num_agents()) {
        throw ValidationError("need one decision box per player");
    }
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
        const auto& b = boxes_[i];
        if (b.lower.size() != block || b.upper.size() != block) {
            throw ValidationError("decision box of player " + std::to_string(i + 1) + " must have " +
                                  std::to_string(block) + " bounds");
        }
        if (!((b.upper - b.lower).array() > 0.0).all() || !b.lower.allFinite() || !b.upper.allFinite()) {
            throw ValidationError("decision box of player " + std::to_string(i + 1) +
                                  " must be finite with lower < upper");
        }
    }
    weights_ = Matrix::Ones(static_cast<Eigen::Index>(network_.num_agents()),
                            static_cast<Eigen::Index>(network_.num_edges()));
    for (const auto& s : scalings) {
        if (s.player >= network_.num_agents() || s.edge >= network_.num_edges()) {
            throw ValidationError("objective scaling refers to a missing player or edge");
        }
        const auto& e = network_.graph().edge(s.edge);
        if (e.tail != s.player && e.head != s.player) {
            throw ValidationError("objective scaling: edge " + std::to_string(s.edge + 1) + " does not involve player " +
                                  std::to_string(s.player + 1));
        }
        weights_(static_cast<Eigen::Index>(s.player), static_cast<Eigen::Index>(s.edge)) = s.factor;
    }
}

double PotentialGame::weight(std::size_t player, std::size_t edge) const {
    return weights_(static_cast<Eigen::Index>(player), static_cast<Eigen::Index>(edge));
}

Vector PotentialGame::player_decision(const Vector& x, std::size_t player) const {
    check_collective(network_, x);
    const auto n = static_cast<Eigen::Index>(network_.dimension());
    const auto offset = static_cast<Eigen::Index>(player) * n;
    Vector xi(2 * n);
    xi << x.segment(offset, n), x.segment(coords(network_) + offset, n);
    return xi;
}

Vector PotentialGame::with_player_decision(Vector x, std::size_t player, const Vector& xi) const {
    check_collective(network_, x);
    const auto n = static_cast<Eigen::Index>(network_.dimension());
    const auto offset = static_cast<Eigen::Index>(player) * n;
    x.segment(offset, n) = xi.head(n);
    x.segment(coords(network_) + offset, n) = xi.tail(n);
    return x;
}

bool PotentialGame::feasible(const Vector& x) const {
    for (std::size_t i = 0; i < num_players(); ++i) {
        if (!boxes_[i].contains(player_decision(x, i))) {
            return false;
        }
    }
    return edges_feasible(network_, x, all_edges(network_));
}

std::vector<DecisionBox> default_decision_boxes(const Network& network, const NetworkState& initial,
                                                double horizon) {
    const auto n = static_cast<Eigen::Index>(network.dimension());
    const auto N = static_cast<Eigen::Index>(network.num_agents());
    const double H0 = hamiltonian(network, initial);

    Vector centroid = Vector::Zero(n);
    Vector mean_velocity = Vector::Zero(n);
    for (Eigen::Index i = 0; i < N; ++i) {
        centroid += initial.q.segment(i * n, n);
        mean_velocity += initial.p.segment(i * n, n);
    }
    centroid /= static_cast<double>(N);
    mean_velocity /= static_cast<double>(N);

    // Along the closed loop H never exceeds H(0), which bounds every edge.
    double longest = 0.0;
    for (const auto& c : network.couplings()) {
        double bound = c.spring.critical_distance();
        if (!c.spring.is_barrier()) {
            const double k = std::get<ConstantStiffness>(c.spring.stiffness()).stiffness;
            bound = std::min(bound, c.spring.rest_length() + std::sqrt(2.0 * H0 / k));
        }
        longest = std::max(longest, bound);
    }
    for (Eigen::Index i = 0; i < N; ++i) {
        longest = std::max(longest, (initial.q.segment(i * n, n) - centroid).norm());
    }
    const double position_radius =
        static_cast<double>(N - 1) * longest + mean_velocity.norm() * horizon + 1.0;
    const double velocity_radius = std::sqrt(2.0 * H0) + 1.0;

    DecisionBox box;
    box.lower.resize(2 * n);
    box.upper.resize(2 * n);
    box.lower << (centroid.array() - position_radius).matrix(), Vector::Constant(n, -velocity_radius);
    box.upper << (centroid.array() + position_radius).matrix(), Vector::Constant(n, velocity_radius);
    return std::vector<DecisionBox>(static_cast<std::size_t>(N), box);
}

NetworkState state_from_collective(const Network& network, const Vector& x) {
    check_collective(network, x);
    return NetworkState::from_positions(network, x.head(coords(network)), x.tail(coords(network)));
}

Vector to_port_hamiltonian(const Network& network, const Vector& x) {
    check_collective(network, x);
    const auto nn = coords(network);
    Vector xph(network.edge_coords() + nn);
    xph << network.expanded_incidence() * x.head(nn), x.tail(nn);
    return xph;
}

double local_objective(const PotentialGame& game, std::size_t player, const Vector& x) {
    const auto& net = game.network();
    check_collective(net, x);
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const auto velocity = x.segment(coords(net) + static_cast<Eigen::Index>(player) * n, n);
    double J = 0.5 * velocity.squaredNorm();
    for (const auto l : net.graph().incident_edges(player)) {
        const double length = edge_vector(net, x, l).norm();
        J += game.weight(player, l) * for_edge(l, [&] { return net.coupling(l).spring.potential(length); });
    }
    return J;
}

double potential_function(const Network& network, const Vector& x) {
    return hamiltonian(network, state_from_collective(network, x));
}

double potential_function_ordered(const Network& network, const Vector& x) {
    check_collective(network, x);
    const auto n = static_cast<Eigen::Index>(network.dimension());
    const auto& graph = network.graph();
    double total = 0.0;
    for (std::size_t i = 0; i < graph.num_agents(); ++i) {
        total += 0.5 * x.segment(coords(network) + static_cast<Eigen::Index>(i) * n, n).squaredNorm();
        for (const auto l : graph.incident_edges(i)) {
            const auto& e = graph.edge(l);
            const std::size_t other = e.tail == i ? e.head : e.tail;
            if (other < i) {
                const double length = edge_vector(network, x, l).norm();
                total += for_edge(l, [&] { return network.coupling(l).spring.potential(length); });
            }
        }
    }
    return total;
}

Vector sample_feasible_decision(const PotentialGame& game, Rng& rng) {
    const auto& net = game.network();
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const auto nn = coords(net);
    const auto edges = all_edges(net);
    Vector x(2 * nn);

    auto draw_velocities = [&] {
        for (std::size_t i = 0; i < game.num_players(); ++i) {
            const auto& b = game.box(i);
            for (Eigen::Index c = 0; c < n; ++c) {
                x(nn + static_cast<Eigen::Index>(i) * n + c) = rng.uniform(b.lower(n + c), b.upper(n + c));
            }
        }
    };

    constexpr int kAttempts = 1000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        for (std::size_t i = 0; i < game.num_players(); ++i) {
            const auto& b = game.box(i);
            for (Eigen::Index c = 0; c < n; ++c) {
                x(static_cast<Eigen::Index>(i) * n + c) = rng.uniform(b.lower(c), b.upper(c));
            }
        }
        if (edges_feasible(net, x, edges)) {
            draw_velocities();
            return x;
        }
    }

    // Large boxes make joint rejection hopeless; cluster the agents in a
    // ball small enough that every pair is within the tightest domain.
    double tightest = std::numeric_limits<double>::infinity();
    for (const auto& c : net.couplings()) {
        tightest = std::min(tightest, sampling_limit(c.spring));
    }
    Vector center(n);
    Vector half_width(n);
    {
        const auto& b = game.box(0);
        center = 0.5 * (b.lower.head(n) + b.upper.head(n));
        half_width = 0.5 * (b.upper.head(n) - b.lower.head(n));
        for (std::size_t i = 1; i < game.num_players(); ++i) {
            const auto& bi = game.box(i);
            center = center.cwiseMax(bi.lower.head(n)).cwiseMin(bi.upper.head(n));
        }
    }
    const double radius = std::min(0.49 * tightest, 0.99 * half_width.minCoeff());
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        for (std::size_t i = 0; i < game.num_players(); ++i) {
            Vector offset(n);
            do {
                for (Eigen::Index c = 0; c < n; ++c) {
                    offset(c) = rng.uniform(-radius, radius);
                }
            } while (offset.norm() > radius);
            x.segment(static_cast<Eigen::Index>(i) * n, n) = center + offset;
        }
        bool inside = true;
        for (std::size_t i = 0; i < game.num_players() && inside; ++i) {
            inside = game.box(i).contains(game.player_decision(x, i));
        }
        if (inside && edges_feasible(net, x, edges)) {
            draw_velocities();
            return x;
        }
    }
    throw ValidationError("could not sample a feasible collective decision; decision boxes and spring domains "
                          "do not overlap");
}

Vector sample_player_deviation(const PotentialGame& game, std::size_t player, const Vector& x, Rng& rng) {
    const auto& net = game.network();
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const auto& b = game.box(player);
    const auto& edges = net.graph().incident_edges(player);
    const Vector current = game.player_decision(x, player);

    Vector yi(2 * n);
    constexpr int kAttempts = 10000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        for (Eigen::Index c = 0; c < 2 * n; ++c) {
            yi(c) = rng.uniform(b.lower(c), b.upper(c));
        }
        if (edges_feasible(net, game.with_player_decision(x, player, yi), edges)) {
            return yi;
        }
    }
    // Pull the uniform draw toward the current (feasible) decision until the
    // incident edges fit; the feasible set is open around x_i.
    for (double lambda = 0.5; lambda > 1e-12; lambda *= 0.5) {
        Vector candidate = current;
        candidate.head(n) = current.head(n) + lambda * (yi.head(n) - current.head(n));
        candidate.tail(n) = yi.tail(n);
        if (edges_feasible(net, game.with_player_decision(x, player, candidate), edges)) {
            return candidate;
        }
    }
    return current;
}

ExactPotentialCheck check_exact_potential(const PotentialGame& game, std::size_t sample_count, std::uint64_t seed,
                                          double tolerance) {
    Rng rng(seed);
    ExactPotentialCheck result;
    const auto& net = game.network();
    for (std::size_t s = 0; s < sample_count; ++s) {
        const Vector x = sample_feasible_decision(game, rng);
        const std::size_t i = rng.index(game.num_players());
        const Vector y = game.with_player_decision(x, i, sample_player_deviation(game, i, x, rng));

        const double dJ = local_objective(game, i, x) - local_objective(game, i, y);
        const double dH = potential_function(net, x) - potential_function(net, y);
        const double deviation = std::abs(dJ - dH) / std::max(1.0, std::abs(dH));
        result.max_deviation = std::max(result.max_deviation, deviation);
        if (!(deviation <= tolerance)) {
            ++result.failures;
        }
        ++result.samples;
    }
    result.passed = result.failures == 0;
    return result;
}

Vector pseudo_gradient(const PotentialGame& game, const Vector& x) {
    const auto& net = game.network();
    check_collective(net, x);
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const auto nn = coords(net);
    const auto& graph = net.graph();

    Vector F = Vector::Zero(2 * nn);
    for (std::size_t i = 0; i < graph.num_agents(); ++i) {
        const auto offset = static_cast<Eigen::Index>(i) * n;
        for (const auto l : graph.incident_edges(i)) {
            // d h_l(q_head - q_tail) / d q_i = b_{i,l} grad h_l(z_l)
            const Vector z = edge_vector(net, x, l);
            const double scale = for_edge(l, [&] { return net.coupling(l).spring.gradient_scale(z.norm()); });
            const double b = graph.edge(l).head == i ? 1.0 : -1.0;
            F.segment(offset, n) += game.weight(i, l) * b * scale * z;
        }
        F.segment(nn + offset, n) = x.segment(nn + offset, n);
    }
    return F;
}

Vector pseudo_gradient_factored(const Network& network, const Vector& x) {
    const auto g = hamiltonian_gradient(network, state_from_collective(network, x));
    const auto nn = coords(network);
    Vector F(2 * nn);
    F << network.expanded_incidence().transpose() * g.dz, g.dp;
    return F;
}

std::string_view to_string(EquilibriumVerdict verdict) {
    switch (verdict) {
        case EquilibriumVerdict::variational_equilibrium:
            return "variational_equilibrium";
        case EquilibriumVerdict::not_equilibrium:
            return "not_equilibrium";
        case EquilibriumVerdict::indeterminate:
            return "indeterminate";
        case EquilibriumVerdict::infeasible:
            return "infeasible";
    }
    return "unknown";
}

EquilibriumReport certify_equilibrium(const PotentialGame& game, const Vector& x,
                                      const CertificationTolerances& tolerances) {
    const auto& net = game.network();
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const auto nn = coords(net);

    EquilibriumReport r;
    const Vector F = pseudo_gradient(game, x);
    r.pseudo_gradient_norm = F.cwiseAbs().maxCoeff();
    r.force_residual = F.head(nn).cwiseAbs().maxCoeff();
    r.momentum_norm = x.tail(nn).cwiseAbs().maxCoeff();
    r.potential_value = potential_function(net, x);
    for (std::size_t i = 0; i < game.num_players(); ++i) {
        const auto offset = static_cast<Eigen::Index>(i) * n;
        Vector Fi(2 * n);
        Fi << F.segment(offset, n), F.segment(nn + offset, n);
        r.per_player_gradient_norms.push_back(Fi.cwiseAbs().maxCoeff());
    }
    for (std::size_t j = 0; j < net.num_edges(); ++j) {
        r.max_rest_length_deviation =
            std::max(r.max_rest_length_deviation,
                     std::abs(edge_vector(net, x, j).norm() - net.coupling(j).spring.rest_length()));
    }

    bool contained = true;
    r.interior = true;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
        const Vector xi = game.player_decision(x, i);
        contained = contained && game.box(i).contains(xi);
        r.interior = r.interior && game.box(i).interior(xi);
    }

    const bool stationary = r.pseudo_gradient_norm <= tolerances.gradient;
    if (!contained) {
        r.verdict = EquilibriumVerdict::infeasible;
    } else if (!r.interior) {
        r.verdict = EquilibriumVerdict::indeterminate;
    } else {
        r.verdict = stationary ? EquilibriumVerdict::variational_equilibrium : EquilibriumVerdict::not_equilibrium;
    }
    r.is_variational_equilibrium = r.verdict == EquilibriumVerdict::variational_equilibrium;
    r.alternative_equilibrium = r.is_variational_equilibrium && r.max_rest_length_deviation > tolerances.rest_length;
    return r;
}

}  // namespace phgame
