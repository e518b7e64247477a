#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "phgame/network.hpp"
#include "phgame/random.hpp"

namespace phgame {

// Game-side view of the network. Player i decides x_i = (q_i; qdot_i) in a
// box X_i and minimizes
//   J_i(x) = 1/2 |qdot_i|^2 + sum_{l in L_i} h_l(z_l).
// The collective decision is x = (q; qdot) and maps to the port-Hamiltonian
// state through (z; p) = blockdiag(B-bar, I) x.

/// Componentwise bounds on one player's decision (2n entries: position
/// block then velocity block).
struct DecisionBox {
    Vector lower;
    Vector upper;

    bool contains(const Eigen::Ref<const Vector>& xi) const;
    bool interior(const Eigen::Ref<const Vector>& xi) const;

    friend bool operator==(const DecisionBox& a, const DecisionBox& b) {
        return a.lower.size() == b.lower.size() && a.upper.size() == b.upper.size() && a.lower == b.lower &&
               a.upper == b.upper;
    }
};

/// Multiplies player's weight on one incident edge potential. Any factor
/// other than 1 breaks the symmetry the potential-game property relies on;
/// used for negative controls.
struct ObjectiveScaling {
    std::size_t player = 0;
    std::size_t edge = 0;
    double factor = 1.0;

    friend bool operator==(const ObjectiveScaling&, const ObjectiveScaling&) = default;
};

class PotentialGame {
public:
    /// Throws ValidationError if the box count or sizes are wrong, a box is
    /// empty, or a scaling refers to an edge the player is not on.
    PotentialGame(Network network, std::vector<DecisionBox> boxes, std::vector<ObjectiveScaling> scalings = {});

    const Network& network() const noexcept { return network_; }
    const std::vector<DecisionBox>& boxes() const noexcept { return boxes_; }
    const DecisionBox& box(std::size_t player) const { return boxes_.at(player); }
    std::size_t num_players() const noexcept { return network_.num_agents(); }

    /// Weight of edge l in player i's objective (1 unless scaled).
    double weight(std::size_t player, std::size_t edge) const;

    /// Player i's block (q_i; qdot_i) of a collective decision.
    Vector player_decision(const Vector& x, std::size_t player) const;
    /// Copy of x with player i's block replaced.
    Vector with_player_decision(Vector x, std::size_t player, const Vector& xi) const;

    bool feasible(const Vector& x) const;

private:
    Network network_;
    std::vector<DecisionBox> boxes_;
    Matrix weights_;
};

/// Boxes large enough that a closed-loop run from `initial` never reaches
/// them: positions within (N - 1) times the largest reachable edge length
/// of the initial centroid (plus the centroid drift over `horizon`),
/// velocities within sqrt(2 H(0)) + 1.
std::vector<DecisionBox> default_decision_boxes(const Network& network, const NetworkState& initial,
                                                double horizon);

NetworkState state_from_collective(const Network& network, const Vector& x);
Vector to_port_hamiltonian(const Network& network, const Vector& x);

double local_objective(const PotentialGame& game, std::size_t player, const Vector& x);

/// H of the mapped state, summed edge by edge.
double potential_function(const Network& network, const Vector& x);

/// Same potential summed player by player, each edge charged to its
/// later endpoint in index order.
double potential_function_ordered(const Network& network, const Vector& x);

struct ExactPotentialCheck {
    bool passed = true;
    std::size_t samples = 0;
    std::size_t failures = 0;
    /// max |dJ_i - dH| / max(1, |dH|) over all samples.
    double max_deviation = 0.0;
};

/// Samples unilateral deviations (x, i, y_i) inside the boxes and the spring
/// domains and checks J_i(x) - J_i(y_i, x_-i) = H(x) - H(y_i, x_-i).
ExactPotentialCheck check_exact_potential(const PotentialGame& game, std::size_t sample_count,
                                          std::uint64_t seed, double tolerance = 1e-9);

/// Random collective decision inside the boxes with every edge inside its
/// spring domain (barrier edges at most critical_distance - 1e-6).
Vector sample_feasible_decision(const PotentialGame& game, Rng& rng);
/// Random replacement for player i's block keeping the decision feasible.
Vector sample_player_deviation(const PotentialGame& game, std::size_t player, const Vector& x, Rng& rng);

/// F(x) = (grad_{x_i} J_i(x))_i arranged as all position blocks then all
/// velocity blocks, computed player by player from incident edges.
Vector pseudo_gradient(const PotentialGame& game, const Vector& x);

/// blockdiag(B-bar^T, I) grad H(x_pH). Equals pseudo_gradient for unscaled
/// objectives.
Vector pseudo_gradient_factored(const Network& network, const Vector& x);

enum class EquilibriumVerdict {
    variational_equilibrium,
    not_equilibrium,
    /// Stationarity holds only up to an active box constraint; not decided.
    indeterminate,
    /// The point lies outside the decision boxes.
    infeasible,
};

std::string_view to_string(EquilibriumVerdict verdict);

struct EquilibriumReport {
    double pseudo_gradient_norm = 0.0;  ///< |F(x)|_inf
    double momentum_norm = 0.0;         ///< |qdot|_inf
    double force_residual = 0.0;        ///< |B-bar^T dH/dz|_inf
    double potential_value = 0.0;
    bool is_variational_equilibrium = false;
    bool interior = false;
    EquilibriumVerdict verdict = EquilibriumVerdict::not_equilibrium;
    std::vector<double> per_player_gradient_norms;
    /// max_j | |z_j| - r_j |
    double max_rest_length_deviation = 0.0;
    /// Certified, but some spring is not at its rest length (a stationary
    /// point other than the global minimum of H).
    bool alternative_equilibrium = false;
};

struct CertificationTolerances {
    double gradient = 1e-6;
    /// Rest-length deviation above which a certified point is flagged as an
    /// alternative equilibrium.
    double rest_length = 1e-3;
};

EquilibriumReport certify_equilibrium(const PotentialGame& game, const Vector& x,
                                      const CertificationTolerances& tolerances = {});

}  // namespace phgame
