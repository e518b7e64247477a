#pragma once

#include <limits>
#include <variant>

#include "phgame/graph.hpp"

namespace phgame {

/// h(z) = 1/2 k (|z| - r)^2.
struct ConstantStiffness {
    double stiffness = 1.0;

    friend bool operator==(const ConstantStiffness&, const ConstantStiffness&) = default;
};

/// Piecewise barrier potential:
///   h(z) = k1 (|z| - r)^2                    for |z| <= r
///   h(z) = k2 / (rc - |z|) * (|z| - r)^2     for r < |z| < rc
/// Both pieces and their derivatives vanish at |z| = r, so h is C^1 although
/// the effective stiffness jumps there. h grows without bound as |z| -> rc.
struct BarrierStiffness {
    double inner_stiffness = 1.0;
    double outer_stiffness = 1.0;

    friend bool operator==(const BarrierStiffness&, const BarrierStiffness&) = default;
};

/// Evaluations closer than this to the critical distance of a barrier spring
/// count as domain violations.
inline constexpr double kBarrierGuard = 1e-9;

class SpringModel {
public:
    using Stiffness = std::variant<ConstantStiffness, BarrierStiffness>;

    /// Throws ValidationError unless k > 0, 0 <= rest_length <= critical_distance.
    /// Constant springs may leave the critical distance at +inf (no constraint).
    SpringModel(Stiffness stiffness, double rest_length,
                double critical_distance = std::numeric_limits<double>::infinity());

    static SpringModel constant(double k, double rest_length,
                                double critical_distance = std::numeric_limits<double>::infinity());
    static SpringModel barrier(double k_inner, double k_outer, double rest_length, double critical_distance);

    const Stiffness& stiffness() const noexcept { return stiffness_; }
    double rest_length() const noexcept { return rest_length_; }
    double critical_distance() const noexcept { return critical_distance_; }
    bool is_barrier() const noexcept { return std::holds_alternative<BarrierStiffness>(stiffness_); }

    /// Largest admissible length: rc - kBarrierGuard for barriers, +inf otherwise.
    double max_length() const noexcept;

    /// Potential as a function of the edge length. Throws DomainViolation
    /// for barrier springs at or beyond max_length().
    double potential(double length) const;

    /// d h / d |z|.
    double radial_derivative(double length) const;

    /// Coefficient c with grad h(z) = c z. Throws SingularConfiguration at
    /// |z| = 0 when the rest length is positive; for zero rest length the
    /// gradient is extended by continuity.
    double gradient_scale(double length) const;

    friend bool operator==(const SpringModel&, const SpringModel&) = default;

private:
    Stiffness stiffness_;
    double rest_length_;
    double critical_distance_;
};

/// Closed-form pieces of the barrier potential, exposed for seam checks.
namespace barrier_piece {
double inner_potential(double k_inner, double rest_length, double length);
double outer_potential(double k_outer, double rest_length, double critical_distance, double length);
double inner_derivative(double k_inner, double rest_length, double length);
double outer_derivative(double k_outer, double rest_length, double critical_distance, double length);
}  // namespace barrier_piece

/// Spring plus damper attached to one edge.
struct CouplingSpec {
    SpringModel spring;
    /// n x n symmetric positive definite damping matrix D^c_j.
    Matrix damping;

    /// Throws ValidationError if the damping matrix is not symmetric
    /// positive definite.
    CouplingSpec(SpringModel spring, Matrix damping);
    /// Isotropic damping d I_n.
    CouplingSpec(SpringModel spring, double damping, std::size_t dimension);

    /// True when the damping matrix equals d I for some scalar d.
    bool isotropic_damping() const;

    friend bool operator==(const CouplingSpec& a, const CouplingSpec& b) {
        return a.spring == b.spring && a.damping.rows() == b.damping.rows() &&
               a.damping.cols() == b.damping.cols() && a.damping == b.damping;
    }
};

double spring_potential(const SpringModel& spring, const Eigen::Ref<const Vector>& z);
Vector spring_gradient(const SpringModel& spring, const Eigen::Ref<const Vector>& z);

/// f_j = grad h(z_j) + D^c_j w_j.
Vector edge_force(const CouplingSpec& coupling, const Eigen::Ref<const Vector>& z,
                  const Eigen::Ref<const Vector>& w);

}  // namespace phgame
