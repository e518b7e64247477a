#include "phgame/couplings.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "phgame/errors.hpp"

namespace phgame {

namespace barrier_piece {

double inner_potential(double k_inner, double rest_length, double length) {
    const double s = length - rest_length;
    return k_inner * s * s;
}

double outer_potential(double k_outer, double rest_length, double critical_distance, double length) {
    const double s = length - rest_length;
    return k_outer / (critical_distance - length) * s * s;
}

double inner_derivative(double k_inner, double rest_length, double length) {
    return 2.0 * k_inner * (length - rest_length);
}

double outer_derivative(double k_outer, double rest_length, double critical_distance, double length) {
    const double s = length - rest_length;
    const double gap = critical_distance - length;
    return k_outer * (2.0 * s / gap + (s * s) / (gap * gap));
}

}  // namespace barrier_piece

SpringModel::SpringModel(Stiffness stiffness, double rest_length, double critical_distance)
    : stiffness_(std::move(stiffness)), rest_length_(rest_length), critical_distance_(critical_distance) {
    if (!(rest_length_ >= 0.0) || !std::isfinite(rest_length_)) {
        throw ValidationError("spring rest length must be finite and >= 0");
    }
    if (!(critical_distance_ > 0.0)) {
        throw ValidationError("spring critical distance must be > 0");
    }
    if (rest_length_ > critical_distance_) {
        throw ValidationError("spring rest length " + std::to_string(rest_length_) +
                              " exceeds critical distance " + std::to_string(critical_distance_));
    }
    if (const auto* c = std::get_if<ConstantStiffness>(&stiffness_)) {
        if (!(c->stiffness > 0.0) || !std::isfinite(c->stiffness)) {
            throw ValidationError("constant spring stiffness must be finite and > 0");
        }
    } else {
        const auto& b = std::get<BarrierStiffness>(stiffness_);
        if (!(b.inner_stiffness > 0.0) || !(b.outer_stiffness > 0.0) || !std::isfinite(b.inner_stiffness) ||
            !std::isfinite(b.outer_stiffness)) {
            throw ValidationError("barrier spring stiffnesses must be finite and > 0");
        }
        if (!std::isfinite(critical_distance_)) {
            throw ValidationError("barrier spring needs a finite critical distance");
        }
        if (rest_length_ >= critical_distance_ - kBarrierGuard) {
            throw ValidationError("barrier spring rest length must lie below the critical distance");
        }
    }
}

SpringModel SpringModel::constant(double k, double rest_length, double critical_distance) {
    return {ConstantStiffness{k}, rest_length, critical_distance};
}

SpringModel SpringModel::barrier(double k_inner, double k_outer, double rest_length, double critical_distance) {
    return {BarrierStiffness{k_inner, k_outer}, rest_length, critical_distance};
}

double SpringModel::max_length() const noexcept {
    return is_barrier() ? critical_distance_ - kBarrierGuard : std::numeric_limits<double>::infinity();
}

double SpringModel::potential(double length) const {
    if (const auto* c = std::get_if<ConstantStiffness>(&stiffness_)) {
        const double s = length - rest_length_;
        return 0.5 * c->stiffness * s * s;
    }
    const auto& b = std::get<BarrierStiffness>(stiffness_);
    if (length <= rest_length_) {
        return barrier_piece::inner_potential(b.inner_stiffness, rest_length_, length);
    }
    if (!(length < max_length())) {
        throw DomainViolation(length, critical_distance_);
    }
    return barrier_piece::outer_potential(b.outer_stiffness, rest_length_, critical_distance_, length);
}

double SpringModel::radial_derivative(double length) const {
    if (const auto* c = std::get_if<ConstantStiffness>(&stiffness_)) {
        return c->stiffness * (length - rest_length_);
    }
    const auto& b = std::get<BarrierStiffness>(stiffness_);
    if (length <= rest_length_) {
        return barrier_piece::inner_derivative(b.inner_stiffness, rest_length_, length);
    }
    if (!(length < max_length())) {
        throw DomainViolation(length, critical_distance_);
    }
    return barrier_piece::outer_derivative(b.outer_stiffness, rest_length_, critical_distance_, length);
}

double SpringModel::gradient_scale(double length) const {
    if (length == 0.0) {
        if (rest_length_ > 0.0) {
            throw SingularConfiguration();
        }
        // Zero rest length: h is quadratic near the origin.
        if (const auto* c = std::get_if<ConstantStiffness>(&stiffness_)) {
            return c->stiffness;
        }
        return 2.0 * std::get<BarrierStiffness>(stiffness_).inner_stiffness;
    }
    if (const auto* c = std::get_if<ConstantStiffness>(&stiffness_)) {
        return c->stiffness * (1.0 - rest_length_ / length);
    }
    const auto& b = std::get<BarrierStiffness>(stiffness_);
    if (length <= rest_length_) {
        return 2.0 * b.inner_stiffness * (1.0 - rest_length_ / length);
    }
    return radial_derivative(length) / length;
}

CouplingSpec::CouplingSpec(SpringModel spring_model, Matrix damping_matrix)
    : spring(std::move(spring_model)), damping(std::move(damping_matrix)) {
    if (damping.rows() == 0 || damping.rows() != damping.cols()) {
        throw ValidationError("damping matrix must be square and non-empty");
    }
    if (!damping.allFinite()) {
        throw ValidationError("damping matrix has non-finite entries");
    }
    if ((damping - damping.transpose()).cwiseAbs().maxCoeff() > 0.0) {
        throw ValidationError("damping matrix must be symmetric");
    }
    Eigen::LLT<Matrix> llt(damping);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("damping matrix must be positive definite");
    }
}

CouplingSpec::CouplingSpec(SpringModel spring_model, double d, std::size_t dimension)
    : CouplingSpec(std::move(spring_model), d * Matrix::Identity(static_cast<Eigen::Index>(dimension),
                                                                 static_cast<Eigen::Index>(dimension))) {}

bool CouplingSpec::isotropic_damping() const {
    const double d = damping(0, 0);
    return damping == d * Matrix::Identity(damping.rows(), damping.cols());
}

double spring_potential(const SpringModel& spring, const Eigen::Ref<const Vector>& z) {
    return spring.potential(z.norm());
}

Vector spring_gradient(const SpringModel& spring, const Eigen::Ref<const Vector>& z) {
    return spring.gradient_scale(z.norm()) * z;
}

Vector edge_force(const CouplingSpec& coupling, const Eigen::Ref<const Vector>& z,
                  const Eigen::Ref<const Vector>& w) {
    if (z.size() != coupling.damping.rows() || w.size() != z.size()) {
        throw DimensionError("edge_force: z, w and the damping matrix disagree in dimension");
    }
    return spring_gradient(coupling.spring, z) + coupling.damping * w;
}

}  // namespace phgame
