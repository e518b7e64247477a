#include "phgame/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "phgame/errors.hpp"
#include "phgame/integrator.hpp"

namespace phgame {

std::string_view to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::converged:
            return "converged";
        case TerminationReason::t_max_reached:
            return "t_max_reached";
        case TerminationReason::domain_violation:
            return "domain_violation";
        case TerminationReason::singular_configuration:
            return "singular_configuration";
    }
    return "unknown";
}

void check_initial_feasibility(const Network& network, const NetworkState& state, double domain_margin) {
    const auto lengths = edge_lengths(network, state);
    for (std::size_t j = 0; j < network.num_edges(); ++j) {
        const auto& spring = network.coupling(j).spring;
        const double length = lengths(static_cast<Eigen::Index>(j));
        if (spring.is_barrier() && !(length <= spring.critical_distance() - domain_margin)) {
            throw ValidationError("edge " + std::to_string(j + 1) + " starts at length " + std::to_string(length) +
                                  ", outside the feasible radius " +
                                  std::to_string(spring.critical_distance() - domain_margin));
        }
        if (length == 0.0 && spring.rest_length() > 0.0) {
            throw ValidationError("edge " + std::to_string(j + 1) +
                                  " starts at zero length with positive rest length");
        }
    }
}

namespace {

/// Packs the integrated variables into one vector and evaluates the
/// closed-loop field on it.
class ClosedLoopField {
public:
    ClosedLoopField(const Network& network, StateMode mode) : network_(network), mode_(mode) {}

    Vector pack(const NetworkState& s) const {
        const auto nn = network_.agent_coords();
        if (mode_ == StateMode::positions) {
            Vector x(2 * nn);
            x << s.q, s.p;
            return x;
        }
        Vector x(network_.edge_coords() + 2 * nn);
        x << s.z, s.q, s.p;
        return x;
    }

    NetworkState unpack(const Vector& x) const {
        const auto nn = network_.agent_coords();
        if (mode_ == StateMode::positions) {
            return NetworkState::from_positions(network_, x.head(nn), x.tail(nn));
        }
        const auto nm = network_.edge_coords();
        return {x.segment(nm, nn), x.tail(nn), x.head(nm)};
    }

    Vector operator()(double /*t*/, const Vector& x) const {
        const auto s = unpack(x);
        const auto rate = closed_loop_rhs(network_, s);
        if (mode_ == StateMode::positions) {
            Vector dx(x.size());
            dx << s.p, rate.p_dot;
            return dx;
        }
        Vector dx(x.size());
        dx << rate.z_dot, s.p, rate.p_dot;
        return dx;
    }

private:
    const Network& network_;
    StateMode mode_;
};

struct StepResult {
    Vector x;
    double hamiltonian;
};

class Integrator {
public:
    Integrator(const Network& network, const SimulationSettings& settings)
        : network_(network), settings_(settings), field_(network, settings.state_mode) {}

    const ClosedLoopField& field() const { return field_; }

    /// One macro step of length h; barrier crossings are resolved by
    /// recursive halving.
    StepResult advance(const Vector& x, double t, double h, IntegrationStats& stats) const {
        try {
            Vector next = rk4_step(field_, t, x, h);
            const double H = hamiltonian(network_, field_.unpack(next));
            stats.smallest_step = std::min(stats.smallest_step, h);
            return {std::move(next), H};
        } catch (const DomainViolation&) {
            const double half = 0.5 * h;
            if (half < settings_.dt_min) {
                throw;
            }
            ++stats.rejected_steps;
            auto first = advance(x, t, half, stats);
            return advance(first.x, t + half, half, stats);
        }
    }

private:
    const Network& network_;
    const SimulationSettings& settings_;
    ClosedLoopField field_;
};

TrajectorySample make_sample(const Network& network, double t, NetworkState state) {
    TrajectorySample s;
    s.t = t;
    s.hamiltonian = hamiltonian(network, state);
    s.edge_lengths = edge_lengths(network, state);
    s.control = control_law(network, state);
    s.state = std::move(state);
    return s;
}

void validate_settings(const SimulationSettings& s) {
    if (!(s.dt > 0.0) || !(s.t_max > 0.0) || !(s.output_interval > 0.0) || !(s.dt_min > 0.0)) {
        throw ValidationError("dt, t_max, output_interval and dt_min must all be positive");
    }
    if (s.dt_min > s.dt) {
        throw ValidationError("dt_min must not exceed dt");
    }
    if (!(s.tolerances.momentum >= 0.0) || !(s.tolerances.force >= 0.0)) {
        throw ValidationError("equilibrium tolerances must be non-negative");
    }
}

}  // namespace

Trajectory simulate(const Network& network, const NetworkState& initial, const SimulationSettings& settings) {
    validate_settings(settings);
    check_initial_feasibility(network, initial);

    Trajectory traj;
    traj.integrator = settings.adaptive ? "rk4-adaptive" : "rk4";
    traj.step_size = settings.dt;
    auto& stats = traj.stats;

    const Integrator integrator(network, settings);
    const auto& Bbar = network.expanded_incidence();

    NetworkState current = initial;
    if (settings.state_mode == StateMode::redundant) {
        current.z = relative_distances(Bbar, current.q);
    }
    Vector x = integrator.field().pack(current);
    double H = hamiltonian(network, current);

    traj.samples.push_back(make_sample(network, 0.0, current));
    if (detect_equilibrium(network, current, settings.tolerances).at_equilibrium) {
        traj.reason = TerminationReason::converged;
        return traj;
    }

    double t = 0.0;
    std::size_t next_sample_index = 1;
    double nominal = settings.dt;
    bool last_recorded = true;

    while (true) {
        const double target = std::min(static_cast<double>(next_sample_index) * settings.output_interval,
                                       settings.t_max);
        const double remaining = target - t;
        // Split the span to the next sample evenly into steps no longer than
        // the nominal step.
        const double substeps = std::max(1.0, std::ceil(remaining / nominal - 1e-9));
        const double h = substeps == 1.0 ? remaining : remaining / substeps;

        StepResult step;
        try {
            step = integrator.advance(x, t, h, stats);
            if (settings.adaptive) {
                double trial = h;
                while (step.hamiltonian - H > settings.hamiltonian_increase_tolerance &&
                       0.5 * trial >= settings.dt_min) {
                    ++stats.rejected_steps;
                    trial *= 0.5;
                    step = integrator.advance(x, t, trial, stats);
                }
                if (trial < h) {
                    nominal = trial;
                    t += trial;
                } else {
                    nominal = std::min(2.0 * nominal, settings.dt);
                    t = substeps == 1.0 ? target : t + h;
                }
            } else {
                t = substeps == 1.0 ? target : t + h;
            }
        } catch (const DomainViolation& e) {
            traj.reason = TerminationReason::domain_violation;
            traj.diagnostic = e.what();
            break;
        } catch (const SingularConfiguration& e) {
            traj.reason = TerminationReason::singular_configuration;
            traj.diagnostic = e.what();
            break;
        }

        ++stats.steps;
        const double increase = step.hamiltonian - H;
        stats.max_step_increase = std::max(stats.max_step_increase, increase);
        if (increase > settings.hamiltonian_increase_tolerance) {
            ++stats.steps_above_tolerance;
        }
        x = std::move(step.x);
        H = step.hamiltonian;
        current = integrator.field().unpack(x);

        if (settings.state_mode == StateMode::redundant) {
            const Vector projected = Bbar * current.q;
            stats.max_consistency_drift =
                std::max(stats.max_consistency_drift, (current.z - projected).cwiseAbs().maxCoeff());
            if (settings.reproject) {
                current.z = projected;
                x = integrator.field().pack(current);
            }
        }

        last_recorded = false;
        if (t >= target && target == static_cast<double>(next_sample_index) * settings.output_interval) {
            traj.samples.push_back(make_sample(network, t, current));
            ++next_sample_index;
            last_recorded = true;
        }

        if (detect_equilibrium(network, current, settings.tolerances).at_equilibrium) {
            traj.reason = TerminationReason::converged;
            break;
        }
        if (t >= settings.t_max) {
            traj.reason = TerminationReason::t_max_reached;
            break;
        }
    }

    if (!last_recorded) {
        traj.samples.push_back(make_sample(network, t, current));
    }
    return traj;
}

}  // namespace phgame
