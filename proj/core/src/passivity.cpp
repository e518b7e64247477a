#include "phgame/passivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phgame/errors.hpp"
#include "phgame/integrator.hpp"
#include "phgame/random.hpp"

namespace phgame {

InputSignal random_input_signal(Eigen::Index size, double amplitude, std::uint64_t seed) {
    constexpr int kModes = 3;
    Rng rng(seed);
    Matrix weight(size, kModes);
    Matrix frequency(size, kModes);
    Matrix phase(size, kModes);
    for (Eigen::Index k = 0; k < size; ++k) {
        for (int m = 0; m < kModes; ++m) {
            weight(k, m) = rng.uniform(-1.0, 1.0);
            frequency(k, m) = rng.uniform(0.1, 3.0);
            phase(k, m) = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
    }
    const double scale = amplitude / static_cast<double>(kModes);
    return [=](double t) {
        Vector u(size);
        for (Eigen::Index k = 0; k < size; ++k) {
            double v = 0.0;
            for (int m = 0; m < kModes; ++m) {
                v += weight(k, m) * std::sin(frequency(k, m) * t + phase(k, m));
            }
            u(k) = scale * v;
        }
        return u;
    };
}

SupplyTrace integrate_supply(const Network& network, const NetworkState& initial, const InputSignal& input,
                             PortConnection connection, double dt, double t_end, std::size_t sample_every) {
    if (!(dt > 0.0) || !(t_end >= 0.0) || sample_every == 0) {
        throw ValidationError("integrate_supply: dt must be positive, t_end non-negative, sample_every >= 1");
    }
    const auto nn = network.agent_coords();

    // x = (q, p, supplied)
    auto field = [&](double t, const Vector& x) {
        const auto s = NetworkState::from_positions(network, x.head(nn), x.segment(nn, nn));
        const Vector u = input(t);
        const auto rate = connection == PortConnection::open_loop ? open_loop_rhs(network, s, u)
                                                                  : closed_loop_rhs(network, s);
        Vector dx(2 * nn + 1);
        dx.head(nn) = s.p;
        dx.segment(nn, nn) = connection == PortConnection::open_loop ? rate.p_dot : Vector(rate.p_dot + u);
        dx(2 * nn) = u.dot(output(s));
        return dx;
    };

    SupplyTrace trace;
    auto record = [&](double t, const Vector& x) {
        const auto s = NetworkState::from_positions(network, x.head(nn), x.segment(nn, nn));
        trace.t.push_back(t);
        trace.hamiltonian.push_back(hamiltonian(network, s));
        trace.kinetic.push_back(kinetic_energy(s));
        trace.supplied.push_back(x(2 * nn));
    };

    Vector x(2 * nn + 1);
    x << initial.q, initial.p, 0.0;
    record(0.0, x);

    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k - 1) * dt;
        try {
            x = rk4_step(field, t, x, dt);
            if (k % sample_every == 0 || k == steps) {
                record(static_cast<double>(k) * dt, x);
            }
        } catch (const DomainViolation&) {
            trace.completed = false;
            break;
        }
    }
    return trace;
}

double max_storage_excess(const SupplyTrace& trace, Storage storage) {
    const auto& V = storage == Storage::hamiltonian ? trace.hamiltonian : trace.kinetic;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < V.size(); ++k) {
        worst = std::max(worst, V[k] - V.front() - trace.supplied[k]);
    }
    return worst;
}

}  // namespace phgame
