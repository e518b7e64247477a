#include "phgame/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "phgame/errors.hpp"
#include "phgame/passivity.hpp"
#include "phgame/random.hpp"

namespace phgame {

namespace {

Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
    Vector g(x.size());
    Vector y = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        y(k) = x(k) + h;
        const double plus = f(y);
        y(k) = x(k) - h;
        const double minus = f(y);
        y(k) = x(k);
        g(k) = (plus - minus) / (2.0 * h);
    }
    return g;
}

bool near_nonsmooth(const SpringModel& spring, double length, double band) {
    if (spring.rest_length() > 0.0 && length < band) {
        return true;
    }
    if (spring.is_barrier()) {
        return std::abs(length - spring.rest_length()) < band || spring.critical_distance() - length < band;
    }
    return false;
}

PropertyResult make_result(std::string name, double worst, double tolerance, std::size_t samples) {
    PropertyResult r;
    r.name = std::move(name);
    r.worst = worst;
    r.tolerance = tolerance;
    r.samples = samples;
    r.passed = worst <= tolerance;
    return r;
}

// Feasible decision with every edge away from the non-smooth set.
Vector sample_smooth_decision(const PotentialGame& game, Rng& rng, double band) {
    const Network& net = game.network();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vector x = sample_feasible_decision(game, rng);
        if (!near_nonsmooth_set(net, edge_lengths(net, state_from_collective(net, x)), band)) {
            return x;
        }
    }
    throw ValidationError("no decision away from the non-smooth set found");
}

}  // namespace

std::optional<CheckSuite> parse_check_suite(std::string_view name) {
    if (name == "potential") return CheckSuite::potential;
    if (name == "gradients") return CheckSuite::gradients;
    if (name == "passivity") return CheckSuite::passivity;
    if (name == "all") return CheckSuite::all;
    return std::nullopt;
}

bool CheckReport::passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.informational || p.passed; });
}

double relative_error(const Vector& a, const Vector& b) {
    return (a - b).lpNorm<Eigen::Infinity>() / std::max(1.0, b.lpNorm<Eigen::Infinity>());
}

bool near_nonsmooth_set(const Network& network, const Vector& lengths, double band) {
    for (std::size_t j = 0; j < network.num_edges(); ++j) {
        if (near_nonsmooth(network.coupling(j).spring, lengths(static_cast<Eigen::Index>(j)), band)) {
            return true;
        }
    }
    return false;
}

std::vector<PropertyResult> check_potential(const Scenario& scenario, const CheckSettings& settings) {
    const Network net = build_network(scenario);
    const PotentialGame game = build_game(scenario, net);

    const auto exact = check_exact_potential(game, settings.samples, scenario.seed);
    auto r = make_result("exact_potential", exact.max_deviation, 1e-9, exact.samples);
    r.passed = exact.passed;
    r.note = std::to_string(exact.failures) + " of " + std::to_string(exact.samples) + " deviations mismatched";

    Rng rng(scenario.seed + 1);
    double worst = 0.0;
    for (std::size_t s = 0; s < settings.samples; ++s) {
        const Vector x = sample_feasible_decision(game, rng);
        const double a = potential_function(net, x);
        const double b = potential_function_ordered(net, x);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    return {r, make_result("ordered_sum_agrees", worst, settings.identity_tolerance, settings.samples)};
}

std::vector<PropertyResult> check_gradients(const Scenario& scenario, const CheckSettings& settings) {
    const Network net = build_network(scenario);
    const PotentialGame game = build_game(scenario, net);
    const auto n = static_cast<Eigen::Index>(net.dimension());
    const double h = settings.fd_step;
    const double band = settings.exclusion;
    std::vector<PropertyResult> out;

    {
        Rng rng(scenario.seed + 11);
        double worst = 0.0;
        for (std::size_t s = 0; s < settings.samples; ++s) {
            const auto& spring = net.coupling(rng.index(net.num_edges())).spring;
            const double upper =
                spring.is_barrier() ? spring.critical_distance() : 2.0 * spring.rest_length() + 1.0;
            double length = 0.0;
            do {
                length = rng.uniform(0.0, upper);
            } while (near_nonsmooth(spring, length, band) || length == 0.0);
            Vector dir(n);
            do {
                for (Eigen::Index c = 0; c < n; ++c) {
                    dir(c) = rng.uniform(-1.0, 1.0);
                }
            } while (dir.norm() < 1e-3);
            const Vector z = length * dir.normalized();
            const Vector fd = central_difference([&](const Vector& v) { return spring_potential(spring, v); }, z, h);
            worst = std::max(worst, relative_error(spring_gradient(spring, z), fd));
        }
        out.push_back(make_result("spring_gradient_fd", worst, settings.fd_tolerance, settings.samples));
    }

    {
        Rng rng(scenario.seed + 12);
        double worst = 0.0;
        for (std::size_t s = 0; s < settings.samples; ++s) {
            const NetworkState state = state_from_collective(net, sample_smooth_decision(game, rng, band));
            const auto grad = hamiltonian_gradient(net, state);
            NetworkState probe = state;
            const Vector fd_z = central_difference(
                [&](const Vector& z) {
                    probe.z = z;
                    return hamiltonian(net, probe);
                },
                state.z, h);
            probe = state;
            const Vector fd_p = central_difference(
                [&](const Vector& p) {
                    probe.p = p;
                    return hamiltonian(net, probe);
                },
                state.p, h);
            worst = std::max({worst, relative_error(grad.dz, fd_z), relative_error(grad.dp, fd_p)});
        }
        out.push_back(make_result("hamiltonian_gradient_fd", worst, settings.fd_tolerance, settings.samples));
    }

    {
        Rng rng(scenario.seed + 13);
        double worst = 0.0;
        double worst_factor = 0.0;
        const auto nn = net.agent_coords();
        for (std::size_t s = 0; s < settings.samples; ++s) {
            const Vector x = sample_smooth_decision(game, rng, band);
            const Vector F = pseudo_gradient(game, x);
            for (std::size_t i = 0; i < game.num_players(); ++i) {
                const Vector xi = game.player_decision(x, i);
                const Vector fd = central_difference(
                    [&](const Vector& yi) { return local_objective(game, i, game.with_player_decision(x, i, yi)); },
                    xi, h);
                Vector analytic(2 * n);
                const auto off = static_cast<Eigen::Index>(i) * n;
                analytic << F.segment(off, n), F.segment(nn + off, n);
                worst = std::max(worst, relative_error(analytic, fd));
            }
            worst_factor = std::max(worst_factor, relative_error(F, pseudo_gradient_factored(net, x)));
        }
        out.push_back(make_result("pseudo_gradient_fd", worst, settings.fd_tolerance, settings.samples));
        auto factor = make_result("pseudo_gradient_factorization", worst_factor, settings.identity_tolerance,
                                  settings.samples);
        if (!scenario.objective_scalings.empty()) {
            factor.informational = true;
            factor.note = "objective scaling present; the factorization is not expected to hold";
        }
        out.push_back(factor);
    }
    return out;
}

std::vector<PropertyResult> check_passivity(const Scenario& scenario, const CheckSettings& settings) {
    const Network net = build_network(scenario);
    const NetworkState initial = initial_state(scenario, net);
    const auto steps_per_sample = static_cast<std::size_t>(std::max(1.0, std::round(0.01 / settings.dt)));

    struct Case {
        const char* name;
        PortConnection connection;
        Storage storage;
        bool informational;
        const char* note;
    };
    const Case cases[] = {
        {"open_loop_kinetic_storage", PortConnection::open_loop, Storage::kinetic, false,
         "agents without couplings are lossless with storage 1/2 |p|^2"},
        {"closed_loop_hamiltonian_storage", PortConnection::closed_loop, Storage::hamiltonian, false,
         "couplings plus an external force port"},
        {"open_loop_hamiltonian_storage", PortConnection::open_loop, Storage::hamiltonian, true,
         "spring energy changes without any supply on this port; not a valid storage"},
    };

    std::vector<PropertyResult> out;
    for (const auto& c : cases) {
        double worst = -std::numeric_limits<double>::infinity();
        std::size_t incomplete = 0;
        for (std::size_t k = 0; k < settings.signals; ++k) {
            const auto input = random_input_signal(net.agent_coords(), settings.signal_amplitude, scenario.seed + 100 + k);
            const auto trace =
                integrate_supply(net, initial, input, c.connection, settings.dt, settings.horizon, steps_per_sample);
            worst = std::max(worst, max_storage_excess(trace, c.storage));
            incomplete += trace.completed ? 0 : 1;
        }
        auto r = make_result(c.name, worst, settings.passivity_tolerance, settings.signals);
        r.informational = c.informational;
        r.note = c.note;
        if (incomplete > 0) {
            r.note += "; " + std::to_string(incomplete) + " signal(s) stopped at a barrier";
        }
        out.push_back(std::move(r));
    }
    return out;
}

CheckReport run_checks(const Scenario& scenario, CheckSuite suite, const CheckSettings& settings) {
    CheckReport report;
    report.scenario = scenario.name;
    auto append = [&](std::vector<PropertyResult> results) {
        for (auto& r : results) {
            report.properties.push_back(std::move(r));
        }
    };
    if (suite == CheckSuite::potential || suite == CheckSuite::all) append(check_potential(scenario, settings));
    if (suite == CheckSuite::gradients || suite == CheckSuite::all) append(check_gradients(scenario, settings));
    if (suite == CheckSuite::passivity || suite == CheckSuite::all) append(check_passivity(scenario, settings));
    return report;
}

std::string format_check_report(const CheckReport& report) {
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    j["passed"] = report.passed();
    auto& props = j["properties"] = nlohmann::ordered_json::array();
    for (const auto& p : report.properties) {
        nlohmann::ordered_json e;
        e["name"] = p.name;
        e["status"] = p.informational ? "info" : (p.passed ? "pass" : "fail");
        e["worst"] = p.worst;
        e["tolerance"] = p.tolerance;
        e["samples"] = p.samples;
        if (!p.note.empty()) {
            e["note"] = p.note;
        }
        props.push_back(e);
    }
    return j.dump(2) + "\n";
}

}  // namespace phgame
