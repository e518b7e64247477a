#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phgame/scenario.hpp"

namespace phgame {

// Property suites behind `phgame check`. Each property reports its worst
// deviation against a fixed tolerance; informational entries are printed
// but never fail the report.

enum class CheckSuite { potential, gradients, passivity, all };

std::optional<CheckSuite> parse_check_suite(std::string_view name);

struct PropertyResult {
    std::string name;
    bool passed = true;
    bool informational = false;
    double worst = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::string note;
};

struct CheckReport {
    std::string scenario;
    std::vector<PropertyResult> properties;

    bool passed() const;
};

struct CheckSettings {
    std::size_t samples = 1000;
    double fd_step = 1e-6;
    double fd_tolerance = 1e-6;
    /// Points closer than this to a zero-length edge, a barrier seam or a
    /// barrier pole are not sampled.
    double exclusion = 1e-3;
    double identity_tolerance = 1e-12;
    std::size_t signals = 10;
    double signal_amplitude = 0.5;
    double horizon = 10.0;
    double dt = 1e-3;
    double passivity_tolerance = 1e-6;
};

/// ||a - b||_inf / max(1, ||b||_inf).
double relative_error(const Vector& a, const Vector& b);

/// True if some edge length lies within `band` of a point where the spring
/// potential is not smooth.
bool near_nonsmooth_set(const Network& network, const Vector& edge_lengths, double band);

std::vector<PropertyResult> check_potential(const Scenario& scenario, const CheckSettings& settings = {});
std::vector<PropertyResult> check_gradients(const Scenario& scenario, const CheckSettings& settings = {});
std::vector<PropertyResult> check_passivity(const Scenario& scenario, const CheckSettings& settings = {});

CheckReport run_checks(const Scenario& scenario, CheckSuite suite, const CheckSettings& settings = {});

std::string format_check_report(const CheckReport& report);

}  // namespace phgame
