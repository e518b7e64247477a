#pragma once

#include <utility>

#include "phgame/graph.hpp"

namespace phgame {

/// One classical fourth-order Runge-Kutta step of x' = f(t, x).
template <typename Field>
Vector rk4_step(Field&& f, double t, const Vector& x, double h) {
    const double half = 0.5 * h;
    const Vector k1 = f(t, x);
    const Vector k2 = f(t + half, Vector(x + half * k1));
    const Vector k3 = f(t + half, Vector(x + half * k2));
    const Vector k4 = f(t + h, Vector(x + h * k3));
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace phgame
