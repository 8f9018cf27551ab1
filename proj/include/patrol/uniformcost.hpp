#pragma once

// What observability costs the patroller: compares the game value V against
// the value of the same game when the attacker cannot watch the patroller's
// presence at his location. The unobserved benchmark has a closed value for
// m = 2 (one end per two periods: 1/n) and for odd m (a half/half phase
// mixture over the random-walk visit counts); other even m have no stated
// benchmark and are rejected.

#include <cmath>
#include <stdexcept>

#include "patrol/model.hpp"
#include "patrol/solver.hpp"

namespace patrol {

inline double value_non_uniformed(const GameConfig& game) {
    if (game.m == 2) return 1.0 / game.n;
    if (game.m % 2 == 0)
        throw std::invalid_argument("non-uniformed value undefined for even m >= 4");
    const int j = (game.m - 1) / 2;
    const double x = (game.n - 1.0) / game.n;
    return 0.5 * (1.0 - std::pow(x, j)) + 0.5 * (1.0 - std::pow(x, j + 1));
}

struct UniformCost {
    double value_uniformed = 0.0;
    double value_non_uniformed = 0.0;
    double ratio = 0.0;          // V / V~   (tends to 1/4 for m = 2, large n)
    double relative_loss = 0.0;  // (V~ - V) / V~  (tends to 1/m for odd m)
};

inline UniformCost uniform_cost(const GameConfig& game) {
    UniformCost out;
    out.value_non_uniformed = value_non_uniformed(game);
    out.value_uniformed = solve(game).value;
    out.ratio = out.value_uniformed / out.value_non_uniformed;
    out.relative_loss =
        (out.value_non_uniformed - out.value_uniformed) / out.value_non_uniformed;
    return out;
}

}  // namespace patrol
