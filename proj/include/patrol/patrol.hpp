#pragma once

#include "patrol/formulas.hpp"
#include "patrol/hitting.hpp"
#include "patrol/model.hpp"
#include "patrol/montecarlo.hpp"
#include "patrol/solve_result.hpp"
#include "patrol/solver.hpp"
#include "patrol/sweep.hpp"
#include "patrol/uniformcost.hpp"
