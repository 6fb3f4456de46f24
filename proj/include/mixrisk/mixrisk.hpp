#pragma once

// Umbrella header for the mixrisk library: two-period optimal saving under a
// mix of possibilistic (fuzzy-number) and probabilistic risk.

#include "mixrisk/error.hpp"
#include "mixrisk/fuzzy.hpp"
#include "mixrisk/mixed.hpp"
#include "mixrisk/quadrature.hpp"
#include "mixrisk/random.hpp"
#include "mixrisk/report.hpp"
#include "mixrisk/scenario_io.hpp"
#include "mixrisk/solver.hpp"
#include "mixrisk/taylor.hpp"
#include "mixrisk/utility.hpp"
