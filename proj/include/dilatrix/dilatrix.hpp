#pragma once

// Umbrella header for the whole toolkit.

#include "dilatrix/chebyshev.hpp"
#include "dilatrix/check_report.hpp"
#include "dilatrix/density.hpp"
#include "dilatrix/deviations.hpp"
#include "dilatrix/dilation.hpp"
#include "dilatrix/functions1d.hpp"
#include "dilatrix/instances.hpp"
#include "dilatrix/interval_set.hpp"
#include "dilatrix/json_io.hpp"
#include "dilatrix/measures.hpp"
#include "dilatrix/parallel.hpp"
#include "dilatrix/polynomial.hpp"
#include "dilatrix/polytope.hpp"
#include "dilatrix/remez.hpp"
#include "dilatrix/sweeps.hpp"
#include "dilatrix/verifier.hpp"
