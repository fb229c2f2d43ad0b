#pragma once

// Umbrella header for the Lp-norm gradient-field integration library.

#include "lpwave/grid.hpp"
#include "lpwave/image.hpp"
#include "lpwave/integrate.hpp"
#include "lpwave/io.hpp"
#include "lpwave/metrics.hpp"
#include "lpwave/parallel.hpp"
#include "lpwave/pcg.hpp"
#include "lpwave/rng.hpp"
#include "lpwave/synthetic.hpp"
#include "lpwave/system.hpp"
#include "lpwave/vecops.hpp"
#include "lpwave/weights.hpp"
