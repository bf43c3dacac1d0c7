#pragma once

// Hospital-Residents matching toolkit: instance model and formats, seeded
// generators, stable/popular/envy-free solvers with and without lower
// quotas, quality metrics, brute-force certification oracles, and the
// experiment harness.

#include "core.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "maxflow.hpp"
#include "metrics.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "solvers_envyfree.hpp"
#include "solvers_hr.hpp"
#include "solvers_hrlq.hpp"
