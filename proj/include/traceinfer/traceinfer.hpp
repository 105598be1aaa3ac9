#pragma once
// Convenience umbrella: pulls in the whole trace-inference toolkit.

#include "traceinfer/bounded_degree.hpp"
#include "traceinfer/cascade.hpp"
#include "traceinfer/degree.hpp"
#include "traceinfer/errors.hpp"
#include "traceinfer/eval.hpp"
#include "traceinfer/first_edge.hpp"
#include "traceinfer/format.hpp"
#include "traceinfer/generators.hpp"
#include "traceinfer/graph.hpp"
#include "traceinfer/lower_bound.hpp"
#include "traceinfer/rng.hpp"
#include "traceinfer/sweep.hpp"
#include "traceinfer/trace.hpp"
#include "traceinfer/trace_io.hpp"
#include "traceinfer/tree.hpp"
