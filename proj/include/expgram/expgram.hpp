#pragma once

// Convenience include for the double-precision computational path. The
// extended-precision oracle, threshold derivation and experiment harness
// live in oracle.hpp, bounds.hpp and experiments.hpp; targets using those
// must link against mpfr and gmp.

#include "expgram/coefficients.hpp"
#include "expgram/core.hpp"
#include "expgram/matrix.hpp"
#include "expgram/matrix_io.hpp"
