#pragma once

// Umbrella header: weighted anchored / ANOVA decompositions of tensor
// polynomials, their L_p norms, and the norm-equivalence constants.

#include "decomp.hpp"
#include "equivalence.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "norms.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "pexponent.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "subset.hpp"
#include "tensor.hpp"
#include "weights.hpp"
