#pragma once

// Umbrella header for the quantum annulus / hyperbola dilation laboratory.

#include "qalab/common.hpp"
#include "qalab/errors.hpp"
#include "qalab/rng.hpp"
#include "qalab/parallel.hpp"
#include "qalab/numkernel.hpp"
#include "qalab/laurent.hpp"
#include "qalab/domains.hpp"
#include "qalab/calculus.hpp"
#include "qalab/dilation.hpp"
#include "qalab/estimate.hpp"
#include "qalab/search.hpp"
