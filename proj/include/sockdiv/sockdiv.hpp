#pragma once

// Umbrella header for the finite division workbench.

#include "sockdiv/bijection.hpp"
#include "sockdiv/core.hpp"
#include "sockdiv/element.hpp"
#include "sockdiv/equivariance.hpp"
#include "sockdiv/errors.hpp"
#include "sockdiv/io.hpp"
#include "sockdiv/reductions.hpp"
#include "sockdiv/shoe_division.hpp"
