#pragma once

#include "dispersive/banded.hpp"
#include "dispersive/dispersion_operator.hpp"
#include "dispersive/error.hpp"
#include "dispersive/estimates.hpp"
#include "dispersive/fixedpoint.hpp"
#include "dispersive/grid.hpp"
#include "dispersive/linear.hpp"
#include "dispersive/random_fields.hpp"
#include "dispersive/stencil.hpp"
