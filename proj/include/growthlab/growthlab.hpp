#pragma once

#include "growthlab/analytic_map.hpp"
#include "growthlab/characteristics.hpp"
#include "growthlab/conformal_map.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/explicit_solutions.hpp"
#include "growthlab/ode.hpp"
#include "growthlab/order.hpp"
#include "growthlab/quadrature.hpp"
#include "growthlab/scenario.hpp"
#include "growthlab/sector.hpp"
#include "growthlab/series.hpp"
