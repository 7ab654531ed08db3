#pragma once

#include "fsv/capacity.hpp"
#include "fsv/exponents.hpp"
#include "fsv/expression.hpp"
#include "fsv/geometry.hpp"
#include "fsv/grid.hpp"
#include "fsv/grid_function.hpp"
#include "fsv/modular.hpp"
#include "fsv/norms.hpp"
#include "fsv/report.hpp"
#include "fsv/scenario.hpp"
#include "fsv/trace.hpp"
#include "fsv/version.hpp"
