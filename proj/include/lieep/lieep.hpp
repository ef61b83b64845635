#pragma once

#include "lieep/diagnostics.hpp"
#include "lieep/energy.hpp"
#include "lieep/error.hpp"
#include "lieep/integrators.hpp"
#include "lieep/matfun.hpp"
#include "lieep/polarization.hpp"
#include "lieep/problems.hpp"
#include "lieep/quadrature.hpp"
#include "lieep/system.hpp"
#include "lieep/types.hpp"
