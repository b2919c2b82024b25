#pragma once

#include "plapmix/config.hpp"
#include "plapmix/eigensolver.hpp"
#include "plapmix/energy.hpp"
#include "plapmix/errors.hpp"
#include "plapmix/geometry.hpp"
#include "plapmix/grid.hpp"
#include "plapmix/kernel.hpp"
#include "plapmix/limit.hpp"
#include "plapmix/numerics.hpp"
#include "plapmix/runner.hpp"
#include "plapmix/viscosity.hpp"
