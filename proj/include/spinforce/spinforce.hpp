#pragma once

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"
#include "spinforce/physics.hpp"
#include "spinforce/quadrature.hpp"
#include "spinforce/geometry.hpp"
#include "spinforce/sensor.hpp"
#include "spinforce/readout.hpp"
#include "spinforce/inference.hpp"
#include "spinforce/limits.hpp"
#include "spinforce/config.hpp"
#include "spinforce/csv.hpp"
