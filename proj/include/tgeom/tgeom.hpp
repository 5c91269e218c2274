#pragma once

#include "tgeom/error.hpp"
#include "tgeom/point.hpp"
#include "tgeom/worldfunc.hpp"
#include "tgeom/sigma_algebra.hpp"
#include "tgeom/numeric.hpp"
#include "tgeom/checker.hpp"
#include "tgeom/envelope.hpp"
#include "tgeom/spacetime.hpp"
