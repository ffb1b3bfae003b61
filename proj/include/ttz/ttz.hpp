#pragma once

#include "ttz/errors.hpp"
#include "ttz/expr.hpp"
#include "ttz/point_cloud.hpp"
#include "ttz/symbol.hpp"
#include "ttz/banded.hpp"
#include "ttz/rng.hpp"
#include "ttz/construct.hpp"
#include "ttz/linalg.hpp"
#include "ttz/potential.hpp"
#include "ttz/limits.hpp"
#include "ttz/measures.hpp"
#include "ttz/io.hpp"
