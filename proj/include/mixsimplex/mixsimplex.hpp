#pragma once

#include "mixsimplex/rat.hpp"
#include "mixsimplex/delta.hpp"
#include "mixsimplex/sparse_row.hpp"
#include "mixsimplex/constraints.hpp"
#include "mixsimplex/verdict.hpp"
#include "mixsimplex/simplex.hpp"
#include "mixsimplex/forced_pivot.hpp"
#include "mixsimplex/float_lp.hpp"
#include "mixsimplex/witness.hpp"
#include "mixsimplex/driver.hpp"
#include "mixsimplex/generator.hpp"
#include "mixsimplex/bench.hpp"
