#pragma once

// Umbrella header: exact ghost-series construction, Newton polygons of its
// specializations, local mod-p representation classification, and the
// verification harness against external classical slope data.

#include "ghost/dimension_table.hpp"
#include "ghost/errors.hpp"
#include "ghost/finite_field.hpp"
#include "ghost/local_rep.hpp"
#include "ghost/newton.hpp"
#include "ghost/padic.hpp"
#include "ghost/rational.hpp"
#include "ghost/series.hpp"
#include "ghost/slope_data.hpp"
#include "ghost/verify.hpp"
