#pragma once

#include "rmc/color.hpp"
#include "rmc/csv.hpp"
#include "rmc/editing.hpp"
#include "rmc/error.hpp"
#include "rmc/geometry.hpp"
#include "rmc/graph.hpp"
#include "rmc/layout.hpp"
#include "rmc/ordering.hpp"
#include "rmc/render.hpp"
#include "rmc/rmc_state.hpp"
#include "rmc/scene.hpp"
#include "rmc/scenegen.hpp"
#include "rmc/session.hpp"
#include "rmc/similarity.hpp"
#include "rmc/svg.hpp"
