#pragma once

#include "dronesurvey/diagnostics.hpp"
#include "dronesurvey/geodesy.hpp"
#include "dronesurvey/mission_io.hpp"
#include "dronesurvey/mission_sim.hpp"
#include "dronesurvey/pipeline.hpp"
#include "dronesurvey/radiation_field.hpp"
#include "dronesurvey/route_planner.hpp"
#include "dronesurvey/survey_grid.hpp"
