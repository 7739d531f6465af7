#pragma once

// Umbrella header.

#include "revisit/earth_model.hpp"
#include "revisit/errors.hpp"
#include "revisit/orbit.hpp"
#include "revisit/sensor_geometry.hpp"
#include "revisit/pass_schedule.hpp"
#include "revisit/coverage_engine.hpp"
#include "revisit/oracle_sim.hpp"
#include "revisit/case_runner.hpp"
