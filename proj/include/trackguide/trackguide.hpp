#ifndef TRACKGUIDE_TRACKGUIDE_HPP
#define TRACKGUIDE_TRACKGUIDE_HPP

// Umbrella header for the trackguide library.

#include "trackguide/corridor.hpp"
#include "trackguide/curve.hpp"
#include "trackguide/errors.hpp"
#include "trackguide/geometry.hpp"
#include "trackguide/guidance.hpp"
#include "trackguide/perception.hpp"
#include "trackguide/planner.hpp"
#include "trackguide/scenario_io.hpp"
#include "trackguide/simulator.hpp"
#include "trackguide/spline.hpp"
#include "trackguide/track.hpp"

#endif  // TRACKGUIDE_TRACKGUIDE_HPP
