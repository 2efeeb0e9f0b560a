#pragma once

#include "flybot/error.hpp"
#include "flybot/flight.hpp"
#include "flybot/fuzzy.hpp"
#include "flybot/matrix.hpp"
#include "flybot/neural.hpp"
#include "flybot/raster.hpp"
#include "flybot/sidewalk.hpp"
#include "flybot/vision.hpp"
