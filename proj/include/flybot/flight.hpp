#pragma once

#include "flybot/flight/hover.hpp"
#include "flybot/flight/sizing.hpp"
