#pragma once

#include "flybot/fuzzy/controllers.hpp"
#include "flybot/fuzzy/engine.hpp"
