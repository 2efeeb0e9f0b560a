#pragma once

#include "flybot/sidewalk/generator.hpp"
#include "flybot/sidewalk/pipeline.hpp"
