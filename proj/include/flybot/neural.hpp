#pragma once

#include "flybot/neural/activation.hpp"
#include "flybot/neural/hopfield.hpp"
#include "flybot/neural/mlp.hpp"
