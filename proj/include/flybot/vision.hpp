#pragma once

#include "flybot/vision/gabor.hpp"
#include "flybot/vision/green.hpp"
#include "flybot/vision/hough.hpp"
#include "flybot/vision/otsu.hpp"
#include "flybot/vision/pca.hpp"
#include "flybot/vision/response_map.hpp"
#include "flybot/vision/thermal.hpp"
#include "flybot/vision/wavelet.hpp"
