#pragma once

// Content-adaptive temporal wavelet lifting codec: umbrella header.

#include "cawl/adaptive.hpp"
#include "cawl/codec.hpp"
#include "cawl/container.hpp"
#include "cawl/depth_vector.hpp"
#include "cawl/dwt53.hpp"
#include "cawl/entropy.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/lifting.hpp"
#include "cawl/metrics.hpp"
#include "cawl/motion.hpp"
#include "cawl/range_coder.hpp"
#include "cawl/spatial_codec.hpp"
