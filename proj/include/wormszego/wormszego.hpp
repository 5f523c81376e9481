#pragma once

#include "geometry.hpp"
#include "grid.hpp"
#include "fft.hpp"
#include "transforms.hpp"
#include "multipliers.hpp"
#include "szego.hpp"
#include "norms.hpp"
#include "isometry.hpp"
#include "experiments.hpp"
