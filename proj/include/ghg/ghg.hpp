#pragma once

#include "ghg/certified.hpp"
#include "ghg/config.hpp"
#include "ghg/summation.hpp"
#include "ghg/quadrature.hpp"
#include "ghg/parallel.hpp"
#include "ghg/potential.hpp"
#include "ghg/growth.hpp"
#include "ghg/distance.hpp"
#include "ghg/volume.hpp"
#include "ghg/analysis.hpp"
