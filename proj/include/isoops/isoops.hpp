#pragma once

#include "isoops/curvature.hpp"
#include "isoops/diffusion.hpp"
#include "isoops/error.hpp"
#include "isoops/grid.hpp"
#include "isoops/meanops.hpp"
#include "isoops/mesh.hpp"
#include "isoops/pgm.hpp"
#include "isoops/spectral.hpp"
#include "isoops/stencils.hpp"
#include "isoops/veronese.hpp"
#include "isoops/weights.hpp"
