#ifndef MC_MC_HPP
#define MC_MC_HPP

#include "errors.hpp"
#include "parallel.hpp"
#include "metric_core.hpp"
#include "relation_maps.hpp"
#include "gromov_hausdorff.hpp"
#include "convergence.hpp"
#include "dilation_structures.hpp"
#include "axioms.hpp"
#include "zoom_atlas.hpp"
#include "precision.hpp"
#include "io.hpp"

#endif  // MC_MC_HPP
