#pragma once

#include "woldlab/types.hpp"
#include "woldlab/linalg.hpp"
#include "woldlab/operator_core.hpp"
#include "woldlab/graded.hpp"
#include "woldlab/subspace.hpp"
#include "woldlab/wold.hpp"
#include "woldlab/measure.hpp"
#include "woldlab/dirichlet_model.hpp"
#include "woldlab/structural.hpp"
#include "woldlab/gallery.hpp"
#include "woldlab/oracles.hpp"
#include "woldlab/io.hpp"
