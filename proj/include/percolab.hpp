#pragma once

#include "percolab/bounds.hpp"
#include "percolab/exact.hpp"
#include "percolab/experiments.hpp"
#include "percolab/graph.hpp"
#include "percolab/isoperimetry.hpp"
#include "percolab/percolation.hpp"
#include "percolab/pivotal.hpp"
#include "percolab/sweep.hpp"
#include "percolab/upset.hpp"
