#pragma once

#include "repsim/error.hpp"
#include "repsim/matrix.hpp"
#include "repsim/npy.hpp"
#include "repsim/bundle.hpp"
#include "repsim/kernels.hpp"
#include "repsim/graph.hpp"
#include "repsim/similarity.hpp"
#include "repsim/motif.hpp"
#include "repsim/harness.hpp"
#include "repsim/synthetic.hpp"
#include "repsim/selftest.hpp"
