#pragma once

// Umbrella header.

#include "gbn/distances.hpp"
#include "gbn/error.hpp"
#include "gbn/experiment.hpp"
#include "gbn/generators.hpp"
#include "gbn/graph.hpp"
#include "gbn/io.hpp"
#include "gbn/metrics.hpp"
#include "gbn/parallel.hpp"
#include "gbn/plot.hpp"
#include "gbn/reconstruct.hpp"
#include "gbn/samplers.hpp"
#include "gbn/spectral.hpp"
#include "gbn/theory.hpp"
#include "gbn/version.hpp"
