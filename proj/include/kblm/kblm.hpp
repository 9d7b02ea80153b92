#pragma once

// Convenience umbrella for the whole library.

#include "kblm/cube.hpp"
#include "kblm/dataset.hpp"
#include "kblm/eig.hpp"
#include "kblm/fourier.hpp"
#include "kblm/io.hpp"
#include "kblm/kernels.hpp"
#include "kblm/landmarks.hpp"
#include "kblm/manifold.hpp"
#include "kblm/metrics.hpp"
#include "kblm/phantom.hpp"
#include "kblm/power.hpp"
#include "kblm/prox.hpp"
#include "kblm/recon.hpp"
#include "kblm/rng.hpp"
#include "kblm/sampling.hpp"
#include "kblm/types.hpp"
