#pragma once

// Umbrella header: weighted Chamfer-distance losses, gradient-weight curve
// distillation, and deterministic free-point completion training.

#include "cdd/version.hpp"
#include "cdd/threading.hpp"
#include "cdd/rng.hpp"
#include "cdd/pointcloud.hpp"
#include "cdd/io.hpp"
#include "cdd/neighbors.hpp"
#include "cdd/gammafn.hpp"
#include "cdd/weightfns.hpp"
#include "cdd/losses.hpp"
#include "cdd/distill.hpp"
#include "cdd/trainer.hpp"
