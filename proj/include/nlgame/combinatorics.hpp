#pragma once

/// Exact combinatorial kernels: blossom matching, Steiner trees, defect partitions.

#include "nlgame/matching.hpp"
#include "nlgame/steiner.hpp"
