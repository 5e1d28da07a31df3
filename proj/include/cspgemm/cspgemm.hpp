#pragma once

// Umbrella header for the cluster-wise SpGEMM library.

#include "cspgemm/types.hpp"
#include "cspgemm/permutation.hpp"
#include "cspgemm/csr.hpp"
#include "cspgemm/matrix_market.hpp"
#include "cspgemm/hash_accumulator.hpp"
#include "cspgemm/spgemm.hpp"
#include "cspgemm/cluster_format.hpp"
#include "cspgemm/clustering.hpp"
#include "cspgemm/cluster_spgemm.hpp"
#include "cspgemm/reorder.hpp"
#include "cspgemm/frontier.hpp"
#include "cspgemm/bench.hpp"
