#pragma once

#include <random>
#include <utility>
#include <vector>

#include "troproot/exact.hpp"

namespace troproot {

struct LatticePolytope {
    std::size_t dim = 0;
    IntMatrix points;  // one lattice point per column

    LatticePolytope() = default;
    explicit LatticePolytope(IntMatrix pts);
    LatticePolytope(std::size_t d, const std::vector<IntVec>& pts);

    std::vector<IntVec> distinct_points() const;
};

struct MixedCell {
    // one lower edge (pair of point indices into the deduplicated point list) per polytope
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    Int volume;
};

struct MixedVolumeOptions {
    std::size_t max_retries = 8;
    long lift_max = 1000000;
    std::size_t node_budget = 50000000;
};

struct MixedVolumeResult {
    Int volume = 0;
    std::vector<std::vector<long>> lifting;  // per polytope, aligned with distinct_points()
    std::vector<MixedCell> cells;
    std::size_t retries_used = 0;
    std::size_t nodes = 0;
};

Int normalized_volume(const LatticePolytope& p);

LatticePolytope minkowski_sum(const LatticePolytope& a, const LatticePolytope& b);

MixedVolumeResult mixed_volume_cells(const std::vector<LatticePolytope>& ps, std::mt19937_64& rng,
                                     const MixedVolumeOptions& opts = {});

Int mixed_volume(const std::vector<LatticePolytope>& ps, std::mt19937_64& rng);

// Inclusion-exclusion over Minkowski sums; meant for small dimensions.
Int mixed_volume_oracle(const std::vector<LatticePolytope>& ps);

}  // namespace troproot
