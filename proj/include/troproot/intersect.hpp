#pragma once

#include <optional>
#include <random>
#include <vector>

#include "troproot/exact.hpp"
#include "troproot/tropfan.hpp"

namespace troproot {

struct IntersectionPoint {
    RatVec point;
    Int multiplicity;
    bool positive = false;
};

struct IntersectionReport {
    RatVec shift_h;
    std::vector<IntersectionPoint> points;  // sorted by coordinates
    Int total_degree = 0;
    std::size_t retries_used = 0;
    bool transversal = true;
    std::size_t nodes_visited = 0;
};

enum class IntersectSearch { Circuits, Flags };

struct IntersectOptions {
    IntersectSearch search = IntersectSearch::Circuits;
    std::size_t max_retries = 8;
    long long initial_bound = 10000;
    std::size_t node_budget = 1000000;
};

// Intersection of t with rowspan(w_dir) + shift at one fixed shift. Absent when
// the shift is not generic (boundary hit or a non-transverse cone is met).
std::optional<IntersectionReport> intersect_at_shift(const TropLinearSpace& t, const IntMatrix& w_dir,
                                                     const RatVec& shift, std::size_t node_budget = 1000000);

// Same computation by branching on which two elements of each circuit attain the minimum.
std::optional<IntersectionReport> intersect_at_shift_circuits(const TropLinearSpace& t, const IntMatrix& w_dir,
                                                              const RatVec& shift, std::size_t node_budget = 1000000);

// Same computation by scanning the materialized cone list.
std::optional<IntersectionReport> intersect_at_shift_explicit(const TropLinearSpace& t, const IntMatrix& w_dir,
                                                              const RatVec& shift);

IntersectionReport stable_intersect(const TropLinearSpace& t, const IntMatrix& w_dir,
                                    const std::vector<std::size_t>& shift_support, std::mt19937_64& rng,
                                    const IntersectOptions& opts = {});

std::size_t positive_point_count(const IntersectionReport& report);

}  // namespace troproot
