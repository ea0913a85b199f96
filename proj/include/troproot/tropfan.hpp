#pragma once

#include <memory>
#include <string>
#include <vector>

#include "troproot/exact.hpp"
#include "troproot/matroid.hpp"

namespace troproot {

struct Cone {
    IntMatrix rays;       // one generator per column
    IntMatrix lineality;  // one basis vector per column
};

// Tropical linear space of <Ax> (linear) or <Ax - c> (affine, last column -c).
struct TropLinearSpace {
    std::size_t ambient_dim = 0;
    bool affine = false;
    bool is_empty = false;
    std::vector<Cone> cones;
    std::vector<Circuit> circuits;
    std::vector<SignedCircuit> signed_circuits;  // canonical representatives only
    // Matroid data on the unsliced ground set (ambient_dim + 1 when affine).
    std::shared_ptr<const DualMatroid> matroid;
};

struct AffineSubspace {
    IntMatrix basis;  // rows span the direction space
    RatVec offset;
};

struct FanOptions {
    bool materialize = true;
    std::size_t flag_budget = kDefaultFlagBudget;
};

TropLinearSpace trop_linear_space(const RatMatrix& a, bool affine, const FanOptions& opts = {});

bool contains(const TropLinearSpace& t, const RatVec& w);
bool contains_positive(const TropLinearSpace& t, const RatVec& w);

AffineSubspace binomial_trop(const IntMatrix& m, const RatVec& valc);

// Membership of w in the closed cone (exact).
bool cone_contains(const Cone& c, const RatVec& w);

IntMatrix hermite_normal_form(const IntMatrix& rows);

std::string fan_to_json(const TropLinearSpace& t);

}  // namespace troproot
