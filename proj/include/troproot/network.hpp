#pragma once

#include <string>
#include <vector>

#include "troproot/exact.hpp"
#include "troproot/vsys.hpp"

namespace troproot {

struct Reaction {
    IntVec reactants;
    IntVec products;
    std::string label;
};

struct ReactionNetwork {
    std::vector<std::string> species;
    std::vector<Reaction> reactions;

    bool operator==(const ReactionNetwork& o) const;
};

// Line format "2 A + B -> C + D" or "<->" for a reversible pair; "#" starts a comment.
ReactionNetwork parse_network(const std::string& text);
std::string render_network(const ReactionNetwork& net);

struct SteadyStateData {
    IntMatrix n_mat;    // species x reactions, products minus reactants
    IntMatrix kinetic;  // mass-action exponents, the reactant coefficients
    std::vector<std::size_t> c_rows;
    VerticalSystem sys;
};

SteadyStateData steady_state_system(const ReactionNetwork& net);

// Multisite phosphorylation with k sites, species ordered
// K, P, S0..Sk, S0K..S(k-1)K, S1P..SkP.
ReactionNetwork k_site_network(std::size_t k);

}  // namespace troproot
