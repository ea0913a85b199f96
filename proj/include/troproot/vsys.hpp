#pragma once

#include <json.hpp>

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "troproot/exact.hpp"
#include "troproot/intersect.hpp"
#include "troproot/mixedvol.hpp"

namespace troproot {

// F = (Cbar (a * x^Mbar), L x - b).
struct VerticalSystem {
    RatMatrix cbar;  // s x m
    IntMatrix mbar;  // n x m
    RatMatrix l;     // d x n, possibly no rows
    std::vector<std::string> varnames;
    std::vector<std::string> paramnames;

    std::size_t n() const { return mbar.rows(); }
    std::size_t s() const { return cbar.rows(); }
    std::size_t d() const { return l.rows(); }
    std::size_t m() const { return cbar.cols(); }

    // Checks shapes, square-ness, ranks and the absence of zero columns.
    void validate() const;
};

VerticalSystem parse_system_json(const std::string& text);
nlohmann::json system_to_json(const VerticalSystem& sys);

struct MinimalPresentation {
    IntMatrix m;                                   // n x r, pairwise distinct columns
    std::vector<std::vector<std::size_t>> groups;  // parameter indices merged into each column

    std::size_t r() const { return m.cols(); }
    RatMatrix coefficients(const RatMatrix& cbar, const RatVec& a) const;
};

MinimalPresentation to_minimal(const VerticalSystem& sys);
// One column per parameter, columns of Mbar kept as they are.
MinimalPresentation separated_presentation(const VerticalSystem& sys);

// Exact check that the maximal minors of the minimal coefficient matrix at a
// vanish exactly where they vanish for generic parameters.
bool certify_generic_a(const RatMatrix& cbar, const MinimalPresentation& pres, const RatVec& a);

struct Reembedding {
    RatMatrix block;  // [[C_a, 0, 0], [0, L, -b]]
    IntMatrix w_dir;  // [M | Id_n]
    RatVec a_used;
    RatVec b_used;
    RatVec x0;
    std::size_t r = 0;
    std::size_t a_redraws = 0;
    std::size_t b_redraws = 0;
};

struct VsysOptions {
    std::size_t flag_budget = kDefaultFlagBudget;
    std::size_t node_budget = 1000000;
    std::size_t max_retries = 8;
    std::size_t certify_attempts = 16;
    std::size_t cotransversal_budget = 200000;
    std::size_t mv_node_budget = 50000000;
    std::size_t minor_budget = 5000000;
    // keep one column per parameter instead of merging equal monomials
    bool separate_parameters = false;
    IntersectSearch search = IntersectSearch::Circuits;
};

Reembedding build_reembedding(const VerticalSystem& sys, std::mt19937_64& rng, bool positive = true,
                              const VsysOptions& opts = {});

enum class RankZero { Zero, Nonzero, Unknown };

RankZero rank_zero_test(const VerticalSystem& sys, std::mt19937_64& rng, std::size_t samples = 20);

bool feasibility_positive(const VerticalSystem& sys);

enum class CountKind { Grc, PositiveLower, ToricUpper, ToricLower, GenericDegree };
enum class Strategy { RankZero, Stable, Cotransversal, PurelyVertical, Toric };

std::string to_string(CountKind k);
std::string to_string(Strategy s);

struct RootCountReport {
    Int count = 0;
    CountKind kind = CountKind::Grc;
    Strategy strategy = Strategy::Stable;
    nlohmann::json certificate = nlohmann::json::object();
};

RootCountReport grc_stable(const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& opts = {});

RootCountReport positive_lower_bound(const VerticalSystem& sys, std::size_t attempts, std::mt19937_64& rng,
                                     const VsysOptions& opts = {});

RootCountReport grc_purely_vertical(const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& opts = {});

// Generic degree of <Cbar (a * x^Mbar)> with s <= n equations.
RootCountReport generic_degree(const RatMatrix& cbar, const IntMatrix& mbar, std::mt19937_64& rng,
                               const VsysOptions& opts = {});

// Row supports of a matrix, true where an entry may be nonzero.
using SupportPattern = std::vector<std::vector<bool>>;

// Sufficient test: a support pattern whose generic instantiation has the same
// matroid as a. Absent means unknown, not a negative answer.
std::optional<SupportPattern> cotransversal_presentation(const RatMatrix& a, std::mt19937_64& rng,
                                                         std::size_t budget = 200000);

bool pattern_realizes(const SupportPattern& p, const RatMatrix& a, std::mt19937_64& rng);

// Newton polytopes of (P x^Mbar, Q x + q).
std::vector<LatticePolytope> cotransversal_polytopes(const IntMatrix& mbar, const SupportPattern& p,
                                                     const SupportPattern& q);

RootCountReport grc_cotransversal(const VerticalSystem& sys, const SupportPattern& p, const SupportPattern& q,
                                  std::mt19937_64& rng, const VsysOptions& opts = {});

struct ToricBounds {
    RootCountReport lower;
    RootCountReport upper;
};

ToricBounds toric_bounds(const VerticalSystem& sys, const IntMatrix& a_mat, std::size_t attempts,
                         std::mt19937_64& rng, const VsysOptions& opts = {});

// Positive points of (rowspan(A) + h) against Trop+(<Lx - b>) at a given witness.
// Absent when the intersection is not transverse.
std::optional<std::size_t> toric_lower_at(const VerticalSystem& sys, const IntMatrix& a_mat, const RatVec& b,
                                          const RatVec& h);

// Count for (Cbar (a * x^Mbar) - c) with a fixed constant vector c.
RootCountReport grc_with_constant_terms(const RatMatrix& cbar, const IntMatrix& mbar, const RatVec& c,
                                        std::mt19937_64& rng, const VsysOptions& opts = {});

// The same count through the affine tropical linear space of [C_a | -c].
Int constant_terms_direct(const RatMatrix& cbar, const IntMatrix& mbar, const RatVec& c, std::mt19937_64& rng,
                          const VsysOptions& opts = {});

// Materialized tropical linear space of the reembedded block at given a and b.
TropLinearSpace reembedded_fan(const VerticalSystem& sys, const RatVec& a, const RatVec& b,
                               const VsysOptions& opts = {});

// Cotransversal search on Cbar and on [L | -b] for a certified b, then the
// mixed volume count. Absent when either search comes back empty.
std::optional<RootCountReport> try_cotransversal(const VerticalSystem& sys, std::mt19937_64& rng,
                                                 const VsysOptions& opts = {});

RootCountReport auto_root_count(const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& opts = {});

}  // namespace troproot
