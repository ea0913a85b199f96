#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "troproot/exact.hpp"

namespace troproot {

// Fixed-capacity subset of {0, ..., 255}.
class Bits {
public:
    static constexpr std::size_t kCapacity = 256;

    Bits() : w_{} {}
    static Bits from(const std::vector<std::size_t>& elems);
    static Bits range(std::size_t n);

    void set(std::size_t i) { w_[i >> 6] |= (std::uint64_t(1) << (i & 63)); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    std::size_t count() const;
    bool none() const { return (w_[0] | w_[1] | w_[2] | w_[3]) == 0; }
    bool subset_of(const Bits& o) const;
    std::vector<std::size_t> elements() const;
    // Smallest element, or kCapacity when empty.
    std::size_t first() const;

    Bits operator|(const Bits& o) const;
    Bits operator&(const Bits& o) const;
    Bits minus(const Bits& o) const;
    bool operator==(const Bits& o) const { return w_ == o.w_; }
    bool operator!=(const Bits& o) const { return w_ != o.w_; }
    bool operator<(const Bits& o) const;
    std::size_t hash() const;

private:
    std::array<std::uint64_t, 4> w_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return b.hash(); }
};

class LinearMatroidRep {
public:
    explicit LinearMatroidRep(RatMatrix a);
    const RatMatrix& matrix() const { return a_; }
    std::size_t ground_size() const { return a_.cols(); }
    std::size_t row_rank() const { return a_.rows(); }

private:
    RatMatrix a_;
};

struct Circuit {
    std::vector<std::size_t> elements;
    bool operator==(const Circuit& o) const { return elements == o.elements; }
    bool operator<(const Circuit& o) const { return elements < o.elements; }
};

struct SignedCircuit {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
    bool operator==(const SignedCircuit& o) const { return positive == o.positive && negative == o.negative; }
    bool operator<(const SignedCircuit& o) const {
        return positive != o.positive ? positive < o.positive : negative < o.negative;
    }
};

struct Flag {
    std::vector<std::vector<std::size_t>> flats;
};

// A circuit together with a realizing row-space vector. The stored sign is
// canonical: the smallest element of the support is positive.
struct CircuitVector {
    Bits support;
    Bits positive;
    RatVec vec;
};

constexpr std::size_t kDefaultFlagBudget = 200000;

// Precomputed matroid data of M*[A] used by the fan and intersection code.
class DualMatroid {
public:
    explicit DualMatroid(const LinearMatroidRep& rep);

    std::size_t ground_size() const { return n_; }
    std::size_t rank() const { return rank_; }
    const std::vector<CircuitVector>& circuits() const { return circuits_; }
    // Connected components that contain at least one circuit, sorted by first element.
    const std::vector<Bits>& components() const { return components_; }
    // Elements lying in no circuit.
    const Bits& coloops() const { return coloops_; }
    bool has_loop() const { return has_loop_; }

    Bits closure(const Bits& s) const;
    std::size_t rank_of(const Bits& s) const;
    // Flats covering f inside the component comp, sorted.
    std::vector<Bits> covers(const Bits& f, const Bits& comp) const;

private:
    RatMatrix a_;
    std::size_t n_ = 0;
    std::size_t rows_ = 0;
    std::size_t rank_ = 0;
    std::vector<CircuitVector> circuits_;
    std::vector<Bits> components_;
    Bits coloops_;
    bool has_loop_ = false;
};

std::vector<CircuitVector> circuit_vectors(const RatMatrix& a);
std::vector<Circuit> circuits(const LinearMatroidRep& rep);
std::vector<SignedCircuit> signed_circuits(const LinearMatroidRep& rep);
std::size_t dual_rank(const LinearMatroidRep& rep, const std::vector<std::size_t>& s);
std::vector<std::size_t> closure(const LinearMatroidRep& rep, const std::vector<std::size_t>& s);
std::vector<std::vector<std::size_t>> flats(const LinearMatroidRep& rep);
std::vector<Flag> complete_flags(const LinearMatroidRep& rep, std::size_t budget = kDefaultFlagBudget);

bool same_matroid(const RatMatrix& a, const RatMatrix& b);
bool same_oriented_matroid(const RatMatrix& a, const RatMatrix& b);

// Genericity of b for [L | -b] with b symbolic. Entries of b whose mask
// entry is false are treated as fixed constants rather than symbols.
bool certify_generic_b(const RatMatrix& l, const RatVec& b);
bool certify_generic_b(const RatMatrix& l, const RatVec& b, const std::vector<bool>& symbolic);

// Visit all k-subsets of {0..n-1} in lexicographic order; stop when f returns false.
void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f);

}  // namespace troproot
