#include "troproot/matroid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace troproot {

Bits Bits::from(const std::vector<std::size_t>& elems) {
    Bits b;
    for (auto e : elems) {
        if (e >= kCapacity) throw PreconditionError("ground set too large (limit 256 elements)");
        b.set(e);
    }
    return b;
}

Bits Bits::range(std::size_t n) {
    if (n > kCapacity) throw PreconditionError("ground set too large (limit 256 elements)");
    Bits b;
    for (std::size_t i = 0; i < n; ++i) b.set(i);
    return b;
}

std::size_t Bits::count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
}

bool Bits::subset_of(const Bits& o) const {
    for (int i = 0; i < 4; ++i)
        if (w_[i] & ~o.w_[i]) return false;
    return true;
}

std::vector<std::size_t> Bits::elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 4; ++i) {
        auto w = w_[i];
        while (w) {
            int t = __builtin_ctzll(w);
            out.push_back(i * 64 + static_cast<std::size_t>(t));
            w &= w - 1;
        }
    }
    return out;
}

std::size_t Bits::first() const {
    for (std::size_t i = 0; i < 4; ++i)
        if (w_[i]) return i * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[i]));
    return kCapacity;
}

Bits Bits::operator|(const Bits& o) const {
    Bits r;
    for (int i = 0; i < 4; ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
}

Bits Bits::operator&(const Bits& o) const {
    Bits r;
    for (int i = 0; i < 4; ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
}

Bits Bits::minus(const Bits& o) const {
    Bits r;
    for (int i = 0; i < 4; ++i) r.w_[i] = w_[i] & ~o.w_[i];
    return r;
}

bool Bits::operator<(const Bits& o) const {
    // lexicographic on sorted element lists
    Bits diff;
    for (int i = 0; i < 4; ++i) diff.w_[i] = w_[i] ^ o.w_[i];
    std::size_t e = diff.first();
    if (e == kCapacity) return false;
    auto has_above = [e](const Bits& b) {
        for (std::size_t i = e + 1; i < kCapacity; ++i) {
            if ((i & 63) == 0 && b.w_[i >> 6] == 0) {
                i += 63;
                continue;
            }
            if (b.test(i)) return true;
        }
        return false;
    };
    return test(e) ? has_above(o) : !has_above(*this);
}

std::size_t Bits::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : w_) {
        h ^= std::hash<std::uint64_t>()(w);
        h *= 1099511628211ull;
    }
    return h;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (!f(idx)) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

LinearMatroidRep::LinearMatroidRep(RatMatrix a) : a_(std::move(a)) {
    if (rank(a_) != a_.rows()) throw PreconditionError("matroid representation must have full row rank");
}

namespace {

// Nonzero rows of the reduced row echelon form.
RatMatrix row_basis(const RatMatrix& a) {
    RatMatrix r = a;
    auto piv = rref(r);
    RatMatrix out(piv.size(), a.cols());
    for (std::size_t i = 0; i < piv.size(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = r(i, j);
    return out;
}

struct DisjointSets {
    std::vector<std::size_t> p;
    explicit DisjointSets(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    std::size_t find(std::size_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<CircuitVector> circuit_vectors(const RatMatrix& a_in) {
    RatMatrix a = row_basis(a_in);
    std::size_t k = a.rows(), n = a.cols();
    if (n > Bits::kCapacity) throw PreconditionError("ground set too large (limit 256 elements)");
    // split into independent row/column blocks
    DisjointSets ds(k + n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(a(i, j)) != 0) ds.unite(i, k + j);
    std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> blocks;
    for (std::size_t i = 0; i < k; ++i) blocks[ds.find(i)].first.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
        auto it = blocks.find(ds.find(k + j));
        if (it != blocks.end()) it->second.second.push_back(j);
    }
    std::vector<CircuitVector> out;
    for (const auto& [root, block] : blocks) {
        const auto& rows = block.first;
        const auto& cols = block.second;
        RatMatrix b = a.select_rows(rows).select_cols(cols);
        std::size_t kb = b.rows();
        std::unordered_set<Bits, BitsHash> seen;
        std::vector<CircuitVector> found;
        for_each_subset(cols.size(), kb - 1, [&](const std::vector<std::size_t>& j) {
            RatMatrix bj = b.select_cols(j).transpose();
            RatMatrix ker = kernel_basis(bj);
            if (ker.cols() != 1) return true;
            RatVec v(n);
            Bits supp;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                Rat s = 0;
                for (std::size_t r = 0; r < kb; ++r) s += ker(r, 0) * b(r, c);
                if (sgn(s) != 0) {
                    v[cols[c]] = s;
                    supp.set(cols[c]);
                }
            }
            if (supp.none() || !seen.insert(supp).second) return true;
            Rat lead = v[supp.first()];
            Bits pos;
            for (auto e : supp.elements()) {
                v[e] /= lead;
                if (sgn(v[e]) > 0) pos.set(e);
            }
            found.push_back({supp, pos, v});
            return true;
        });
        for (const auto& c : found) {
            bool minimal = true;
            for (const auto& d : found)
                if (d.support != c.support && d.support.subset_of(c.support)) {
                    minimal = false;
                    break;
                }
            if (minimal) out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const CircuitVector& x, const CircuitVector& y) { return x.support < y.support; });
    return out;
}

DualMatroid::DualMatroid(const LinearMatroidRep& rep)
    : a_(rep.matrix()), n_(rep.ground_size()), rows_(rep.row_rank()) {
    rank_ = n_ - rows_;
    circuits_ = circuit_vectors(a_);
    DisjointSets ds(n_);
    Bits covered;
    for (const auto& c : circuits_) {
        auto el = c.support.elements();
        if (el.size() == 1) has_loop_ = true;
        for (auto e : el) {
            ds.unite(el[0], e);
            covered.set(e);
        }
    }
    std::map<std::size_t, Bits> comps;
    for (std::size_t e = 0; e < n_; ++e) {
        if (!covered.test(e)) {
            coloops_.set(e);
            continue;
        }
        comps[ds.find(e)].set(e);
    }
    for (const auto& [root, bits] : comps) components_.push_back(bits);
}

Bits DualMatroid::closure(const Bits& s) const {
    Bits out = s;
    for (const auto& c : circuits_) {
        Bits d = c.support.minus(s);
        if (d.count() == 1) out = out | d;
    }
    return out;
}

std::size_t DualMatroid::rank_of(const Bits& s) const {
    std::vector<std::size_t> comp;
    for (std::size_t e = 0; e < n_; ++e)
        if (!s.test(e)) comp.push_back(e);
    return s.count() + troproot::rank(a_.select_cols(comp)) - rows_;
}

std::vector<Bits> DualMatroid::covers(const Bits& f, const Bits& comp) const {
    std::vector<Bits> out;
    std::unordered_set<Bits, BitsHash> seen;
    for (auto e : comp.minus(f).elements()) {
        Bits g = f;
        g.set(e);
        g = closure(g);
        if (seen.insert(g).second) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Circuit> circuits(const LinearMatroidRep& rep) {
    std::vector<Circuit> out;
    for (const auto& c : circuit_vectors(rep.matrix())) out.push_back({c.support.elements()});
    return out;
}

std::vector<SignedCircuit> signed_circuits(const LinearMatroidRep& rep) {
    std::vector<SignedCircuit> out;
    for (const auto& c : circuit_vectors(rep.matrix())) {
        auto pos = c.positive.elements();
        auto neg = c.support.minus(c.positive).elements();
        out.push_back({pos, neg});
        out.push_back({neg, pos});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t dual_rank(const LinearMatroidRep& rep, const std::vector<std::size_t>& s) {
    Bits b = Bits::from(s);
    std::vector<std::size_t> comp;
    for (std::size_t e = 0; e < rep.ground_size(); ++e)
        if (!b.test(e)) comp.push_back(e);
    return b.count() + rank(rep.matrix().select_cols(comp)) - rep.row_rank();
}

std::vector<std::size_t> closure(const LinearMatroidRep& rep, const std::vector<std::size_t>& s) {
    DualMatroid m(rep);
    return m.closure(Bits::from(s)).elements();
}

std::vector<std::vector<std::size_t>> flats(const LinearMatroidRep& rep) {
    DualMatroid m(rep);
    Bits ground = Bits::range(rep.ground_size());
    std::set<std::vector<std::size_t>> found;
    std::vector<Bits> frontier{m.closure(Bits())};
    std::unordered_set<Bits, BitsHash> seen{frontier[0]};
    while (!frontier.empty()) {
        Bits f = frontier.back();
        frontier.pop_back();
        found.insert(f.elements());
        for (const auto& g : m.covers(f, ground))
            if (seen.insert(g).second) frontier.push_back(g);
    }
    return {found.begin(), found.end()};
}

std::vector<Flag> complete_flags(const LinearMatroidRep& rep, std::size_t budget) {
    DualMatroid m(rep);
    Bits ground = Bits::range(rep.ground_size());
    std::vector<Flag> out;
    if (m.rank() == 0) return out;
    std::size_t depth = m.rank() - 1;
    std::vector<Bits> chain;
    std::function<void(const Bits&)> dfs = [&](const Bits& f) {
        if (chain.size() == depth) {
            if (out.size() >= budget) throw BudgetExceeded("complete flag enumeration exceeded its budget");
            Flag fl;
            for (const auto& c : chain) fl.flats.push_back(c.elements());
            out.push_back(std::move(fl));
            return;
        }
        for (const auto& g : m.covers(f, ground)) {
            chain.push_back(g);
            dfs(g);
            chain.pop_back();
        }
    };
    dfs(m.closure(Bits()));
    return out;
}

namespace {

// Calls f(J, det) for every maximal minor.
template <class F>
void for_each_maximal_minor(const RatMatrix& a, F&& f) {
    for_each_subset(a.cols(), a.rows(), [&](const std::vector<std::size_t>& j) {
        return f(j, determinant(a.select_cols(j)));
    });
}

}  // namespace

bool same_matroid(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("same_matroid: shape mismatch");
    bool same = true;
    for_each_maximal_minor(a, [&](const std::vector<std::size_t>& j, const Rat& d) {
        if ((sgn(d) == 0) != (sgn(determinant(b.select_cols(j))) == 0)) same = false;
        return same;
    });
    return same;
}

bool same_oriented_matroid(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw PreconditionError("same_oriented_matroid: shape mismatch");
    bool same = true;
    for_each_maximal_minor(a, [&](const std::vector<std::size_t>& j, const Rat& d) {
        if (sgn(d) != sgn(determinant(b.select_cols(j)))) same = false;
        return same;
    });
    return same;
}

bool certify_generic_b(const RatMatrix& l, const RatVec& b) {
    return certify_generic_b(l, b, std::vector<bool>(b.size(), true));
}

bool certify_generic_b(const RatMatrix& l, const RatVec& b, const std::vector<bool>& symbolic) {
    std::size_t d = l.rows(), n = l.cols();
    if (b.size() != d || symbolic.size() != d) throw PreconditionError("certify_generic_b: length mismatch");
    if (rank(l) != d) throw PreconditionError("certify_generic_b: L must have full row rank");
    if (d == 0) return true;
    bool ok = true;
    for_each_subset(n, d - 1, [&](const std::vector<std::size_t>& j) {
        RatMatrix lj = l.select_cols(j);
        RatMatrix full(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t c = 0; c + 1 < d; ++c) full(i, c) = lj(i, c);
            full(i, d - 1) = -b[i];
        }
        bool spec_zero = sgn(determinant(full)) == 0;
        // expansion along the -b column
        Rat constant = 0;
        bool symbolic_zero = true;
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<std::size_t> keep;
            for (std::size_t r = 0; r < d; ++r)
                if (r != i) keep.push_back(r);
            Rat cof = determinant(lj.select_rows(keep));
            if ((i + d - 1) % 2) cof = -cof;
            if (symbolic[i]) {
                if (sgn(cof) != 0) symbolic_zero = false;
            } else {
                constant -= b[i] * cof;
            }
        }
        if (sgn(constant) != 0) symbolic_zero = false;
        if (spec_zero != symbolic_zero) ok = false;
        return ok;
    });
    return ok;
}

}  // namespace troproot
