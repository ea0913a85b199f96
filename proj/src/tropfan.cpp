#include "troproot/tropfan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "json.hpp"

namespace troproot {

namespace {

struct ChainSet {
    Bits component;
    std::vector<std::vector<Bits>> chains;
};

ChainSet chains_of(const DualMatroid& m, const Bits& comp, std::size_t budget) {
    ChainSet cs{comp, {}};
    std::size_t depth = m.rank_of(comp) - 1;
    std::vector<Bits> chain;
    std::function<void(const Bits&)> dfs = [&](const Bits& f) {
        if (chain.size() == depth) {
            if (cs.chains.size() >= budget) throw BudgetExceeded("complete flag enumeration exceeded its budget");
            cs.chains.push_back(chain);
            return;
        }
        for (const auto& g : m.covers(f, comp)) {
            chain.push_back(g);
            dfs(g);
            chain.pop_back();
        }
    };
    dfs(Bits());
    return cs;
}

IntVec indicator(const Bits& b, std::size_t n) {
    IntVec v(n);
    for (auto e : b.elements()) v[e] = 1;
    return v;
}

IntMatrix columns(const std::vector<IntVec>& vs, std::size_t n) {
    IntMatrix m(n, vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) m(i, j) = vs[j][i];
    return m;
}

std::string cone_key(const Cone& c) {
    std::string k;
    for (std::size_t j = 0; j < c.rays.cols(); ++j) {
        for (std::size_t i = 0; i < c.rays.rows(); ++i) k += c.rays(i, j).get_str() + ",";
        k += ";";
    }
    k += "|";
    for (std::size_t j = 0; j < c.lineality.cols(); ++j) {
        for (std::size_t i = 0; i < c.lineality.rows(); ++i) k += c.lineality(i, j).get_str() + ",";
        k += ";";
    }
    return k;
}

Cone finish_cone(std::vector<IntVec> rays, std::vector<IntVec> lin, std::size_t n_full, bool affine) {
    std::size_t n = n_full;
    if (affine) {
        std::size_t last = n_full - 1;
        std::size_t pick = lin.size();
        for (std::size_t i = 0; i < lin.size(); ++i)
            if (lin[i][last] != 0) {
                pick = i;
                break;
            }
        if (pick == lin.size()) throw Error("affine slicing: no lineality direction crosses the slice");
        IntVec ell = lin[pick];
        if (ell[last] < 0)
            for (auto& x : ell) x = -x;
        if (ell[last] != 1) throw Error("affine slicing: lineality direction is not unimodular on the slice");
        auto shift = [&](IntVec& v) {
            Int t = v[last];
            if (t != 0)
                for (std::size_t i = 0; i < n_full; ++i) v[i] -= t * ell[i];
            v.pop_back();
        };
        lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(pick));
        for (auto& v : rays) shift(v);
        for (auto& v : lin) shift(v);
        n = n_full - 1;
    }
    for (auto& v : rays) v = primitive(v);
    std::sort(rays.begin(), rays.end());
    Cone c;
    c.rays = columns(rays, n);
    if (lin.empty()) {
        c.lineality = IntMatrix(n, 0);
    } else {
        IntMatrix rows(lin.size(), n);
        for (std::size_t i = 0; i < lin.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) rows(i, j) = lin[i][j];
        c.lineality = hermite_normal_form(rows).transpose();
    }
    return c;
}

}  // namespace

IntMatrix hermite_normal_form(const IntMatrix& rows_in) {
    IntMatrix h = rows_in;
    std::size_t m = h.rows(), n = h.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // gcd elimination in column c over rows r..m-1
        while (true) {
            std::size_t piv = m;
            for (std::size_t i = r; i < m; ++i)
                if (h(i, c) != 0 && (piv == m || abs(h(i, c)) < abs(h(piv, c)))) piv = i;
            if (piv == m) break;
            if (piv != r)
                for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(r, j));
            bool done = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (h(i, c) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
                for (std::size_t j = 0; j < n; ++j) h(i, j) -= q * h(r, j);
                if (h(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0)
            for (std::size_t j = 0; j < n; ++j) h(r, j) = -h(r, j);
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
            if (q != 0)
                for (std::size_t j = 0; j < n; ++j) h(i, j) -= q * h(r, j);
        }
        ++r;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < r; ++i) keep.push_back(i);
    return h.select_rows(keep);
}

TropLinearSpace trop_linear_space(const RatMatrix& a, bool affine, const FanOptions& opts) {
    if (affine && a.cols() == 0) throw PreconditionError("affine tropical linear space needs a -c column");
    LinearMatroidRep rep(a);
    auto m = std::make_shared<DualMatroid>(rep);
    TropLinearSpace t;
    t.affine = affine;
    t.ambient_dim = affine ? a.cols() - 1 : a.cols();
    t.matroid = m;
    for (const auto& c : m->circuits()) {
        t.circuits.push_back({c.support.elements()});
        t.signed_circuits.push_back({c.positive.elements(), c.support.minus(c.positive).elements()});
    }
    t.is_empty = m->has_loop();
    if (t.is_empty || !opts.materialize) return t;

    std::size_t n_full = a.cols();
    std::vector<ChainSet> comps;
    std::size_t total = 1;
    for (const auto& comp : m->components()) {
        comps.push_back(chains_of(*m, comp, opts.flag_budget));
        total *= comps.back().chains.size();
        if (total > opts.flag_budget) throw BudgetExceeded("fan construction exceeded the flag budget");
    }
    std::vector<IntVec> base_lin;
    for (const auto& cs : comps) base_lin.push_back(indicator(cs.component, n_full));
    for (auto e : m->coloops().elements()) {
        IntVec v(n_full);
        v[e] = 1;
        base_lin.push_back(v);
    }
    std::set<std::string> seen;
    std::vector<IntVec> rays;
    std::function<void(std::size_t)> product = [&](std::size_t ci) {
        if (ci == comps.size()) {
            Cone c = finish_cone(rays, base_lin, n_full, affine);
            if (seen.insert(cone_key(c)).second) t.cones.push_back(std::move(c));
            return;
        }
        for (const auto& chain : comps[ci].chains) {
            std::size_t before = rays.size();
            for (const auto& f : chain) rays.push_back(indicator(f, n_full));
            product(ci + 1);
            rays.resize(before);
        }
    };
    product(0);
    return t;
}

namespace {

RatVec extended(const TropLinearSpace& t, const RatVec& w) {
    if (w.size() != t.ambient_dim) throw PreconditionError("point has the wrong dimension");
    RatVec v = w;
    if (t.affine) v.push_back(0);
    return v;
}

}  // namespace

bool contains(const TropLinearSpace& t, const RatVec& w) {
    RatVec v = extended(t, w);
    for (const auto& c : t.circuits) {
        const Rat* best = nullptr;
        int hits = 0;
        for (auto e : c.elements) {
            if (!best || v[e] < *best) {
                best = &v[e];
                hits = 1;
            } else if (v[e] == *best) {
                ++hits;
            }
        }
        if (hits < 2) return false;
    }
    return true;
}

bool contains_positive(const TropLinearSpace& t, const RatVec& w) {
    RatVec v = extended(t, w);
    for (const auto& sc : t.signed_circuits) {
        Rat best;
        bool have = false;
        for (const auto* part : {&sc.positive, &sc.negative})
            for (auto e : *part)
                if (!have || v[e] < best) {
                    best = v[e];
                    have = true;
                }
        bool in_pos = false, in_neg = false;
        for (auto e : sc.positive)
            if (v[e] == best) in_pos = true;
        for (auto e : sc.negative)
            if (v[e] == best) in_neg = true;
        if (!in_pos || !in_neg) return false;
    }
    return true;
}

AffineSubspace binomial_trop(const IntMatrix& m, const RatVec& valc) {
    std::size_t n = m.rows(), r = m.cols();
    if (valc.size() != r) throw PreconditionError("binomial_trop: shift length must equal the number of columns");
    AffineSubspace s;
    s.basis = hstack(m, IntMatrix::identity(n));
    s.offset = valc;
    s.offset.resize(r + n);
    return s;
}

bool cone_contains(const Cone& c, const RatVec& w) {
    std::size_t n = w.size();
    std::size_t k = c.rays.cols(), l = c.lineality.cols();
    RatMatrix eq(n, k + l);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) eq(i, j) = Rat(c.rays(i, j));
        for (std::size_t j = 0; j < l; ++j) eq(i, k + j) = Rat(c.lineality(i, j));
    }
    RatMatrix le(k, k + l);
    for (std::size_t j = 0; j < k; ++j) le(j, j) = -1;
    return lp_feasible_point(eq, w, le, RatVec(k)).has_value();
}

std::string fan_to_json(const TropLinearSpace& t) {
    using nlohmann::json;
    auto cols = [](const IntMatrix& m) {
        json arr = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            json v = json::array();
            for (std::size_t i = 0; i < m.rows(); ++i) v.push_back(m(i, j).get_si());
            arr.push_back(v);
        }
        return arr;
    };
    json out;
    out["ambient"] = t.ambient_dim;
    out["affine"] = t.affine;
    out["cones"] = json::array();
    for (const auto& c : t.cones) out["cones"].push_back({{"rays", cols(c.rays)}, {"lineality", cols(c.lineality)}});
    return out.dump();
}

}  // namespace troproot
