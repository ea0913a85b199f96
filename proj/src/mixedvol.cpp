#include "troproot/mixedvol.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace troproot {

LatticePolytope::LatticePolytope(IntMatrix pts) : dim(pts.rows()), points(std::move(pts)) {
    if (points.cols() == 0) throw PreconditionError("polytope needs at least one point");
}

LatticePolytope::LatticePolytope(std::size_t d, const std::vector<IntVec>& pts) : dim(d), points(d, pts.size()) {
    if (pts.empty()) throw PreconditionError("polytope needs at least one point");
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (pts[j].size() != d) throw PreconditionError("point dimension mismatch");
        for (std::size_t i = 0; i < d; ++i) points(i, j) = pts[j][i];
    }
}

std::vector<IntVec> LatticePolytope::distinct_points() const {
    std::set<IntVec> s;
    for (std::size_t j = 0; j < points.cols(); ++j) s.insert(points.col(j));
    return {s.begin(), s.end()};
}

namespace {

Int orient(const std::vector<IntVec>& pts, const std::vector<std::size_t>& face, const IntVec& x,
           const Int& scale = 1) {
    std::size_t n = x.size();
    IntMatrix m(n, n);
    const IntVec& v0 = pts[face[0]];
    for (std::size_t k = 1; k < face.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) m(k - 1, i) = pts[face[k]][i] - v0[i];
    for (std::size_t i = 0; i < n; ++i) m(n - 1, i) = x[i] - scale * v0[i];
    return determinant(m);
}

struct Facet {
    std::vector<std::size_t> v;
    int inner = 0;
    bool alive = true;
};

}  // namespace

Int normalized_volume(const LatticePolytope& p) {
    std::size_t n = p.dim;
    if (n == 0) return 1;
    auto pts = p.distinct_points();
    if (pts.size() < n + 1) return 0;

    // initial simplex
    std::vector<std::size_t> simplex{0};
    RatMatrix dirs(0, n);
    for (std::size_t j = 1; j < pts.size() && simplex.size() < n + 1; ++j) {
        RatVec d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = Rat(pts[j][i] - pts[0][i]);
        RatMatrix trial = dirs;
        trial.append_row(d);
        if (rank(trial) == trial.rows()) {
            dirs = trial;
            simplex.push_back(j);
        }
    }
    if (simplex.size() < n + 1) return 0;

    IntVec ref(n);
    for (auto j : simplex)
        for (std::size_t i = 0; i < n; ++i) ref[i] += pts[j][i];
    Int scale = static_cast<long>(n + 1);

    std::vector<Facet> facets;
    Int volume = abs(orient(pts, std::vector<std::size_t>(simplex.begin(), simplex.end() - 1), pts[simplex.back()]));
    for (std::size_t drop = 0; drop <= n; ++drop) {
        Facet f;
        for (std::size_t k = 0; k <= n; ++k)
            if (k != drop) f.v.push_back(simplex[k]);
        f.inner = sgn(orient(pts, f.v, ref, scale));
        facets.push_back(std::move(f));
    }

    std::vector<bool> used(pts.size(), false);
    for (auto j : simplex) used[j] = true;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (used[j]) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < facets.size(); ++f) {
            if (!facets[f].alive) continue;
            Int o = orient(pts, facets[f].v, pts[j]);
            if (sgn(o) == -facets[f].inner) {
                visible.push_back(f);
                volume += abs(o);
            }
        }
        if (visible.empty()) continue;
        std::map<std::vector<std::size_t>, int> ridges;
        for (auto f : visible) {
            for (std::size_t drop = 0; drop < n; ++drop) {
                std::vector<std::size_t> r;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != drop) r.push_back(facets[f].v[k]);
                ++ridges[r];
            }
            facets[f].alive = false;
        }
        for (const auto& [r, cnt] : ridges) {
            if (cnt != 1) continue;
            Facet nf;
            nf.v = r;
            nf.v.push_back(j);
            std::sort(nf.v.begin(), nf.v.end());
            nf.inner = sgn(orient(pts, nf.v, ref, scale));
            facets.push_back(std::move(nf));
        }
    }
    return volume;
}

LatticePolytope minkowski_sum(const LatticePolytope& a, const LatticePolytope& b) {
    if (a.dim != b.dim) throw PreconditionError("minkowski_sum: dimension mismatch");
    auto pa = a.distinct_points(), pb = b.distinct_points();
    std::set<IntVec> s;
    for (const auto& x : pa)
        for (const auto& y : pb) {
            IntVec z(a.dim);
            for (std::size_t i = 0; i < a.dim; ++i) z[i] = x[i] + y[i];
            s.insert(z);
        }
    return LatticePolytope(a.dim, std::vector<IntVec>(s.begin(), s.end()));
}

Int mixed_volume_oracle(const std::vector<LatticePolytope>& ps) {
    std::size_t n = ps.size();
    if (n == 0) return 1;
    for (const auto& p : ps)
        if (p.dim != n) throw PreconditionError("mixed_volume_oracle: need n polytopes in dimension n");
    Int total = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        LatticePolytope sum;
        bool first = true;
        int size = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            ++size;
            sum = first ? ps[i] : minkowski_sum(sum, ps[i]);
            first = false;
        }
        Int v = normalized_volume(sum);
        if ((n - size) % 2) total -= v;
        else total += v;
    }
    Int fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<long>(i);
    if (total % fact != 0) throw Error("mixed_volume_oracle: inexact division");
    return total / fact;
}

namespace {

struct Lifted {
    std::vector<IntVec> pts;
    std::vector<Int> w;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// alpha = x0 + K z after imposing the chosen edge equalities.
struct Param {
    RatVec x0;
    RatMatrix k;
};

// Impose d . alpha = c. Returns false when inconsistent.
bool impose(Param& p, const IntVec& d, const Rat& c, bool& dependent) {
    std::size_t n = p.x0.size(), f = p.k.cols();
    RatVec dk(f);
    Rat dx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0) continue;
        Rat di(d[i]);
        dx += di * p.x0[i];
        for (std::size_t j = 0; j < f; ++j)
            if (sgn(p.k(i, j)) != 0) dk[j] += di * p.k(i, j);
    }
    std::size_t piv = f;
    for (std::size_t j = 0; j < f; ++j)
        if (sgn(dk[j]) != 0) {
            piv = j;
            break;
        }
    if (piv == f) {
        dependent = true;
        return dx == c;
    }
    Rat t = (c - dx) / dk[piv];
    for (std::size_t i = 0; i < n; ++i) p.x0[i] += t * p.k(i, piv);
    RatMatrix nk(n, f - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t jj = 0;
        for (std::size_t j = 0; j < f; ++j) {
            if (j == piv) continue;
            Rat v = p.k(i, j);
            if (sgn(dk[j]) != 0) v -= p.k(i, piv) * dk[j] / dk[piv];
            nk(i, jj++) = v;
        }
    }
    p.k = std::move(nk);
    return true;
}

// Rows g . alpha <= h for all points c of polytope i against edge endpoint a.
void add_rows(const Lifted& l, std::size_t a, std::size_t b, std::vector<IntVec>& g, std::vector<Int>& h) {
    for (std::size_t c = 0; c < l.pts.size(); ++c) {
        if (c == a || c == b) continue;
        IntVec row(l.pts[a].size());
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = l.pts[a][i] - l.pts[c][i];
        g.push_back(std::move(row));
        h.push_back(l.w[c] - l.w[a]);
    }
}

bool feasible(const Param& p, const std::vector<IntVec>& g, const std::vector<Int>& h) {
    std::size_t n = p.x0.size(), f = p.k.cols();
    RatMatrix gm(g.size(), f);
    RatVec rhs(g.size());
    for (std::size_t r = 0; r < g.size(); ++r) {
        Rat gx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (g[r][i] == 0) continue;
            Rat gi(g[r][i]);
            gx += gi * p.x0[i];
            for (std::size_t j = 0; j < f; ++j)
                if (sgn(p.k(i, j)) != 0) gm(r, j) += gi * p.k(i, j);
        }
        rhs[r] = Rat(h[r]) - gx;
    }
    return lp_feasible_ineq(gm, rhs).has_value();
}

struct SearchState {
    const std::vector<Lifted>* lifted;
    std::vector<std::size_t> order;
    std::size_t n;
    std::atomic<std::size_t>* nodes;
    std::size_t budget;
    std::atomic<bool>* degenerate;
    std::atomic<bool>* over_budget;
};

struct TaskResult {
    Int volume = 0;
    std::vector<MixedCell> cells;
};

void leaf(const SearchState& st, const Param& p, const std::vector<std::pair<std::size_t, std::size_t>>& chosen,
          TaskResult& out) {
    std::size_t n = st.n;
    const auto& lifted = *st.lifted;
    if (p.k.cols() != 0) {
        st.degenerate->store(true);
        return;
    }
    // strict lower-hull test at the unique alpha
    for (std::size_t lvl = 0; lvl < n; ++lvl) {
        const Lifted& l = lifted[st.order[lvl]];
        auto [a, b] = chosen[lvl];
        Rat va = Rat(l.w[a]);
        for (std::size_t i = 0; i < n; ++i) va += p.x0[i] * Rat(l.pts[a][i]);
        for (std::size_t c = 0; c < l.pts.size(); ++c) {
            if (c == a || c == b) continue;
            Rat vc = Rat(l.w[c]);
            for (std::size_t i = 0; i < n; ++i) vc += p.x0[i] * Rat(l.pts[c][i]);
            int s = sgn(vc - va);
            if (s < 0) return;
            if (s == 0) {
                st.degenerate->store(true);
                return;
            }
        }
    }
    IntMatrix d(n, n);
    MixedCell cell;
    cell.edges.resize(n);
    for (std::size_t lvl = 0; lvl < n; ++lvl) {
        const Lifted& l = lifted[st.order[lvl]];
        auto [a, b] = chosen[lvl];
        for (std::size_t i = 0; i < n; ++i) d(lvl, i) = l.pts[b][i] - l.pts[a][i];
        cell.edges[st.order[lvl]] = chosen[lvl];
    }
    cell.volume = abs(determinant(d));
    out.volume += cell.volume;
    out.cells.push_back(std::move(cell));
}

void dfs(const SearchState& st, std::size_t lvl, Param& p, std::vector<IntVec>& g, std::vector<Int>& h,
         std::vector<std::pair<std::size_t, std::size_t>>& chosen, TaskResult& out) {
    if (st.degenerate->load() || st.over_budget->load()) return;
    if (st.nodes->fetch_add(1) >= st.budget) {
        st.over_budget->store(true);
        return;
    }
    if (lvl == st.n) {
        leaf(st, p, chosen, out);
        return;
    }
    const Lifted& l = (*st.lifted)[st.order[lvl]];
    for (auto [a, b] : l.edges) {
        Param q = p;
        IntVec d(st.n);
        for (std::size_t i = 0; i < st.n; ++i) d[i] = l.pts[b][i] - l.pts[a][i];
        bool dependent = false;
        if (!impose(q, d, Rat(l.w[a] - l.w[b]), dependent)) continue;
        std::size_t g_before = g.size();
        add_rows(l, a, b, g, h);
        bool ok = true;
        if (lvl + 1 < st.n) ok = feasible(q, g, h);
        if (ok) {
            chosen.emplace_back(a, b);
            dfs(st, lvl + 1, q, g, h, chosen, out);
            chosen.pop_back();
        }
        g.resize(g_before);
        h.resize(g_before);
        if (st.degenerate->load() || st.over_budget->load()) return;
    }
}

enum class Outcome { Ok, Degenerate };

Outcome run_search(std::vector<Lifted>& lifted, std::size_t n, std::size_t budget, MixedVolumeResult& res) {
    // lower edges of each lifted polytope on its own
    for (auto& l : lifted) {
        l.edges.clear();
        for (std::size_t a = 0; a < l.pts.size(); ++a)
            for (std::size_t b = a + 1; b < l.pts.size(); ++b) {
                Param p{RatVec(n), RatMatrix::identity(n)};
                IntVec d(n);
                for (std::size_t i = 0; i < n; ++i) d[i] = l.pts[b][i] - l.pts[a][i];
                bool dep = false;
                if (!impose(p, d, Rat(l.w[a] - l.w[b]), dep)) continue;
                std::vector<IntVec> g;
                std::vector<Int> h;
                add_rows(l, a, b, g, h);
                if (feasible(p, g, h)) l.edges.emplace_back(a, b);
            }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return lifted[x].edges.size() < lifted[y].edges.size(); });

    std::atomic<std::size_t> nodes{0};
    std::atomic<bool> degenerate{false}, over{false};
    SearchState st{&lifted, order, n, &nodes, budget, &degenerate, &over};

    // split on the first level's edges
    const Lifted& first = lifted[order[0]];
    std::size_t tasks = first.edges.size();
    std::vector<TaskResult> results(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t t = next.fetch_add(1);
            if (t >= tasks) return;
            auto [a, b] = first.edges[t];
            Param p{RatVec(n), RatMatrix::identity(n)};
            IntVec d(n);
            for (std::size_t i = 0; i < n; ++i) d[i] = first.pts[b][i] - first.pts[a][i];
            bool dep = false;
            if (!impose(p, d, Rat(first.w[a] - first.w[b]), dep)) continue;
            std::vector<IntVec> g;
            std::vector<Int> h;
            add_rows(first, a, b, g, h);
            std::vector<std::pair<std::size_t, std::size_t>> chosen{{a, b}};
            dfs(st, 1, p, g, h, chosen, results[t]);
        }
    };
    unsigned nthreads = std::max(1u, std::min<unsigned>(worker_threads(), static_cast<unsigned>(tasks)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    res.nodes += nodes.load();
    if (over.load()) throw BudgetExceeded("mixed volume: node budget exhausted");
    if (degenerate.load()) return Outcome::Degenerate;
    res.volume = 0;
    res.cells.clear();
    for (auto& r : results) {
        res.volume += r.volume;
        for (auto& c : r.cells) res.cells.push_back(std::move(c));
    }
    return Outcome::Ok;
}

}  // namespace

MixedVolumeResult mixed_volume_cells(const std::vector<LatticePolytope>& ps, std::mt19937_64& rng,
                                     const MixedVolumeOptions& opts) {
    std::size_t n = ps.size();
    MixedVolumeResult res;
    if (n == 0) {
        res.volume = 1;
        return res;
    }
    std::vector<Lifted> lifted(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (ps[i].dim != n) throw PreconditionError("mixed_volume: need n polytopes in dimension n");
        lifted[i].pts = ps[i].distinct_points();
    }
    for (const auto& l : lifted)
        if (l.pts.size() < 2) {
            res.lifting.assign(n, {});
            return res;
        }
    std::uniform_int_distribution<long> dist(0, opts.lift_max);
    for (std::size_t attempt = 0; attempt <= opts.max_retries; ++attempt) {
        res.lifting.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) {
            lifted[i].w.clear();
            for (std::size_t j = 0; j < lifted[i].pts.size(); ++j) {
                long v = dist(rng);
                lifted[i].w.push_back(Int(v));
                res.lifting[i].push_back(v);
            }
        }
        res.retries_used = attempt;
        if (run_search(lifted, n, opts.node_budget, res) == Outcome::Ok) return res;
    }
    throw Error("mixed volume: every lifting was degenerate");
}

Int mixed_volume(const std::vector<LatticePolytope>& ps, std::mt19937_64& rng) {
    return mixed_volume_cells(ps, rng).volume;
}

}  // namespace troproot
