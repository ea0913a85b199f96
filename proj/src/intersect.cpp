#include "troproot/intersect.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace troproot {

namespace {

struct LeafOutcome {
    enum Kind { Miss, Hit, Degenerate } kind = Miss;
    IntersectionPoint point;
};

// Affine functions of z giving the coordinates of points of rowspan(w_dir) + shift,
// with a trailing zero coordinate in the affine case.
struct Param {
    std::size_t dim = 0;      // number of z variables
    std::size_t n_full = 0;   // unsliced ambient
    std::size_t ambient = 0;  // sliced ambient
    RatMatrix coef;           // n_full x dim
    RatVec constant;          // n_full
    IntMatrix lattice;        // n_full x dim, saturated lattice of the direction space
};

Param make_param(const TropLinearSpace& t, const IntMatrix& w_dir, const RatVec& shift) {
    Param p;
    p.ambient = t.ambient_dim;
    p.n_full = t.ambient_dim + (t.affine ? 1 : 0);
    p.dim = w_dir.rows();
    if (w_dir.cols() != p.ambient || shift.size() != p.ambient)
        throw PreconditionError("intersection: dimension mismatch between fan and affine space");
    if (rank(w_dir) != p.dim) throw PreconditionError("intersection: direction rows must be independent");
    p.coef = RatMatrix(p.n_full, p.dim);
    p.constant = RatVec(p.n_full);
    for (std::size_t e = 0; e < p.ambient; ++e) {
        for (std::size_t d = 0; d < p.dim; ++d) p.coef(e, d) = Rat(w_dir(d, e));
        p.constant[e] = shift[e];
    }
    IntMatrix sat = saturate(w_dir.transpose());
    p.lattice = IntMatrix(p.n_full, sat.cols());
    for (std::size_t i = 0; i < p.ambient; ++i)
        for (std::size_t j = 0; j < sat.cols(); ++j) p.lattice(i, j) = sat(i, j);
    return p;
}

std::size_t fan_dimension(const TropLinearSpace& t) {
    return t.matroid->rank() - (t.affine ? 1 : 0);
}

// Solve for the unique point of span(cone) meeting the affine space.
LeafOutcome solve_leaf(const TropLinearSpace& t, const Param& p, const std::vector<IntVec>& rays,
                       const std::vector<IntVec>& lin) {
    std::size_t nr = rays.size(), nl = lin.size();
    if (nr + nl + p.dim != p.n_full)
        throw PreconditionError("intersection: fan and affine space do not have complementary dimensions");
    RatMatrix sys(p.n_full, p.n_full);
    for (std::size_t i = 0; i < p.n_full; ++i) {
        for (std::size_t j = 0; j < nr; ++j) sys(i, j) = Rat(rays[j][i]);
        for (std::size_t j = 0; j < nl; ++j) sys(i, nr + j) = Rat(lin[j][i]);
        for (std::size_t d = 0; d < p.dim; ++d) sys(i, nr + nl + d) = -p.coef(i, d);
    }
    LeafOutcome out;
    auto sol = solve_square(sys, p.constant);
    if (!sol) {
        if (solve_affine(sys, p.constant)) out.kind = LeafOutcome::Degenerate;
        return out;
    }
    for (std::size_t j = 0; j < nr; ++j) {
        if (sgn((*sol)[j]) < 0) return out;
    }
    for (std::size_t j = 0; j < nr; ++j)
        if (sgn((*sol)[j]) == 0) {
            out.kind = LeafOutcome::Degenerate;
            return out;
        }
    RatVec w(p.ambient);
    for (std::size_t e = 0; e < p.ambient; ++e) {
        w[e] = p.constant[e];
        for (std::size_t d = 0; d < p.dim; ++d) w[e] += p.coef(e, d) * (*sol)[nr + nl + d];
    }
    std::vector<IntVec> gens = rays;
    gens.insert(gens.end(), lin.begin(), lin.end());
    IntMatrix g(p.n_full, gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t i = 0; i < p.n_full; ++i) g(i, j) = gens[j][i];
    IntMatrix zs = saturate(g);
    IntMatrix both = hstack(zs, p.lattice);
    out.kind = LeafOutcome::Hit;
    out.point.point = w;
    out.point.multiplicity = abs(determinant(both));
    out.point.positive = contains_positive(t, w);
    return out;
}

struct Collector {
    std::map<std::vector<std::string>, IntersectionPoint> pts;

    void add(const IntersectionPoint& pt) {
        std::vector<std::string> key;
        for (const auto& x : pt.point) key.push_back(to_string(x));
        auto [it, fresh] = pts.emplace(key, pt);
        if (!fresh && it->second.multiplicity != pt.multiplicity)
            throw Error("intersection: containing cones disagree on the multiplicity");
    }

    IntersectionReport report(const RatVec& shift) const {
        IntersectionReport r;
        r.shift_h = shift;
        for (const auto& [k, pt] : pts) r.points.push_back(pt);
        std::sort(r.points.begin(), r.points.end(),
                  [](const IntersectionPoint& a, const IntersectionPoint& b) { return a.point < b.point; });
        for (const auto& pt : r.points) r.total_degree += pt.multiplicity;
        return r;
    }
};

IntVec indicator(const Bits& b, std::size_t n) {
    IntVec v(n);
    for (auto e : b.elements()) v[e] = 1;
    return v;
}

}  // namespace

std::optional<IntersectionReport> intersect_at_shift(const TropLinearSpace& t, const IntMatrix& w_dir,
                                                     const RatVec& shift, std::size_t node_budget) {
    Param p = make_param(t, w_dir, shift);
    if (t.is_empty) return Collector{}.report(shift);
    if (fan_dimension(t) + p.dim != p.ambient)
        throw PreconditionError("intersection: fan and affine space do not have complementary dimensions");
    const DualMatroid& m = *t.matroid;
    const auto& comps = m.components();
    std::vector<std::size_t> depth(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) depth[i] = m.rank_of(comps[i]) - 1;
    std::vector<IntVec> base_lin;
    for (const auto& c : comps) base_lin.push_back(indicator(c, p.n_full));
    for (auto e : m.coloops().elements()) {
        IntVec v(p.n_full);
        v[e] = 1;
        base_lin.push_back(v);
    }

    std::vector<std::vector<Bits>> chains(comps.size());
    Collector col;
    bool degenerate = false;
    std::size_t nodes = 0;

    auto add_diff = [&](RatMatrix& a, RatVec& b, std::size_t e, std::size_t f) {
        // row for w_e - w_f (<=|=) 0
        std::vector<Rat> row(p.dim);
        for (std::size_t d = 0; d < p.dim; ++d) row[d] = p.coef(e, d) - p.coef(f, d);
        a.append_row(row);
        b.push_back(p.constant[f] - p.constant[e]);
    };
    auto feasible = [&]() {
        RatMatrix eq(0, p.dim), le(0, p.dim);
        RatVec eqb, leb;
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            const auto& ch = chains[ci];
            if (ch.empty()) continue;
            bool complete = ch.size() == depth[ci];
            std::vector<Bits> blocks;
            Bits prev;
            for (const auto& f : ch) {
                blocks.push_back(f.minus(prev));
                prev = f;
            }
            Bits rest = comps[ci].minus(prev);
            if (complete) blocks.push_back(rest);
            std::vector<std::size_t> reps;
            for (const auto& bl : blocks) {
                auto el = bl.elements();
                reps.push_back(el[0]);
                for (std::size_t i = 1; i < el.size(); ++i) add_diff(eq, eqb, el[i], el[0]);
            }
            for (std::size_t i = 0; i + 1 < reps.size(); ++i) add_diff(le, leb, reps[i + 1], reps[i]);
            if (!complete)
                for (auto e : rest.elements()) add_diff(le, leb, e, reps.back());
        }
        if (eq.rows() == 0 && le.rows() == 0) return true;
        return lp_feasible_point(eq, eqb, le, leb).has_value();
    };

    std::function<void(std::size_t)> dfs = [&](std::size_t ci) {
        if (degenerate) return;
        if (++nodes > node_budget) throw BudgetExceeded("stable intersection search exceeded its node budget");
        while (ci < comps.size() && chains[ci].size() == depth[ci]) ++ci;
        if (ci == comps.size()) {
            std::vector<IntVec> rays;
            for (const auto& ch : chains)
                for (const auto& f : ch) rays.push_back(indicator(f, p.n_full));
            auto out = solve_leaf(t, p, rays, base_lin);
            if (out.kind == LeafOutcome::Degenerate) degenerate = true;
            else if (out.kind == LeafOutcome::Hit) col.add(out.point);
            return;
        }
        Bits cur = chains[ci].empty() ? Bits() : chains[ci].back();
        for (const auto& g : m.covers(cur, comps[ci])) {
            chains[ci].push_back(g);
            bool leaf_next = true;
            for (std::size_t k = 0; k < comps.size(); ++k)
                if (chains[k].size() != depth[k]) leaf_next = false;
            if (leaf_next || feasible()) dfs(ci);
            chains[ci].pop_back();
            if (degenerate) return;
        }
    };
    if (feasible()) dfs(0);
    if (degenerate) return std::nullopt;
    auto r = col.report(shift);
    r.nodes_visited = nodes;
    return r;
}

std::optional<IntersectionReport> intersect_at_shift_circuits(const TropLinearSpace& t, const IntMatrix& w_dir,
                                                              const RatVec& shift, std::size_t node_budget) {
    Param p = make_param(t, w_dir, shift);
    if (t.is_empty) return Collector{}.report(shift);
    if (fan_dimension(t) + p.dim != p.ambient)
        throw PreconditionError("intersection: fan and affine space do not have complementary dimensions");
    const DualMatroid& m = *t.matroid;
    const auto& comps = m.components();

    std::vector<std::vector<std::size_t>> circ;
    for (const auto& c : m.circuits()) circ.push_back(c.support.elements());
    std::stable_sort(circ.begin(), circ.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });

    auto diff_row = [&](std::size_t e, std::size_t f, RatVec& row, Rat& rhs) {
        row.assign(p.dim, Rat(0));
        for (std::size_t d = 0; d < p.dim; ++d) row[d] = p.coef(e, d) - p.coef(f, d);
        rhs = p.constant[f] - p.constant[e];
    };

    RatMatrix eq(0, p.dim), le(0, p.dim);
    RatVec eqb, leb;
    Collector col;
    bool degenerate = false;
    std::size_t nodes = 0;

    // Complete flag of upper level sets of w inside every component, or nothing.
    auto level_flag = [&](const RatVec& v, std::vector<IntVec>& rays) {
        for (const auto& comp : comps) {
            auto el = comp.elements();
            std::vector<Rat> vals;
            for (auto e : el) vals.push_back(v[e]);
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            if (vals.size() != m.rank_of(comp)) return false;
            for (std::size_t i = vals.size(); i-- > 1;) {
                Bits f;
                for (auto e : el)
                    if (v[e] >= vals[i]) f.set(e);
                if (m.closure(f) != f || m.rank_of(f) != vals.size() - i) return false;
                rays.push_back(indicator(f, p.n_full));
            }
        }
        return true;
    };
    std::vector<IntVec> base_lin;
    for (const auto& c : comps) base_lin.push_back(indicator(c, p.n_full));
    for (auto e : m.coloops().elements()) {
        IntVec v(p.n_full);
        v[e] = 1;
        base_lin.push_back(v);
    }

    auto point_found = [&](const RatVec& z) {
        RatVec v(p.n_full);
        for (std::size_t e = 0; e < p.n_full; ++e) {
            v[e] = p.constant[e];
            for (std::size_t d = 0; d < p.dim; ++d) v[e] += p.coef(e, d) * z[d];
        }
        for (const auto& c : circ) {
            Rat best = v[c[0]];
            for (auto e : c) best = std::min(best, v[e]);
            int hits = 0;
            for (auto e : c) hits += v[e] == best;
            if (hits < 2) return;
        }
        std::vector<IntVec> rays;
        if (!level_flag(v, rays)) {
            degenerate = true;
            return;
        }
        auto out = solve_leaf(t, p, rays, base_lin);
        if (out.kind != LeafOutcome::Hit) {
            degenerate = true;
            return;
        }
        col.add(out.point);
    };

    auto push_pair = [&](const std::vector<std::size_t>& c, std::size_t e, std::size_t f) {
        RatVec row;
        Rat rhs;
        diff_row(e, f, row, rhs);
        eq.append_row(row);
        eqb.push_back(rhs);
        for (auto g : c) {
            if (g == e || g == f) continue;
            diff_row(e, g, row, rhs);
            le.append_row(row);
            leb.push_back(rhs);
        }
    };
    auto pop_to = [&](std::size_t eq_rows, std::size_t le_rows) {
        eq.truncate_rows(eq_rows);
        eqb.resize(eq_rows);
        le.truncate_rows(le_rows);
        leb.resize(le_rows);
    };

    // Branch on the pending circuit with the fewest feasible minimizing pairs.
    std::vector<bool> done(circ.size(), false);
    std::function<void()> dfs = [&]() {
        if (degenerate) return;
        if (++nodes > node_budget) throw BudgetExceeded("stable intersection search exceeded its node budget");
        std::size_t rk = rank(eq);
        std::size_t best = circ.size();
        std::vector<std::pair<std::size_t, std::size_t>> best_pairs;
        if (rk < p.dim) {
            for (std::size_t ci = 0; ci < circ.size(); ++ci) {
                if (done[ci]) continue;
                const auto& c = circ[ci];
                std::vector<std::pair<std::size_t, std::size_t>> ok;
                for (std::size_t i = 0; i < c.size(); ++i)
                    for (std::size_t j = i + 1; j < c.size(); ++j) {
                        std::size_t eq_rows = eq.rows(), le_rows = le.rows();
                        push_pair(c, c[i], c[j]);
                        if (lp_feasible_point(eq, eqb, le, leb)) ok.emplace_back(c[i], c[j]);
                        pop_to(eq_rows, le_rows);
                    }
                if (ok.empty()) return;
                if (best == circ.size() || ok.size() < best_pairs.size()) {
                    best = ci;
                    best_pairs = ok;
                    if (ok.size() == 1) break;
                }
            }
        }
        if (best == circ.size()) {
            auto z = lp_feasible_point(eq, eqb, le, leb);
            if (!z) return;
            if (rk < p.dim) {
                degenerate = true;
                return;
            }
            point_found(*z);
            return;
        }
        done[best] = true;
        for (const auto& [e, f] : best_pairs) {
            std::size_t eq_rows = eq.rows(), le_rows = le.rows();
            push_pair(circ[best], e, f);
            dfs();
            pop_to(eq_rows, le_rows);
            if (degenerate) break;
        }
        done[best] = false;
    };
    dfs();
    if (degenerate) return std::nullopt;
    auto r = col.report(shift);
    r.nodes_visited = nodes;
    return r;
}

std::optional<IntersectionReport> intersect_at_shift_explicit(const TropLinearSpace& t, const IntMatrix& w_dir,
                                                              const RatVec& shift) {
    Param p = make_param(t, w_dir, shift);
    Collector col;
    if (t.is_empty) return col.report(shift);
    // work directly in sliced coordinates
    Param q = p;
    q.n_full = p.ambient;
    q.coef = RatMatrix(p.ambient, p.dim);
    q.constant = RatVec(shift);
    q.lattice = IntMatrix(p.ambient, p.lattice.cols());
    for (std::size_t i = 0; i < p.ambient; ++i) {
        for (std::size_t d = 0; d < p.dim; ++d) q.coef(i, d) = p.coef(i, d);
        for (std::size_t j = 0; j < p.lattice.cols(); ++j) q.lattice(i, j) = p.lattice(i, j);
    }
    for (const auto& c : t.cones) {
        std::vector<IntVec> rays, lin;
        for (std::size_t j = 0; j < c.rays.cols(); ++j) rays.push_back(c.rays.col(j));
        for (std::size_t j = 0; j < c.lineality.cols(); ++j) lin.push_back(c.lineality.col(j));
        auto out = solve_leaf(t, q, rays, lin);
        if (out.kind == LeafOutcome::Degenerate) return std::nullopt;
        if (out.kind == LeafOutcome::Hit) col.add(out.point);
    }
    return col.report(shift);
}

IntersectionReport stable_intersect(const TropLinearSpace& t, const IntMatrix& w_dir,
                                    const std::vector<std::size_t>& shift_support, std::mt19937_64& rng,
                                    const IntersectOptions& opts) {
    if (t.is_empty) {
        IntersectionReport r;
        r.shift_h = RatVec(t.ambient_dim);
        return r;
    }
    long long bound = opts.initial_bound;
    for (std::size_t attempt = 0; attempt <= opts.max_retries; ++attempt) {
        RatVec shift(t.ambient_dim);
        std::uniform_int_distribution<long long> dist(-bound, bound);
        for (auto i : shift_support) {
            if (i >= t.ambient_dim) throw PreconditionError("shift support index out of range");
            shift[i] = Rat(static_cast<long>(dist(rng)));
        }
        auto r = opts.search == IntersectSearch::Circuits ? intersect_at_shift_circuits(t, w_dir, shift, opts.node_budget)
                                                          : intersect_at_shift(t, w_dir, shift, opts.node_budget);
        if (r) {
            r->retries_used = attempt;
            return *r;
        }
        bound *= 2;
    }
    throw Error("stable intersection: retries exhausted without a generic shift");
}

std::size_t positive_point_count(const IntersectionReport& report) {
    std::size_t c = 0;
    for (const auto& p : report.points)
        if (p.positive) ++c;
    return c;
}

}  // namespace troproot
