#include "troproot/vsys.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <exception>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "troproot/matroid.hpp"
#include "troproot/tropfan.hpp"

namespace troproot {

using nlohmann::json;

// ---------------------------------------------------------------- helpers

namespace {

json vec_json(const RatVec& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

json int_json(const Int& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

json int_matrix_json(const IntMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

json rat_matrix_json(const RatMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i)));
    return out;
}

json pattern_json(const SupportPattern& p) {
    json out = json::array();
    for (const auto& row : p) {
        json idx = json::array();
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j]) idx.push_back(j);
        out.push_back(idx);
    }
    return out;
}

json points_json(const IntersectionReport& rep) {
    json out = json::array();
    for (const auto& p : rep.points)
        out.push_back({{"point", vec_json(p.point)}, {"multiplicity", int_json(p.multiplicity)}, {"positive", p.positive}});
    return out;
}

Rat random_positive(std::mt19937_64& rng, long hi) {
    std::uniform_int_distribution<long> d(1, hi);
    return Rat(d(rng));
}

RatVec random_x0(std::mt19937_64& rng, std::size_t n, bool positive) {
    std::uniform_int_distribution<long> num(positive ? 1 : -100, 100), den(1, 100);
    RatVec x(n);
    for (auto& v : x) {
        long p = 0;
        while (p == 0) p = num(rng);
        v = Rat(p, den(rng));
        v.canonicalize();
    }
    return x;
}

Int random_big(std::mt19937_64& rng) {
    Int v = Int(static_cast<unsigned long>(rng() >> 2)) + 1;
    if (rng() & 1) v = -v;
    return v;
}

RatMatrix row_basis(const RatMatrix& a) {
    RatMatrix r = a;
    auto piv = rref(r);
    RatMatrix out(0, a.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) out.append_row(r.row(i));
    return out;
}

std::vector<std::size_t> iota_vec(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Int binomial(std::size_t n, std::size_t k) {
    Int out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

IntersectOptions intersect_opts(const VsysOptions& opts) {
    IntersectOptions io;
    io.max_retries = opts.max_retries;
    io.node_budget = opts.node_budget;
    io.search = opts.search;
    return io;
}

Rat parse_entry(const json& e, const char* what) {
    if (e.is_string()) return parse_rat(e.get<std::string>());
    if (e.is_number_integer()) return Rat(static_cast<long>(e.get<long long>()));
    if (e.is_number_float()) {
        double v = e.get<double>();
        if (v == static_cast<double>(static_cast<long long>(v))) return Rat(static_cast<long>(v));
        throw ParseError(std::string(what) + ": non-integer float entries must be written as strings");
    }
    throw ParseError(std::string(what) + ": entries must be numbers or strings");
}

std::vector<std::vector<Rat>> parse_rows(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be a list of rows");
    std::vector<std::vector<Rat>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw ParseError(std::string(what) + " must be a list of rows");
        std::vector<Rat> row;
        for (const auto& e : r) row.push_back(parse_entry(e, what));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(std::string(what) + ": rows have different lengths");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::string to_string(CountKind k) {
    switch (k) {
        case CountKind::Grc: return "grc";
        case CountKind::PositiveLower: return "positive_lower";
        case CountKind::ToricUpper: return "toric_upper";
        case CountKind::ToricLower: return "toric_lower";
        case CountKind::GenericDegree: return "generic_degree";
    }
    return "?";
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::RankZero: return "rank_zero";
        case Strategy::Stable: return "stable";
        case Strategy::Cotransversal: return "cotransversal";
        case Strategy::PurelyVertical: return "purely_vertical";
        case Strategy::Toric: return "toric";
    }
    return "?";
}

// ---------------------------------------------------------------- system

void VerticalSystem::validate() const {
    std::size_t nn = n(), ss = s(), dd = d(), mm = m();
    if (mm == 0) throw PreconditionError("system has no monomial columns");
    if (mbar.cols() != mm) throw PreconditionError("Mbar must have as many columns as Cbar");
    if (dd > 0 && l.cols() != nn) throw PreconditionError("L must have one column per variable");
    if (nn != ss + dd) throw PreconditionError("system is not square: n != s + d");
    if (rank(cbar) != ss) throw PreconditionError("Cbar must have full row rank");
    if (dd > 0 && rank(l) != dd) throw PreconditionError("L must have full row rank");
    for (std::size_t j = 0; j < mm; ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < ss; ++i) zero = zero && sgn(cbar(i, j)) == 0;
        if (zero) throw PreconditionError("Cbar has a zero column");
    }
}

VerticalSystem parse_system_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("system file must be a JSON object");
    for (const char* key : {"Cbar", "Mbar"})
        if (!j.contains(key)) throw ParseError(std::string("missing key ") + key);
    auto c = parse_rows(j["Cbar"], "Cbar");
    auto mrows = parse_rows(j["Mbar"], "Mbar");
    auto lrows = j.contains("L") ? parse_rows(j["L"], "L") : std::vector<std::vector<Rat>>{};
    VerticalSystem sys;
    std::size_t m = c.empty() ? 0 : c.front().size();
    sys.cbar = RatMatrix::from_rows(c, m);
    sys.mbar = IntMatrix(mrows.size(), mrows.empty() ? 0 : mrows.front().size());
    for (std::size_t i = 0; i < mrows.size(); ++i)
        for (std::size_t k = 0; k < mrows[i].size(); ++k) {
            if (mrows[i][k].get_den() != 1) throw ParseError("Mbar entries must be integers");
            sys.mbar(i, k) = mrows[i][k].get_num();
        }
    sys.l = RatMatrix::from_rows(lrows, lrows.empty() ? sys.mbar.rows() : lrows.front().size());
    if (lrows.empty()) sys.l = RatMatrix(0, sys.mbar.rows());
    try {
        if (j.contains("varnames")) sys.varnames = j["varnames"].get<std::vector<std::string>>();
        if (j.contains("paramnames")) sys.paramnames = j["paramnames"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("names must be lists of strings: ") + e.what());
    }
    if (sys.cbar.rows() == 0) throw ParseError("Cbar has no rows");
    if (sys.mbar.cols() != sys.cbar.cols()) throw ParseError("Cbar and Mbar column counts differ");
    if (sys.l.rows() > 0 && sys.l.cols() != sys.mbar.rows()) throw ParseError("L column count differs from n");
    return sys;
}

json system_to_json(const VerticalSystem& sys) {
    json out;
    out["Cbar"] = rat_matrix_json(sys.cbar);
    out["Mbar"] = int_matrix_json(sys.mbar);
    out["L"] = rat_matrix_json(sys.l);
    out["varnames"] = sys.varnames;
    out["paramnames"] = sys.paramnames;
    return out;
}

// ---------------------------------------------------------------- minimal presentation

RatMatrix MinimalPresentation::coefficients(const RatMatrix& cbar, const RatVec& a) const {
    RatMatrix c(cbar.rows(), r());
    for (std::size_t k = 0; k < r(); ++k)
        for (auto j : groups[k])
            for (std::size_t i = 0; i < cbar.rows(); ++i) c(i, k) += a[j] * cbar(i, j);
    return c;
}

MinimalPresentation to_minimal(const VerticalSystem& sys) {
    std::map<IntVec, std::size_t> seen;
    MinimalPresentation p;
    std::vector<IntVec> cols;
    for (std::size_t j = 0; j < sys.mbar.cols(); ++j) {
        IntVec c = sys.mbar.col(j);
        auto it = seen.find(c);
        if (it == seen.end()) {
            seen[c] = cols.size();
            cols.push_back(c);
            p.groups.push_back({j});
        } else {
            p.groups[it->second].push_back(j);
        }
    }
    p.m = IntMatrix(sys.mbar.rows(), cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t i = 0; i < sys.mbar.rows(); ++i) p.m(i, k) = cols[k][i];
    return p;
}

MinimalPresentation separated_presentation(const VerticalSystem& sys) {
    MinimalPresentation p;
    p.m = sys.mbar;
    for (std::size_t j = 0; j < sys.m(); ++j) p.groups.push_back({j});
    return p;
}

namespace {

MinimalPresentation presentation_for(const VerticalSystem& sys, const VsysOptions& opts) {
    return opts.separate_parameters ? separated_presentation(sys) : to_minimal(sys);
}

// Whether the minor of C on columns ks is a nonzero polynomial in a.
// Its coefficients are the minors of Cbar on transversals of the groups.
bool minor_generically_nonzero(const RatMatrix& cbar, const MinimalPresentation& pres,
                               const std::vector<std::size_t>& ks, std::size_t& budget) {
    std::size_t s = ks.size();
    std::vector<std::size_t> pick(s, 0);
    while (true) {
        if (budget == 0) throw BudgetExceeded("minor budget exhausted while certifying parameters");
        --budget;
        RatMatrix sub(cbar.rows(), s);
        for (std::size_t c = 0; c < s; ++c)
            for (std::size_t i = 0; i < cbar.rows(); ++i) sub(i, c) = cbar(i, pres.groups[ks[c]][pick[c]]);
        if (sgn(determinant(sub)) != 0) return true;
        std::size_t c = 0;
        while (c < s && ++pick[c] == pres.groups[ks[c]].size()) pick[c++] = 0;
        if (c == s) return false;
    }
}

bool certify_a_budget(const RatMatrix& cbar, const MinimalPresentation& pres, const RatVec& a, std::size_t budget) {
    std::size_t s = cbar.rows(), r = pres.r();
    if (r < s) return true;
    if (binomial(r, s) > Int(static_cast<unsigned long>(budget)))
        throw BudgetExceeded("too many maximal minors to certify parameters");
    RatMatrix c = pres.coefficients(cbar, a);
    bool ok = true;
    for_each_subset(r, s, [&](const std::vector<std::size_t>& ks) {
        if (sgn(determinant(c.select_cols(ks))) != 0) return true;
        if (minor_generically_nonzero(cbar, pres, ks, budget)) ok = false;
        return ok;
    });
    return ok;
}

// All maximal minors of C vanish identically, i.e. C has generic rank below s.
bool generically_rank_deficient(const RatMatrix& cbar, const MinimalPresentation& pres, std::mt19937_64& rng,
                                std::size_t budget) {
    std::size_t s = cbar.rows(), r = pres.r();
    if (r < s) return true;
    RatVec a(cbar.cols());
    for (auto& x : a) x = random_positive(rng, 1000000);
    if (rank(pres.coefficients(cbar, a)) == s) return false;
    bool deficient = true;
    for_each_subset(r, s, [&](const std::vector<std::size_t>& ks) {
        if (minor_generically_nonzero(cbar, pres, ks, budget)) deficient = false;
        return deficient;
    });
    return deficient;
}

RatVec choose_a(const VerticalSystem& sys, const MinimalPresentation& pres, std::mt19937_64& rng, bool ones_first,
                const VsysOptions& opts, std::size_t& redraws) {
    RatVec a(sys.m(), Rat(1));
    if (!ones_first)
        for (auto& x : a) x = random_positive(rng, 1000000);
    for (std::size_t t = 0; t <= opts.certify_attempts; ++t) {
        if (certify_a_budget(sys.cbar, pres, a, opts.minor_budget)) return a;
        ++redraws;
        for (auto& x : a) x = random_positive(rng, 1000000);
    }
    throw BudgetExceeded("could not certify generic parameters a");
}

std::pair<RatVec, RatVec> choose_b(const RatMatrix& l, std::mt19937_64& rng, bool positive, const VsysOptions& opts,
                                   std::size_t& redraws) {
    if (l.rows() == 0) return {};
    for (std::size_t t = 0; t <= opts.certify_attempts; ++t) {
        RatVec x0 = random_x0(rng, l.cols(), positive);
        RatVec b = mul(l, x0);
        if (certify_generic_b(l, b)) return {b, x0};
        ++redraws;
    }
    throw BudgetExceeded("could not certify generic constants b");
}

Reembedding assemble(const VerticalSystem& sys, const MinimalPresentation& pres, const RatVec& a,
                     const RatVec& b, const RatVec& x0) {
    std::size_t n = sys.n(), s = sys.s(), d = sys.d(), r = pres.r();
    Reembedding re;
    re.r = r;
    re.a_used = a;
    re.b_used = b;
    re.x0 = x0;
    re.block = RatMatrix(n, r + n + (d > 0 ? 1 : 0));
    RatMatrix c = pres.coefficients(sys.cbar, a);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t k = 0; k < r; ++k) re.block(i, k) = c(i, k);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) re.block(s + i, r + j) = sys.l(i, j);
        re.block(s + i, r + n) = -b[i];
    }
    re.w_dir = IntMatrix(n, r + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < r; ++k) re.w_dir(i, k) = pres.m(i, k);
        re.w_dir(i, r + i) = 1;
    }
    return re;
}

json reembedding_json(const Reembedding& re) {
    return {{"a", vec_json(re.a_used)},
            {"b", vec_json(re.b_used)},
            {"x0", vec_json(re.x0)},
            {"a_redraws", re.a_redraws},
            {"b_redraws", re.b_redraws},
            {"coefficients_certified", true},
            {"b_certified", !re.b_used.empty()}};
}

RootCountReport zero_report(Strategy strat, CountKind kind, const std::string& reason) {
    RootCountReport out;
    out.count = 0;
    out.kind = kind;
    out.strategy = strat;
    out.certificate["reason"] = reason;
    return out;
}

}  // namespace

bool certify_generic_a(const RatMatrix& cbar, const MinimalPresentation& pres, const RatVec& a) {
    return certify_a_budget(cbar, pres, a, VsysOptions{}.minor_budget);
}

Reembedding build_reembedding(const VerticalSystem& sys, std::mt19937_64& rng, bool positive,
                              const VsysOptions& opts) {
    sys.validate();
    auto pres = presentation_for(sys, opts);
    Reembedding re;
    std::size_t ar = 0, br = 0;
    RatVec a = choose_a(sys, pres, rng, true, opts, ar);
    auto [b, x0] = choose_b(sys.l, rng, positive, opts, br);
    re = assemble(sys, pres, a, b, x0);
    re.a_redraws = ar;
    re.b_redraws = br;
    return re;
}

// ---------------------------------------------------------------- rank condition

namespace {

using Mono = std::vector<unsigned char>;
using Poly = std::map<Mono, Rat>;

}  // namespace

RankZero rank_zero_test(const VerticalSystem& sys, std::mt19937_64& rng, std::size_t samples) {
    sys.validate();
    std::size_t n = sys.n(), s = sys.s(), d = sys.d(), m = sys.m();
    RatMatrix kern = kernel_basis(sys.cbar);
    std::size_t q = kern.cols();
    if (q == 0) return RankZero::Zero;
    std::uniform_int_distribution<long> ud(-50, 50);
    for (std::size_t t = 0; t < samples; ++t) {
        RatVec u(q), h(n);
        for (auto& x : u) x = ud(rng);
        for (auto& x : h) {
            long v = 0;
            while (v == 0) v = ud(rng);
            x = v;
        }
        RatVec w = mul(kern, u);
        RatMatrix st(n, n);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                Rat acc = 0;
                for (std::size_t j = 0; j < m; ++j)
                    if (sgn(w[j]) != 0 && sys.mbar(k, j) != 0) acc += sys.cbar(i, j) * w[j] * Rat(sys.mbar(k, j));
                st(i, k) = acc * h[k];
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < n; ++k) st(s + i, k) = sys.l(i, k);
        if (rank(st) == n) return RankZero::Nonzero;
    }
    if (n > 8) return RankZero::Unknown;

    // g[i][k][t] = sum_j Cbar_ij K_jt Mbar_kj, so T(u)_ik = sum_t u_t g[i][k][t].
    std::vector<std::vector<RatVec>> g(s, std::vector<RatVec>(n, RatVec(q)));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t t = 0; t < q; ++t) {
                Rat acc = 0;
                for (std::size_t j = 0; j < m; ++j)
                    if (sys.mbar(k, j) != 0) acc += sys.cbar(i, j) * kern(j, t) * Rat(sys.mbar(k, j));
                g[i][k][t] = acc;
            }
    const std::size_t term_cap = 2000000;
    bool unknown = false, nonzero = false;
    for_each_subset(n, s, [&](const std::vector<std::size_t>& ks) {
        if (d > 0) {
            std::vector<std::size_t> rest;
            for (std::size_t k = 0, p = 0; k < n; ++k) {
                if (p < ks.size() && ks[p] == k)
                    ++p;
                else
                    rest.push_back(k);
            }
            if (sgn(determinant(sys.l.select_cols(rest))) == 0) return true;
        }
        // determinant of T(u)[:, ks] by expansion over column subsets
        std::map<unsigned, Poly> layer;
        layer[0][Mono(q, 0)] = 1;
        std::size_t terms = 0;
        for (std::size_t i = 0; i < s && !unknown; ++i) {
            std::map<unsigned, Poly> next;
            for (const auto& [mask, poly] : layer) {
                for (std::size_t c = 0; c < s; ++c) {
                    if (mask & (1u << c)) continue;
                    int above = 0;
                    for (std::size_t c2 = c + 1; c2 < s; ++c2) above += (mask >> c2) & 1;
                    Poly& dst = next[mask | (1u << c)];
                    const RatVec& lin = g[i][ks[c]];
                    for (std::size_t t = 0; t < q; ++t) {
                        if (sgn(lin[t]) == 0) continue;
                        Rat f = (above % 2) ? Rat(-lin[t]) : lin[t];
                        for (const auto& [mono, coef] : poly) {
                            Mono mm = mono;
                            ++mm[t];
                            Rat& slot = dst[mm];
                            slot += coef * f;
                            if (sgn(slot) == 0) dst.erase(mm);
                        }
                    }
                    terms += dst.size();
                    if (terms > term_cap) {
                        unknown = true;
                        break;
                    }
                }
                if (unknown) break;
            }
            layer.swap(next);
        }
        if (unknown) return false;
        auto it = layer.find((s >= 32) ? 0u : ((1u << s) - 1));
        if (it != layer.end() && !it->second.empty()) nonzero = true;
        return !nonzero;
    });
    if (nonzero) return RankZero::Nonzero;
    if (unknown) return RankZero::Unknown;
    return RankZero::Zero;
}

bool feasibility_positive(const VerticalSystem& sys) {
    std::size_t m = sys.m();
    RatMatrix neg(m, m);
    for (std::size_t j = 0; j < m; ++j) neg(j, j) = -1;
    return lp_feasible_point(sys.cbar, RatVec(sys.s()), neg, RatVec(m, Rat(-1))).has_value();
}

// ---------------------------------------------------------------- stable intersection path

RootCountReport grc_stable(const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& opts) {
    sys.validate();
    auto pres = presentation_for(sys, opts);
    if (generically_rank_deficient(sys.cbar, pres, rng, opts.minor_budget))
        return zero_report(Strategy::Stable, CountKind::Grc, "coefficient matrix has generic rank below s");
    std::size_t ar = 0, br = 0;
    RatVec a = choose_a(sys, pres, rng, true, opts, ar);
    auto [b, x0] = choose_b(sys.l, rng, true, opts, br);
    Reembedding re = assemble(sys, pres, a, b, x0);
    re.a_redraws = ar;
    re.b_redraws = br;
    FanOptions fo;
    fo.materialize = false;
    fo.flag_budget = opts.flag_budget;
    TropLinearSpace t = trop_linear_space(re.block, sys.d() > 0, fo);
    RootCountReport out;
    out.kind = CountKind::Grc;
    out.strategy = Strategy::Stable;
    out.certificate = reembedding_json(re);
    out.certificate["r"] = re.r;
    out.certificate["presentation"] = opts.separate_parameters ? "separated" : "minimal";
    if (t.is_empty) {
        out.count = 0;
        out.certificate["reason"] = "tropical linear space is empty";
        return out;
    }
    auto rep = stable_intersect(t, re.w_dir, iota_vec(re.r), rng, intersect_opts(opts));
    out.count = rep.total_degree;
    out.certificate["shift_h"] = vec_json(rep.shift_h);
    out.certificate["points"] = points_json(rep);
    out.certificate["shift_retries"] = rep.retries_used;
    out.certificate["search_nodes"] = rep.nodes_visited;
    return out;
}

RootCountReport positive_lower_bound(const VerticalSystem& sys, std::size_t attempts, std::mt19937_64& rng,
                                     const VsysOptions& opts) {
    sys.validate();
    RootCountReport out;
    out.kind = CountKind::PositiveLower;
    out.strategy = Strategy::Stable;
    out.count = 0;
    out.certificate["attempts"] = attempts;
    out.certificate["presentation"] = opts.separate_parameters ? "separated" : "minimal";
    if (attempts == 0) return out;
    auto pres = presentation_for(sys, opts);
    if (generically_rank_deficient(sys.cbar, pres, rng, opts.minor_budget)) {
        out.certificate["reason"] = "coefficient matrix has generic rank below s";
        return out;
    }
    std::vector<std::uint64_t> seeds(attempts);
    for (auto& s : seeds) s = rng();

    struct Attempt {
        std::size_t positive = 0;
        Int total = 0;
        json witness;
        std::exception_ptr error;
    };
    std::vector<Attempt> results(attempts);
    auto run = [&](std::size_t i) {
        try {
            std::mt19937_64 local(seeds[i]);
            std::size_t ar = 0, br = 0;
            RatVec a = choose_a(sys, pres, local, i == 0, opts, ar);
            auto [b, x0] = choose_b(sys.l, local, true, opts, br);
            Reembedding re = assemble(sys, pres, a, b, x0);
            re.a_redraws = ar;
            re.b_redraws = br;
            FanOptions fo;
            fo.materialize = false;
            fo.flag_budget = opts.flag_budget;
            TropLinearSpace t = trop_linear_space(re.block, sys.d() > 0, fo);
            json w = reembedding_json(re);
            w["seed"] = seeds[i];
            w["attempt"] = i;
            if (t.is_empty) {
                results[i].witness = w;
                return;
            }
            auto rep = stable_intersect(t, re.w_dir, iota_vec(re.r), local, intersect_opts(opts));
            results[i].positive = positive_point_count(rep);
            results[i].total = rep.total_degree;
            w["shift_h"] = vec_json(rep.shift_h);
            w["points"] = points_json(rep);
            results[i].witness = w;
        } catch (...) {
            results[i].error = std::current_exception();
        }
    };
    unsigned workers = std::max(1u, std::min<unsigned>(worker_threads(), static_cast<unsigned>(attempts)));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < attempts; i = next++) run(i);
        });
    for (auto& th : pool) th.join();
    for (const auto& r : results)
        if (r.error) std::rethrow_exception(r.error);

    std::size_t best = 0;
    json counts = json::array();
    for (std::size_t i = 0; i < attempts; ++i) {
        counts.push_back(results[i].positive);
        if (results[i].positive > results[best].positive) best = i;
    }
    out.count = static_cast<unsigned long>(results[best].positive);
    out.certificate["per_attempt"] = counts;
    out.certificate["witness"] = results[best].witness;
    out.certificate["grc_at_witness"] = int_json(results[best].total);
    return out;
}

RootCountReport grc_purely_vertical(const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& opts) {
    if (sys.d() != 0) throw PreconditionError("purely vertical path needs a system without linear part");
    sys.validate();
    auto pres = to_minimal(sys);
    std::size_t n = sys.n();
    if (rank(pres.m) < n)
        return zero_report(Strategy::PurelyVertical, CountKind::Grc, "exponent matrix has rank below n");
    if (generically_rank_deficient(sys.cbar, pres, rng, opts.minor_budget))
        return zero_report(Strategy::PurelyVertical, CountKind::Grc, "coefficient matrix has generic rank below s");
    std::size_t ar = 0;
    RatVec a = choose_a(sys, pres, rng, true, opts, ar);
    RatMatrix c = pres.coefficients(sys.cbar, a);
    FanOptions fo;
    fo.materialize = false;
    fo.flag_budget = opts.flag_budget;
    TropLinearSpace t = trop_linear_space(c, false, fo);
    RootCountReport out;
    out.kind = CountKind::Grc;
    out.strategy = Strategy::PurelyVertical;
    out.certificate["a"] = vec_json(a);
    out.certificate["a_redraws"] = ar;
    out.certificate["coefficients_certified"] = true;
    out.certificate["r"] = pres.r();
    if (t.is_empty) {
        out.count = 0;
        out.certificate["reason"] = "tropical linear space is empty";
        return out;
    }
    auto rep = stable_intersect(t, pres.m, iota_vec(pres.r()), rng, intersect_opts(opts));
    Int deg = monomial_map_degree(pres.m);
    out.count = rep.total_degree * deg;
    out.certificate["monomial_map_degree"] = int_json(deg);
    out.certificate["intersection_degree"] = int_json(rep.total_degree);
    out.certificate["shift_h"] = vec_json(rep.shift_h);
    out.certificate["points"] = points_json(rep);
    return out;
}

RootCountReport generic_degree(const RatMatrix& cbar, const IntMatrix& mbar, std::mt19937_64& rng,
                               const VsysOptions& opts) {
    std::size_t s = cbar.rows(), n = mbar.rows();
    if (s > n) throw PreconditionError("generic degree needs at most n equations");
    VerticalSystem sys;
    sys.cbar = cbar;
    sys.mbar = mbar;
    sys.l = RatMatrix(0, n);
    RootCountReport out;
    if (s == n) {
        out = auto_root_count(sys, rng, opts);
        out.kind = CountKind::GenericDegree;
        return out;
    }
    std::size_t d = n - s;
    std::uniform_int_distribution<long> ent(-9, 9);
    RatMatrix l(d, n);
    std::size_t redraws = 0;
    while (true) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                long v = 0;
                while (v == 0) v = ent(rng);
                l(i, j) = v;
            }
        bool uniform = true;
        for_each_subset(n, d, [&](const std::vector<std::size_t>& js) {
            uniform = sgn(determinant(l.select_cols(js))) != 0;
            return uniform;
        });
        if (uniform) break;
        if (++redraws > opts.certify_attempts) throw BudgetExceeded("could not draw a uniform linear part");
    }
    sys.l = l;
    out = auto_root_count(sys, rng, opts);
    out.kind = CountKind::GenericDegree;
    out.certificate["L"] = rat_matrix_json(l);
    out.certificate["L_uniform_certified"] = true;
    out.certificate["L_redraws"] = redraws;
    return out;
}

// ---------------------------------------------------------------- cotransversal path

bool pattern_realizes(const SupportPattern& p, const RatMatrix& a, std::mt19937_64& rng) {
    RatMatrix base = row_basis(a);
    if (p.size() != base.rows()) return false;
    for (int round = 0; round < 2; ++round) {
        RatMatrix inst(p.size(), a.cols());
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i].size() != a.cols()) throw PreconditionError("pattern has the wrong number of columns");
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (p[i][j]) inst(i, j) = Rat(random_big(rng));
        }
        if (!same_matroid(base, inst)) return false;
    }
    return true;
}

namespace {

std::vector<std::vector<std::size_t>> column_components(const RatMatrix& a) {
    RatMatrix r = a;
    auto piv = rref(r);
    std::size_t n = a.cols();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::vector<bool> is_piv(n, false);
    for (auto p : piv) is_piv[p] = true;
    for (std::size_t e = 0; e < n; ++e) {
        if (is_piv[e]) continue;
        for (std::size_t i = 0; i < piv.size(); ++i)
            if (sgn(r(i, e)) != 0) parent[find(e)] = find(piv[i]);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t e = 0; e < n; ++e) groups[find(e)].push_back(e);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, g] : groups) out.push_back(g);
    std::sort(out.begin(), out.end());
    return out;
}

SupportPattern support_of(const RatMatrix& a) {
    SupportPattern p(a.rows(), std::vector<bool>(a.cols(), false));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) p[i][j] = sgn(a(i, j)) != 0;
    return p;
}

// Pattern for one connected component given by a full row rank matrix.
std::optional<SupportPattern> search_component(const RatMatrix& orig, const RatMatrix& sub, std::mt19937_64& rng,
                                               std::size_t& budget) {
    std::size_t rho = sub.rows(), n = sub.cols();
    auto spend = [&]() {
        if (budget == 0) return false;
        --budget;
        return true;
    };
    // own rows first, then the reduced echelon form
    {
        RatMatrix nz(0, n);
        for (std::size_t i = 0; i < orig.rows(); ++i) {
            bool any = false;
            for (std::size_t j = 0; j < n; ++j) any = any || sgn(orig(i, j)) != 0;
            if (any) nz.append_row(orig.row(i));
        }
        if (nz.rows() == rho) {
            if (!spend()) return std::nullopt;
            auto p = support_of(nz);
            if (pattern_realizes(p, sub, rng)) return p;
        }
        if (!spend()) return std::nullopt;
        auto p = support_of(sub);
        if (pattern_realizes(p, sub, rng)) return p;
    }

    // parallel classes
    std::vector<std::size_t> cls(n);
    std::vector<std::size_t> reps;
    std::vector<std::size_t> class_size;
    {
        std::map<RatVec, std::size_t> seen;
        for (std::size_t j = 0; j < n; ++j) {
            RatVec c = sub.col(j);
            Rat lead = 0;
            for (const auto& x : c)
                if (sgn(x) != 0) {
                    lead = x;
                    break;
                }
            for (auto& x : c) x /= lead;
            auto it = seen.find(c);
            if (it == seen.end()) {
                cls[j] = reps.size();
                seen[c] = reps.size();
                reps.push_back(j);
                class_size.push_back(1);
            } else {
                cls[j] = it->second;
                ++class_size[it->second];
            }
        }
    }
    std::size_t k = reps.size();
    if (k > 63) return std::nullopt;
    using Mask = std::uint64_t;
    std::unordered_map<Mask, std::size_t> rank_memo;
    auto rank_of = [&](Mask s) {
        auto it = rank_memo.find(s);
        if (it != rank_memo.end()) return it->second;
        std::vector<std::size_t> cols;
        for (std::size_t e = 0; e < k; ++e)
            if (s >> e & 1) cols.push_back(reps[e]);
        std::size_t rk = cols.empty() ? 0 : rank(sub.select_cols(cols));
        rank_memo[s] = rk;
        return rk;
    };
    auto closure = [&](Mask s) {
        std::size_t rk = rank_of(s);
        Mask out = s;
        for (std::size_t e = 0; e < k; ++e)
            if (!(s >> e & 1) && rank_of(s | (Mask(1) << e)) == rk) out |= Mask(1) << e;
        return out;
    };
    std::vector<std::pair<std::size_t, Mask>> flats;  // (rank, flat)
    {
        std::set<Mask> seen;
        std::vector<Mask> frontier{closure(0)};
        seen.insert(frontier[0]);
        const std::size_t flat_cap = 20000;
        while (!frontier.empty()) {
            std::vector<Mask> nxt;
            for (Mask f : frontier) {
                std::size_t rk = rank_of(f);
                if (rk >= rho) continue;
                flats.emplace_back(rk, f);
                if (rk + 1 >= rho) continue;
                for (std::size_t e = 0; e < k; ++e) {
                    if (f >> e & 1) continue;
                    Mask g = closure(f | (Mask(1) << e));
                    if (seen.insert(g).second) nxt.push_back(g);
                    if (seen.size() > flat_cap) return std::nullopt;
                }
            }
            frontier.swap(nxt);
        }
    }
    Mask all = (k == 64) ? ~Mask(0) : ((Mask(1) << k) - 1);
    std::sort(flats.begin(), flats.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    std::vector<Mask> cand;
    for (const auto& [rk, f] : flats) cand.push_back(all & ~f);

    Mask multi = 0;
    for (std::size_t e = 0; e < k; ++e)
        if (class_size[e] > 1) multi |= Mask(1) << e;

    std::vector<std::size_t> pick(rho, 0);
    std::optional<SupportPattern> found;
    bool exhausted = false;
    std::function<void(std::size_t, std::size_t, Mask, Mask)> rec = [&](std::size_t depth, std::size_t from,
                                                                         Mask covered, Mask twice) {
        if (found || exhausted) return;
        if (depth == rho) {
            if (covered != all || (twice & multi) != 0) return;
            if (!spend()) {
                exhausted = true;
                return;
            }
            SupportPattern p(rho, std::vector<bool>(n, false));
            for (std::size_t i = 0; i < rho; ++i)
                for (std::size_t j = 0; j < n; ++j) p[i][j] = cand[pick[i]] >> cls[j] & 1;
            if (pattern_realizes(p, sub, rng)) found = p;
            return;
        }
        for (std::size_t c = from; c < cand.size() && !found && !exhausted; ++c) {
            Mask nt = twice | (covered & cand[c]);
            if ((nt & multi) != 0) continue;
            pick[depth] = c;
            rec(depth + 1, c, covered | cand[c], nt);
        }
    };
    rec(0, 0, 0, 0);
    return found;
}

}  // namespace

std::optional<SupportPattern> cotransversal_presentation(const RatMatrix& a, std::mt19937_64& rng,
                                                         std::size_t budget) {
    std::size_t rho = rank(a);
    if (rho != a.rows()) throw PreconditionError("cotransversal test needs a full row rank matrix");
    std::size_t n = a.cols();
    SupportPattern out;
    for (const auto& comp : column_components(a)) {
        RatMatrix orig = a.select_cols(comp);
        RatMatrix sub = row_basis(orig);
        if (sub.rows() == 0) continue;  // loop
        auto p = search_component(orig, sub, rng, budget);
        if (!p) return std::nullopt;
        for (const auto& row : *p) {
            std::vector<bool> full(n, false);
            for (std::size_t j = 0; j < comp.size(); ++j) full[comp[j]] = row[j];
            out.push_back(full);
        }
    }
    return out;
}

std::vector<LatticePolytope> cotransversal_polytopes(const IntMatrix& mbar, const SupportPattern& p,
                                                     const SupportPattern& q) {
    std::size_t n = mbar.rows();
    std::vector<LatticePolytope> out;
    for (const auto& row : p) {
        if (row.size() != mbar.cols()) throw PreconditionError("P pattern has the wrong number of columns");
        std::vector<IntVec> pts;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j]) pts.push_back(mbar.col(j));
        if (pts.empty()) throw PreconditionError("P pattern has an empty row");
        out.emplace_back(n, pts);
    }
    for (const auto& row : q) {
        if (row.size() != n + 1) throw PreconditionError("Q pattern has the wrong number of columns");
        std::vector<IntVec> pts;
        for (std::size_t j = 0; j < n; ++j)
            if (row[j]) {
                IntVec e(n);
                e[j] = 1;
                pts.push_back(e);
            }
        if (row[n]) pts.push_back(IntVec(n));
        if (pts.empty()) throw PreconditionError("Q pattern has an empty row");
        out.emplace_back(n, pts);
    }
    return out;
}

RootCountReport grc_cotransversal(const VerticalSystem& sys, const SupportPattern& p, const SupportPattern& q,
                                  std::mt19937_64& rng, const VsysOptions& opts) {
    sys.validate();
    if (p.size() != sys.s() || q.size() != sys.d())
        throw PreconditionError("pattern row counts do not match the system");
    auto ps = cotransversal_polytopes(sys.mbar, p, q);
    MixedVolumeOptions mo;
    mo.node_budget = opts.mv_node_budget;
    mo.max_retries = opts.max_retries;
    auto mv = mixed_volume_cells(ps, rng, mo);
    RootCountReport out;
    out.count = mv.volume;
    out.kind = CountKind::Grc;
    out.strategy = Strategy::Cotransversal;
    out.certificate["P_support"] = pattern_json(p);
    out.certificate["Q_support"] = pattern_json(q);
    out.certificate["lifting"] = mv.lifting;
    out.certificate["mixed_cells"] = mv.cells.size();
    out.certificate["lifting_retries"] = mv.retries_used;
    return out;
}

// ---------------------------------------------------------------- toric bounds

namespace {

RatMatrix linear_block(const RatMatrix& l, const RatVec& b) {
    RatMatrix out(l.rows(), l.cols() + 1);
    for (std::size_t i = 0; i < l.rows(); ++i) {
        for (std::size_t j = 0; j < l.cols(); ++j) out(i, j) = l(i, j);
        out(i, l.cols()) = -b[i];
    }
    return out;
}

void check_toric_input(const VerticalSystem& sys, const IntMatrix& a_mat) {
    sys.validate();
    if (sys.d() == 0) throw PreconditionError("toric bounds need a linear part");
    if (a_mat.rows() != sys.d() || a_mat.cols() != sys.n())
        throw PreconditionError("exponent matrix must be d x n");
    if (rank(a_mat) != sys.d()) throw PreconditionError("exponent matrix must have rank d");
}

}  // namespace

std::optional<std::size_t> toric_lower_at(const VerticalSystem& sys, const IntMatrix& a_mat, const RatVec& b,
                                          const RatVec& h) {
    check_toric_input(sys, a_mat);
    if (b.size() != sys.d() || h.size() != sys.n()) throw PreconditionError("witness has the wrong length");
    TropLinearSpace t = trop_linear_space(linear_block(sys.l, b), true, FanOptions{false, kDefaultFlagBudget});
    if (t.is_empty) return 0;
    auto rep = intersect_at_shift(t, a_mat, h);
    if (!rep) return std::nullopt;
    return positive_point_count(*rep);
}

ToricBounds toric_bounds(const VerticalSystem& sys, const IntMatrix& a_mat, std::size_t attempts,
                         std::mt19937_64& rng, const VsysOptions& opts) {
    check_toric_input(sys, a_mat);
    if (!feasibility_positive(sys)) throw PreconditionError("the positive part of the vertical variety is empty");
    std::size_t n = sys.n();
    FanOptions fo;
    fo.materialize = false;
    fo.flag_budget = opts.flag_budget;
    Int deg = monomial_map_degree(a_mat);

    ToricBounds out;
    out.upper.kind = CountKind::ToricUpper;
    out.upper.strategy = Strategy::Toric;
    out.lower.kind = CountKind::ToricLower;
    out.lower.strategy = Strategy::Toric;

    std::size_t br = 0;
    auto [b, x0] = choose_b(sys.l, rng, true, opts, br);
    RatMatrix lb = linear_block(sys.l, b);
    TropLinearSpace t = trop_linear_space(lb, true, fo);
    auto rep = stable_intersect(t, a_mat, iota_vec(n), rng, intersect_opts(opts));
    out.upper.count = rep.total_degree;
    out.upper.certificate["b"] = vec_json(b);
    out.upper.certificate["x0"] = vec_json(x0);
    out.upper.certificate["b_certified"] = true;
    out.upper.certificate["shift_h"] = vec_json(rep.shift_h);
    out.upper.certificate["points"] = points_json(rep);
    out.upper.certificate["monomial_map_degree"] = int_json(deg);

    auto q = cotransversal_presentation(lb, rng, opts.cotransversal_budget);
    if (q) {
        std::vector<LatticePolytope> ps;
        for (const auto& row : *q) {
            std::vector<IntVec> pts;
            for (std::size_t j = 0; j < n; ++j)
                if (row[j]) pts.push_back(a_mat.col(j));
            if (row[n]) pts.push_back(IntVec(sys.d()));
            ps.emplace_back(sys.d(), pts);
        }
        MixedVolumeOptions mo;
        mo.node_budget = opts.mv_node_budget;
        Int mv = mixed_volume_cells(ps, rng, mo).volume;
        if (mv % deg != 0 || mv / deg != rep.total_degree)
            throw Error("mixed volume bound " + mv.get_str() + "/" + deg.get_str() +
                        " disagrees with the stable intersection bound");
        out.upper.certificate["Q_support"] = pattern_json(*q);
        out.upper.certificate["mixed_volume"] = int_json(mv);
    }
    bool uniform = true;
    for_each_subset(lb.cols(), lb.rows(), [&](const std::vector<std::size_t>& js) {
        uniform = sgn(determinant(lb.select_cols(js))) != 0;
        return uniform;
    });
    if (uniform) {
        std::vector<IntVec> pts;
        for (std::size_t j = 0; j < n; ++j) pts.push_back(a_mat.col(j));
        pts.push_back(IntVec(sys.d()));
        Int vol = normalized_volume(LatticePolytope(sys.d(), pts));
        if (vol % deg != 0 || vol / deg != rep.total_degree)
            throw Error("volume bound disagrees with the stable intersection bound");
        out.upper.certificate["normalized_volume"] = int_json(vol);
    }

    std::size_t best = positive_point_count(rep);
    json witness = {{"b", vec_json(b)}, {"x0", vec_json(x0)}, {"shift_h", vec_json(rep.shift_h)}, {"attempt", 0}};
    json per = json::array({best});
    for (std::size_t i = 1; i < attempts; ++i) {
        auto [bi, xi] = choose_b(sys.l, rng, true, opts, br);
        TropLinearSpace ti = trop_linear_space(linear_block(sys.l, bi), true, fo);
        auto ri = stable_intersect(ti, a_mat, iota_vec(n), rng, intersect_opts(opts));
        std::size_t c = positive_point_count(ri);
        per.push_back(c);
        if (c > best) {
            best = c;
            witness = {{"b", vec_json(bi)}, {"x0", vec_json(xi)}, {"shift_h", vec_json(ri.shift_h)}, {"attempt", i}};
        }
    }
    out.lower.count = static_cast<unsigned long>(attempts == 0 ? 0 : best);
    out.lower.certificate["attempts"] = attempts;
    out.lower.certificate["per_attempt"] = per;
    out.lower.certificate["witness"] = witness;
    return out;
}

// ---------------------------------------------------------------- constant terms

RootCountReport grc_with_constant_terms(const RatMatrix& cbar, const IntMatrix& mbar, const RatVec& c,
                                        std::mt19937_64& rng, const VsysOptions& opts) {
    if (c.size() != cbar.rows()) throw PreconditionError("constant vector has the wrong length");
    VerticalSystem sys;
    sys.mbar = mbar;
    sys.l = RatMatrix(0, mbar.rows());
    bool zero = std::all_of(c.begin(), c.end(), [](const Rat& x) { return sgn(x) == 0; });
    if (zero) {
        sys.cbar = cbar;
        return grc_purely_vertical(sys, rng, opts);
    }
    sys.cbar = RatMatrix(cbar.rows(), cbar.cols() + 1);
    sys.mbar = IntMatrix(mbar.rows(), mbar.cols() + 1);
    for (std::size_t i = 0; i < cbar.rows(); ++i) {
        for (std::size_t j = 0; j < cbar.cols(); ++j) sys.cbar(i, j) = cbar(i, j);
        sys.cbar(i, cbar.cols()) = -c[i];
    }
    for (std::size_t i = 0; i < mbar.rows(); ++i)
        for (std::size_t j = 0; j < mbar.cols(); ++j) sys.mbar(i, j) = mbar(i, j);
    auto out = grc_purely_vertical(sys, rng, opts);
    out.certificate["constant_column"] = vec_json(c);
    return out;
}

Int constant_terms_direct(const RatMatrix& cbar, const IntMatrix& mbar, const RatVec& c, std::mt19937_64& rng,
                          const VsysOptions& opts) {
    VerticalSystem sys;
    sys.cbar = cbar;
    sys.mbar = mbar;
    sys.l = RatMatrix(0, mbar.rows());
    sys.validate();
    auto pres = to_minimal(sys);
    // random parameters; this path is a cross-check only
    RatVec a(sys.m());
    for (auto& x : a) x = random_positive(rng, 1000000);
    RatMatrix ca = pres.coefficients(cbar, a);
    RatVec cc = c;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < pres.r(); ++k) {
        bool zero_col = true;
        for (std::size_t i = 0; i < pres.m.rows(); ++i) zero_col = zero_col && pres.m(i, k) == 0;
        if (zero_col) {
            for (std::size_t i = 0; i < cc.size(); ++i) cc[i] -= ca(i, k);
        } else {
            keep.push_back(k);
        }
    }
    IntMatrix m = pres.m.select_cols(keep);
    if (rank(m) < sys.n()) return 0;
    RatMatrix blk = hstack(ca.select_cols(keep), RatMatrix(cbar.rows(), 1));
    for (std::size_t i = 0; i < cc.size(); ++i) blk(i, keep.size()) = -cc[i];
    bool affine = std::any_of(cc.begin(), cc.end(), [](const Rat& x) { return sgn(x) != 0; });
    if (!affine) blk = ca.select_cols(keep);
    TropLinearSpace t = trop_linear_space(blk, affine, FanOptions{false, opts.flag_budget});
    if (t.is_empty) return 0;
    auto rep = stable_intersect(t, m, iota_vec(keep.size()), rng, intersect_opts(opts));
    return rep.total_degree * monomial_map_degree(m);
}

TropLinearSpace reembedded_fan(const VerticalSystem& sys, const RatVec& a, const RatVec& b, const VsysOptions& opts) {
    sys.validate();
    auto pres = presentation_for(sys, opts);
    if (a.size() != sys.m()) throw PreconditionError("parameter vector a has wrong length");
    if (b.size() != sys.d()) throw PreconditionError("constant vector b has wrong length");
    Reembedding re = assemble(sys, pres, a, b, RatVec{});
    FanOptions fo;
    fo.flag_budget = opts.flag_budget;
    return trop_linear_space(re.block, sys.d() > 0, fo);
}

// ---------------------------------------------------------------- dispatch

std::optional<RootCountReport> try_cotransversal(const VerticalSystem& sys, std::mt19937_64& rng,
                                                 const VsysOptions& opts) {
    sys.validate();
    auto p = cotransversal_presentation(sys.cbar, rng, opts.cotransversal_budget);
    if (!p) return std::nullopt;
    if (sys.d() == 0) {
        auto out = grc_cotransversal(sys, *p, SupportPattern{}, rng, opts);
        out.certificate["cotransversal_found"] = true;
        return out;
    }
    std::size_t br = 0;
    auto [b, x0] = choose_b(sys.l, rng, true, opts, br);
    auto q = cotransversal_presentation(linear_block(sys.l, b), rng, opts.cotransversal_budget);
    if (!q) return std::nullopt;
    auto out = grc_cotransversal(sys, *p, *q, rng, opts);
    out.certificate["linear_part"] = {{"b", vec_json(b)}, {"x0", vec_json(x0)}, {"b_certified", true}};
    out.certificate["cotransversal_found"] = true;
    return out;
}

RootCountReport auto_root_count(const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& opts) {
    sys.validate();
    RankZero rz = rank_zero_test(sys, rng);
    std::string rz_name = rz == RankZero::Zero ? "zero" : rz == RankZero::Nonzero ? "nonzero" : "unknown";
    if (rz == RankZero::Zero) {
        auto out = zero_report(Strategy::RankZero, CountKind::Grc, "rank condition fails identically");
        out.certificate["rank_test"] = rz_name;
        return out;
    }
    json path = json::array({"rank_test", "cotransversal_search"});
    auto cot = try_cotransversal(sys, rng, opts);
    RootCountReport out;
    if (cot) {
        out = *cot;
    } else {
        if (sys.d() == 0) {
            out = grc_purely_vertical(sys, rng, opts);
        } else {
            out = grc_stable(sys, rng, opts);
        }
        out.certificate["cotransversal_found"] = false;
    }
    path.push_back(to_string(out.strategy));
    out.certificate["rank_test"] = rz_name;
    out.certificate["path"] = path;
    return out;
}

}  // namespace troproot
