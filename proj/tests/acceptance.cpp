// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "troproot/intersect.hpp"
#include "troproot/matroid.hpp"
#include "troproot/mixedvol.hpp"
#include "troproot/network.hpp"
#include "troproot/report.hpp"
#include "troproot/vsys.hpp"

using namespace troproot;
using namespace troproot::oracle;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.note(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > limit_s) {
        out.ok = false;
        out.note("over time limit of " + std::to_string(static_cast<int>(limit_s)) + " s");
    }
    if (!out.ok) ++failures;
    std::printf("%s %-4s %s [%.2f s] %s\n", out.ok ? "PASS" : "FAIL", id.c_str(), title.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
}

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(TROPROOT_FIXTURE_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

VerticalSystem fixture(const std::string& name) { return parse_system_json(read_fixture(name)); }

IntMatrix exponent_matrix(const std::string& name) {
    auto j = nlohmann::json::parse(read_fixture(name));
    IntMatrix a(j["A"].size(), j["A"][0].size());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) = j["A"][i][k].get<long>();
    return a;
}

SupportPattern rows_to_pattern(std::size_t cols, const std::vector<std::vector<std::size_t>>& rows) {
    SupportPattern p;
    for (const auto& r : rows) {
        std::vector<bool> row(cols, false);
        for (auto j : r) row[j] = true;
        p.push_back(row);
    }
    return p;
}

RatMatrix linear_block(const VerticalSystem& sys, const RatVec& b) {
    RatMatrix out(sys.d(), sys.n() + 1);
    for (std::size_t i = 0; i < sys.d(); ++i) {
        for (std::size_t j = 0; j < sys.n(); ++j) out(i, j) = sys.l(i, j);
        out(i, sys.n()) = -b[i];
    }
    return out;
}

// Newton polytope of each row of Cbar x^Mbar.
std::vector<LatticePolytope> newton_polytopes(const VerticalSystem& sys) {
    std::vector<LatticePolytope> ps;
    for (std::size_t i = 0; i < sys.cbar.rows(); ++i) {
        std::vector<IntVec> pts;
        for (std::size_t j = 0; j < sys.cbar.cols(); ++j) {
            if (sgn(sys.cbar(i, j)) == 0) continue;
            IntVec p(sys.mbar.rows());
            for (std::size_t r = 0; r < sys.mbar.rows(); ++r) p[r] = sys.mbar(r, j).get_si();
            pts.push_back(p);
        }
        ps.emplace_back(sys.mbar.rows(), pts);
    }
    return ps;
}

std::string str(const Int& v) { return v.get_str(); }

TropLinearSpace fig_line() { return trop_linear_space(RatMatrix{{1, 1, -1}}, true); }
IntMatrix antidiagonal() { return IntMatrix{{1, -1}}; }

}  // namespace

int main() {
    criterion("1", "running example generic root count", 180, [](Outcome& o) {
        auto sys = fixture("running.json");
        std::mt19937_64 r1(1), r2(2), r3(3), r4(4);
        auto a = auto_root_count(sys, r1);
        auto s = grc_stable(sys, r2);
        auto c = try_cotransversal(sys, r3);
        o.require(a.count == 3, "auto = " + str(a.count));
        o.require(s.count == 3, "stable = " + str(s.count));
        o.require(c.has_value() && c->count == 3, "cotransversal search");
        // the presentations written out for this example
        auto p = rows_to_pattern(6, {{0, 1, 2, 5}, {2, 3, 4, 5}, {2, 5}});
        auto q = rows_to_pattern(7, {{0, 1, 2, 3, 6}, {0, 4, 6}, {1, 5, 6}});
        RatVec b = mul(sys.l, RatVec{1, 2, 3, 4, 5, 6});
        o.require(certify_generic_b(sys.l, b), "b certified");
        o.require(pattern_realizes(p, sys.cbar, r4) && pattern_realizes(q, linear_block(sys, b), r4),
                  "given patterns realize the matroids");
        auto given = grc_cotransversal(sys, p, q, r4);
        o.require(given.count == 3, "cotransversal with given patterns = " + str(given.count));
        o.note("auto=" + str(a.count) + " (" + to_string(a.strategy) + ") stable=" + str(s.count) +
               " cotransversal=" + (c ? str(c->count) : std::string("none")) + " given=" + str(given.count));
    });

    criterion("2", "generic degree of the running example", 120, [](Outcome& o) {
        auto sys = fixture("running.json");
        std::mt19937_64 rng(8);
        auto d = generic_degree(sys.cbar, sys.mbar, rng);
        o.require(d.count == 4, "degree = " + str(d.count));
        o.note("degree=" + str(d.count));
    });

    criterion("3", "worked stable intersection", 1, [](Outcome& o) {
        auto t = fig_line();
        auto diag = intersect_at_shift(t, antidiagonal(), {Rat(1), Rat(1)});
        auto neg = intersect_at_shift(t, antidiagonal(), {Rat(0), Rat(-1)});
        o.require(diag && diag->total_degree == 2 && diag->points.size() == 2 &&
                      diag->points[0].multiplicity == 1 && diag->points[1].multiplicity == 1,
                  "shift (1,1): two points of multiplicity 1");
        o.require(neg && neg->total_degree == 2 && neg->points.size() == 1 && neg->points[0].multiplicity == 2,
                  "shift (0,-1): one point of multiplicity 2");
        Int idx = sublattice_index(IntMatrix{{1, 1}, {-1, 1}});
        o.require(idx == 2, "sublattice index = " + str(idx));
        o.note("(1,1): " + std::to_string(diag ? diag->points.size() : 0) + " points; (0,-1): multiplicity " +
               (neg && !neg->points.empty() ? str(neg->points[0].multiplicity) : std::string("?")) + "; index " +
               str(idx));
    });

    criterion("4", "critical point system", 10, [](Outcome& o) {
        auto sys = fixture("critical.json");
        std::mt19937_64 rng(5);
        auto pv = grc_purely_vertical(sys, rng);
        auto ps = newton_polytopes(sys);
        Int mv = mixed_volume(ps, rng);
        Int mv_oracle = mixed_volume_oracle(ps);
        o.require(pv.count == 3, "purely vertical = " + str(pv.count));
        o.require(mv == 5 && mv_oracle == 5, "mixed volume = " + str(mv) + ", oracle " + str(mv_oracle));
        o.note("grc=" + str(pv.count) + " mv=" + str(mv));
    });

    criterion("5", "six-degree system", 30, [](Outcome& o) {
        auto sys = fixture("sextic.json");
        std::mt19937_64 rng(6);
        auto r = grc_stable(sys, rng);
        o.require(r.count == 6, "grc = " + str(r.count));
        o.note("grc=" + str(r.count));
    });

    criterion("6", "k-site family, cotransversal path, k = 1..4", 900, [](Outcome& o) {
        std::string got, cross;
        for (std::size_t k = 1; k <= 4; ++k) {
            auto sys = steady_state_system(k_site_network(k)).sys;
            std::mt19937_64 rng(k);
            auto r = auto_root_count(sys, rng);
            o.require(r.count == 2 * k + 1, "k=" + std::to_string(k) + " count " + str(r.count));
            o.require(r.strategy == Strategy::Cotransversal, "k=" + std::to_string(k) + " strategy " +
                                                                 to_string(r.strategy));
            got += (got.empty() ? "" : ",") + str(r.count);
            // independent route through the stable intersection
            std::mt19937_64 g(100 + k);
            auto s = grc_stable(sys, g);
            o.require(s.count == r.count, "k=" + std::to_string(k) + " stable " + str(s.count));
            cross += (cross.empty() ? "" : ",") + str(s.count);
        }
        o.note("degrees " + got + "; stable " + cross);
    });

    criterion("7", "positive lower bound, one site", 300, [](Outcome& o) {
        auto sys = steady_state_system(k_site_network(1)).sys;
        std::mt19937_64 g(1);
        Int grc = auto_root_count(sys, g).count;
        Int best = 0;
        std::string got;
        for (unsigned seed = 1; seed <= 5; ++seed) {
            std::mt19937_64 rng(seed);
            auto r = positive_lower_bound(sys, 32, rng);
            o.require(r.count <= grc, "seed " + std::to_string(seed) + " exceeds grc");
            if (r.count > best) best = r.count;
            got += (got.empty() ? "" : ",") + str(r.count);
        }
        o.require(best >= 1, "no run found a positive point");
        o.note("bounds " + got + " <= grc " + str(grc));
    });

    criterion("8", "toric bounds for the [2 3] system", 10, [](Outcome& o) {
        auto sys = fixture("toric23.json");
        auto a = exponent_matrix("toric23.json");
        std::mt19937_64 rng(7);
        auto tb = toric_bounds(sys, a, 4, rng);
        auto grc = grc_stable(sys, rng);
        auto at = toric_lower_at(sys, a, RatVec{1}, RatVec{1, 0});
        o.require(tb.upper.count == 3, "upper = " + str(tb.upper.count));
        o.require(grc.count == 6, "grc = " + str(grc.count));
        o.require(at.has_value() && *at >= 1, "witness h=(1,0), b=1");
        o.require(tb.lower.count >= 1 && tb.lower.count <= tb.upper.count, "lower = " + str(tb.lower.count));
        o.note("upper=" + str(tb.upper.count) + " grc=" + str(grc.count) + " witness=" +
               (at ? std::to_string(*at) : std::string("none")) + " searched lower=" + str(tb.lower.count));
    });

    criterion("9", "toric path for the running example", 30, [](Outcome& o) {
        auto sys = fixture("running.json");
        auto a = exponent_matrix("running.json");
        std::mt19937_64 rng(9);
        auto tb = toric_bounds(sys, a, 2, rng);
        Int deg = monomial_map_degree(a);
        int mv = tb.upper.certificate.value("mixed_volume", -1);
        o.require(mv == 3, "mixed volume = " + std::to_string(mv));
        o.require(deg == 1, "monomial map degree = " + str(deg));
        o.note("mv=" + std::to_string(mv) + " deg=" + str(deg));
    });

    criterion("10a", "circuits vs minimal-support enumeration", 60, [](Outcome& o) {
        std::mt19937_64 rng(31);
        std::uniform_int_distribution<int> kd(1, 3), nd(0, 4);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t k = kd(rng);
            std::size_t n = std::min<std::size_t>(7, k + 1 + nd(rng));
            auto a = random_full_rank(rng, k, n);
            IndexSets mine;
            for (const auto& c : circuits(LinearMatroidRep(a))) mine.insert(c.elements);
            o.require(mine == brute_force_circuits(a), "trial " + std::to_string(trial));
        }
        o.note("50 matrices");
    });

    criterion("10b", "mixed volume vs inclusion-exclusion", 120, [](Outcome& o) {
        std::mt19937_64 rng(2025);
        std::uniform_int_distribution<int> nd(1, 3), kd(2, 5), cd(0, 4);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t n = nd(rng);
            std::vector<LatticePolytope> ps;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<IntVec> pts(kd(rng), IntVec(n));
                for (auto& p : pts)
                    for (auto& x : p) x = cd(rng);
                ps.emplace_back(n, pts);
            }
            std::mt19937_64 lift(trial);
            o.require(mixed_volume(ps, lift) == mixed_volume_oracle(ps), "trial " + std::to_string(trial));
        }
        o.note("50 instances");
    });

    criterion("10c", "stable degree independent of the shift", 600, [](Outcome& o) {
        std::vector<std::pair<std::string, VerticalSystem>> systems;
        for (const char* name : {"running.json", "critical.json", "sextic.json", "toric23.json", "unbounded.json",
                                 "samemono.json"})
            systems.emplace_back(name, fixture(name));
        systems.emplace_back("1site.crn", steady_state_system(parse_network(read_fixture("1site.crn"))).sys);
        std::string got;
        for (const auto& [name, sys] : systems) {
            Int first = -1;
            for (unsigned seed = 200; seed < 205; ++seed) {
                std::mt19937_64 rng(seed);
                Int c = grc_stable(sys, rng).count;
                if (first < 0) first = c;
                o.require(c == first, name + " seed " + std::to_string(seed));
            }
            got += (got.empty() ? "" : " ") + name + "=" + str(first);
        }
        o.note(got);
    });

    criterion("10d", "Bernstein agreement in two variables", 60, [](Outcome& o) {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> coord(0, 3), size(2, 4);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::vector<IntVec>> supports(2);
            for (auto& sup : supports) {
                std::size_t k = size(rng);
                while (sup.size() < k) {
                    IntVec p{coord(rng), coord(rng)};
                    if (std::find(sup.begin(), sup.end(), p) == sup.end()) sup.push_back(p);
                }
            }
            std::size_t m = supports[0].size() + supports[1].size();
            VerticalSystem sys;
            sys.cbar = RatMatrix(2, m);
            sys.mbar = IntMatrix(2, m);
            sys.l = RatMatrix(0, 2);
            std::size_t col = 0;
            std::vector<LatticePolytope> ps;
            for (std::size_t i = 0; i < 2; ++i) {
                for (const auto& p : supports[i]) {
                    sys.cbar(i, col) = 1;
                    sys.mbar(0, col) = p[0];
                    sys.mbar(1, col) = p[1];
                    ++col;
                }
                ps.emplace_back(2, supports[i]);
            }
            std::mt19937_64 g(trial);
            Int grc = grc_stable(sys, g).count, mv = mixed_volume_oracle(ps);
            o.require(grc == mv, "trial " + std::to_string(trial) + ": " + str(grc) + " vs " + str(mv));
        }
        o.note("10 systems");
    });

    criterion("10e", "sublattice index vs coset count", 60, [](Outcome& o) {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> dim(1, 3), extra(0, 2);
        int checked = 0;
        while (checked < 50) {
            std::size_t n = dim(rng);
            IntMatrix g = random_int_matrix(rng, n, n + extra(rng), -4, 4);
            if (rank(g) != n) continue;
            Int idx = sublattice_index(g);
            if (idx > 50) continue;
            o.require(idx.get_si() == coset_count(g), "trial " + std::to_string(checked));
            ++checked;
        }
        o.note("50 lattices");
    });

    criterion("10f", "monomial map degree vs roots of unity", 60, [](Outcome& o) {
        std::mt19937_64 rng(13);
        std::uniform_int_distribution<int> dim(1, 2), cols(1, 3);
        int checked = 0;
        while (checked < 50) {
            std::size_t n = dim(rng);
            IntMatrix m = random_int_matrix(rng, n, n + cols(rng) - 1, -4, 4);
            if (rank(m) != n) continue;
            long big = 0;
            if (n == 1) {
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (m(0, j) != 0) big = std::abs(m(0, j).get_si());
            } else {
                for (std::size_t a = 0; a < m.cols() && !big; ++a)
                    for (std::size_t b = a + 1; b < m.cols() && !big; ++b) {
                        Int d = abs(determinant(m.select_cols({a, b})));
                        if (d != 0) big = d.get_si();
                    }
            }
            o.require(monomial_map_degree(m).get_si() == root_of_unity_count(m, big), "trial " + std::to_string(checked));
            ++checked;
        }
        o.note("50 matrices");
    });

    criterion("10g", "fixed seed gives byte-identical reports", 120, [](Outcome& o) {
        auto sys = fixture("running.json");
        auto one_site = steady_state_system(k_site_network(1)).sys;
        auto a = exponent_matrix("toric23.json");
        auto t23 = fixture("toric23.json");
        std::vector<std::function<std::string(std::uint64_t)>> runs = {
            [&](std::uint64_t s) {
                std::mt19937_64 rng(s);
                return report_json(auto_root_count(sys, rng), {"count", "running", s}).dump();
            },
            [&](std::uint64_t s) {
                std::mt19937_64 rng(s);
                return report_json(grc_stable(sys, rng), {"count", "running", s}).dump();
            },
            [&](std::uint64_t s) {
                std::mt19937_64 rng(s);
                return report_json(positive_lower_bound(one_site, 8, rng), {"positive", "1site", s}).dump();
            },
            [&](std::uint64_t s) {
                std::mt19937_64 rng(s);
                return toric_report_json(toric_bounds(t23, a, 4, rng), {"toric", "toric23", s}).dump();
            }};
        for (std::size_t i = 0; i < runs.size(); ++i)
            o.require(runs[i](41) == runs[i](41), "report " + std::to_string(i));
        std::size_t saved = worker_threads();
        set_worker_threads(1);
        std::string single = runs[2](43);
        set_worker_threads(4);
        std::string several = runs[2](43);
        set_worker_threads(saved);
        o.require(single == several, "positive bound independent of thread count");
        o.note(std::to_string(runs.size()) + " report kinds");
    });

    criterion("10h", "circuit search vs flag search", 120, [](Outcome& o) {
        std::string got;
        std::vector<std::pair<std::string, VerticalSystem>> systems = {
            {"running", fixture("running.json")},
            {"sextic", fixture("sextic.json")},
            {"1site", steady_state_system(k_site_network(1)).sys}};
        for (const auto& [name, sys] : systems) {
            VsysOptions flags;
            flags.search = IntersectSearch::Flags;
            std::mt19937_64 a(3), b(3);
            auto rc = grc_stable(sys, a);
            auto rf = grc_stable(sys, b, flags);
            o.require(rc.count == rf.count, name + ": " + str(rc.count) + " vs " + str(rf.count));
            got += (got.empty() ? "" : " ") + name + "=" + str(rc.count);
        }
        o.note(got);
    });

    std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
