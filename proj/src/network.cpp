#include "troproot/network.hpp"

#include <map>
#include <regex>
#include <sstream>

namespace troproot {

bool ReactionNetwork::operator==(const ReactionNetwork& o) const {
    if (species != o.species || reactions.size() != o.reactions.size()) return false;
    for (std::size_t j = 0; j < reactions.size(); ++j) {
        const auto& a = reactions[j];
        const auto& b = o.reactions[j];
        if (a.reactants != b.reactants || a.products != b.products || a.label != b.label) return false;
    }
    return true;
}

namespace {

using Complex = std::map<std::size_t, Int>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

std::size_t species_index(std::vector<std::string>& species, std::map<std::string, std::size_t>& index,
                          const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    index[name] = species.size();
    species.push_back(name);
    return species.size() - 1;
}

Complex parse_side(const std::string& side, std::size_t line, std::vector<std::string>& species,
                   std::map<std::string, std::size_t>& index) {
    static const std::regex term_re(R"(^(\d+)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)$)");
    Complex out;
    std::string s = trim(side);
    if (s.empty() || s == "0" || s == "\xE2\x88\x85") return out;
    if (s.front() == '+' || s.back() == '+') fail(line, "dangling '+'");
    std::stringstream ss(s);
    std::string term;
    while (std::getline(ss, term, '+')) {
        term = trim(term);
        if (term.empty()) fail(line, "empty term");
        std::smatch mt;
        if (!std::regex_match(term, mt, term_re)) {
            if (term[0] == '-') fail(line, "negative coefficient in '" + term + "'");
            if (term.find_first_of("./") != std::string::npos) fail(line, "fractional coefficient in '" + term + "'");
            fail(line, "malformed term '" + term + "'");
        }
        Int coef = 1;
        if (mt[1].matched) coef = Int(mt[1].str());
        if (coef == 0) fail(line, "zero coefficient in '" + term + "'");
        out[species_index(species, index, mt[2].str())] += coef;
    }
    return out;
}

IntVec dense(const Complex& c, std::size_t n) {
    IntVec v(n);
    for (const auto& [i, k] : c) v[i] = k;
    return v;
}

std::string render_side(const IntVec& v, const std::vector<std::string>& species) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        if (!out.empty()) out += " + ";
        if (v[i] != 1) out += v[i].get_str() + " ";
        out += species[i];
    }
    return out.empty() ? "0" : out;
}

}  // namespace

ReactionNetwork parse_network(const std::string& text) {
    std::vector<std::string> species;
    std::map<std::string, std::size_t> index;
    std::vector<std::pair<Complex, Complex>> raw;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    static const std::regex name_re(R"(^[A-Za-z_][A-Za-z0-9_]*$)");
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("species:", 0) == 0) {
            std::stringstream names(line.substr(8));
            std::string nm;
            while (names >> nm) {
                if (!std::regex_match(nm, name_re)) fail(lineno, "bad species name '" + nm + "'");
                if (index.count(nm)) fail(lineno, "species '" + nm + "' declared twice");
                species_index(species, index, nm);
            }
            continue;
        }
        bool reversible = false;
        std::size_t pos = line.find("<->");
        std::size_t width = 3;
        if (pos != std::string::npos) {
            reversible = true;
        } else {
            pos = line.find("->");
            width = 2;
        }
        if (pos == std::string::npos) fail(lineno, "missing arrow");
        std::string lhs = line.substr(0, pos);
        std::string rhs = line.substr(pos + width);
        if (rhs.find("->") != std::string::npos) fail(lineno, "more than one arrow");
        Complex a = parse_side(lhs, lineno, species, index);
        Complex b = parse_side(rhs, lineno, species, index);
        raw.emplace_back(a, b);
        if (reversible) raw.emplace_back(b, a);
    }
    if (raw.empty()) throw ParseError("network has no reactions");
    ReactionNetwork net;
    net.species = species;
    for (std::size_t j = 0; j < raw.size(); ++j)
        net.reactions.push_back(
            {dense(raw[j].first, species.size()), dense(raw[j].second, species.size()), "a" + std::to_string(j + 1)});
    return net;
}

std::string render_network(const ReactionNetwork& net) {
    std::string out = "species:";
    for (const auto& s : net.species) out += " " + s;
    out += "\n";
    for (const auto& r : net.reactions)
        out += render_side(r.reactants, net.species) + " -> " + render_side(r.products, net.species) + "\n";
    return out;
}

SteadyStateData steady_state_system(const ReactionNetwork& net) {
    std::size_t n = net.species.size();
    std::size_t m = net.reactions.size();
    if (m == 0) throw PreconditionError("network has no reactions");
    SteadyStateData out;
    out.n_mat = IntMatrix(n, m);
    out.kinetic = IntMatrix(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& r = net.reactions[j];
        if (r.reactants.size() != n || r.products.size() != n)
            throw PreconditionError("reaction " + r.label + " has wrong length");
        for (std::size_t i = 0; i < n; ++i) {
            out.n_mat(i, j) = r.products[i] - r.reactants[i];
            out.kinetic(i, j) = r.reactants[i];
        }
    }
    RatMatrix nr = to_rat(out.n_mat);
    std::size_t s = rank(nr);
    if (s == 0) throw PreconditionError("stoichiometric matrix is zero");
    for (std::size_t j = 0; j < m; ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < n; ++i) zero = zero && out.n_mat(i, j) == 0;
        if (zero) throw PreconditionError("reaction " + net.reactions[j].label + " has zero net stoichiometry");
    }

    RatMatrix picked(0, m);
    for (std::size_t i = 0; i < n && out.c_rows.size() < s; ++i) {
        RatMatrix trial = picked;
        trial.append_row(nr.row(i));
        if (rank(trial) > picked.rows()) {
            picked = trial;
            out.c_rows.push_back(i);
        }
    }

    RatMatrix kern = kernel_basis(nr.transpose());
    RatMatrix l(0, n);
    for (std::size_t t = 0; t < kern.cols(); ++t) l.append_row(to_rat(clear_denominators(kern.col(t))));

    out.sys.cbar = picked;
    out.sys.mbar = out.kinetic;
    out.sys.l = l;
    out.sys.varnames = net.species;
    for (const auto& r : net.reactions) out.sys.paramnames.push_back(r.label);
    out.sys.validate();
    return out;
}

ReactionNetwork k_site_network(std::size_t k) {
    if (k == 0) throw PreconditionError("k must be at least 1");
    ReactionNetwork net;
    net.species = {"K", "P"};
    for (std::size_t i = 0; i <= k; ++i) net.species.push_back("S" + std::to_string(i));
    for (std::size_t i = 0; i < k; ++i) net.species.push_back("S" + std::to_string(i) + "K");
    for (std::size_t i = 1; i <= k; ++i) net.species.push_back("S" + std::to_string(i) + "P");
    std::size_t n = net.species.size();
    auto s_idx = [](std::size_t i) { return 2 + i; };
    auto sk_idx = [k](std::size_t i) { return 3 + k + i; };
    auto sp_idx = [k](std::size_t i) { return 3 + 2 * k + (i - 1); };
    auto add = [&](std::initializer_list<std::size_t> lhs, std::initializer_list<std::size_t> rhs) {
        Reaction r{IntVec(n), IntVec(n), "a" + std::to_string(net.reactions.size() + 1)};
        for (auto i : lhs) r.reactants[i] += 1;
        for (auto i : rhs) r.products[i] += 1;
        net.reactions.push_back(r);
    };
    const std::size_t kin = 0, pho = 1;
    for (std::size_t i = 0; i < k; ++i) {
        add({s_idx(i), kin}, {sk_idx(i)});
        add({sk_idx(i)}, {s_idx(i), kin});
        add({sk_idx(i)}, {s_idx(i + 1), kin});
        add({s_idx(i + 1), pho}, {sp_idx(i + 1)});
        add({sp_idx(i + 1)}, {s_idx(i + 1), pho});
        add({sp_idx(i + 1)}, {s_idx(i), pho});
    }
    return net;
}

}  // namespace troproot
