#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <random>
#include <string>
#include <vector>

#include "troproot/network.hpp"
#include "troproot/report.hpp"
#include "troproot/vsys.hpp"

namespace py = pybind11;
using namespace troproot;
using nlohmann::json;

namespace {

VsysOptions options(bool separate, const std::string& search) {
    VsysOptions o;
    o.separate_parameters = separate;
    if (search == "flags")
        o.search = IntersectSearch::Flags;
    else if (search != "circuits")
        throw ParseError("unknown search: " + search);
    return o;
}

RootCountReport count_with(const VerticalSystem& sys, const std::string& strategy, std::mt19937_64& rng,
                           const VsysOptions& o) {
    if (strategy == "auto") return auto_root_count(sys, rng, o);
    if (strategy == "stable") return grc_stable(sys, rng, o);
    if (strategy == "purely-vertical") return grc_purely_vertical(sys, rng, o);
    if (strategy == "cotransversal") {
        auto rep = try_cotransversal(sys, rng, o);
        if (!rep) throw Error("no cotransversal presentation found");
        return *rep;
    }
    throw ParseError("unknown strategy: " + strategy);
}

std::string count(const std::string& system, const std::string& strategy, std::uint64_t seed, bool separate,
                  const std::string& search) {
    VerticalSystem sys = parse_system_json(system);
    std::mt19937_64 rng(seed);
    py::gil_scoped_release release;
    auto rep = count_with(sys, strategy, rng, options(separate, search));
    return report_json(rep, {"count", "", seed}).dump();
}

std::string positive(const std::string& system, std::size_t attempts, std::uint64_t seed, bool separate) {
    VerticalSystem sys = parse_system_json(system);
    std::mt19937_64 rng(seed);
    py::gil_scoped_release release;
    auto rep = positive_lower_bound(sys, attempts, rng, options(separate, "circuits"));
    return report_json(rep, {"positive", "", seed}).dump();
}

std::string toric(const std::string& system, const std::vector<std::vector<long>>& a_rows, std::size_t attempts,
                  std::uint64_t seed) {
    VerticalSystem sys = parse_system_json(system);
    if (a_rows.empty() || a_rows[0].empty()) throw ParseError("exponent matrix is empty");
    IntMatrix a(a_rows.size(), a_rows[0].size());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (a_rows[i].size() != a.cols()) throw ParseError("exponent matrix rows differ in length");
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = a_rows[i][j];
    }
    std::mt19937_64 rng(seed);
    py::gil_scoped_release release;
    return toric_report_json(toric_bounds(sys, a, attempts, rng), {"toric", "", seed}).dump();
}

std::string degree(const std::string& system, std::uint64_t seed) {
    VerticalSystem sys = parse_system_json(system);
    std::mt19937_64 rng(seed);
    py::gil_scoped_release release;
    return report_json(generic_degree(sys.cbar, sys.mbar, rng), {"degree", "", seed}).dump();
}

std::string network_system(const std::string& text) {
    return system_to_json(steady_state_system(parse_network(text)).sys).dump();
}

std::string ksite_system(std::size_t k) { return system_to_json(steady_state_system(k_site_network(k)).sys).dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Generic root counts of vertically parametrized systems";

    // later registrations are tried first, so the base class goes first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    m.def("count", &count, py::arg("system"), py::arg("strategy") = "auto", py::arg("seed") = 0,
          py::arg("separate_parameters") = false, py::arg("search") = "circuits");
    m.def("positive", &positive, py::arg("system"), py::arg("attempts") = 32, py::arg("seed") = 0,
          py::arg("separate_parameters") = false);
    m.def("toric", &toric, py::arg("system"), py::arg("exponent_matrix"), py::arg("attempts") = 32,
          py::arg("seed") = 0);
    m.def("degree", &degree, py::arg("system"), py::arg("seed") = 0);
    m.def("network_system", &network_system, py::arg("text"));
    m.def("ksite_system", &ksite_system, py::arg("k"));
    m.def("set_threads", &set_worker_threads, py::arg("n"));
}
