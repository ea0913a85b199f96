#include "troproot/report.hpp"

#include <iomanip>
#include <sstream>

namespace troproot {

using nlohmann::json;

namespace {

json count_json(const Int& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

json envelope(const std::string& command, const ReportContext& ctx) {
    json out;
    out["schema"] = kReportSchema;
    out["command"] = command;
    out["input"] = ctx.input;
    out["seed"] = ctx.seed;
    return out;
}

std::string certificate_lines(const json& cert) {
    std::string out;
    for (auto it = cert.begin(); it != cert.end(); ++it) {
        std::string v = it.value().dump();
        if (v.size() > 100) v = v.substr(0, 97) + "...";
        out += "  " + it.key() + ": " + v + "\n";
    }
    return out;
}

}  // namespace

json report_json(const RootCountReport& r, const ReportContext& ctx) {
    json out = envelope(ctx.command, ctx);
    out["count"] = count_json(r.count);
    out["kind"] = to_string(r.kind);
    out["strategy"] = to_string(r.strategy);
    out["certificate"] = r.certificate;
    return out;
}

json toric_report_json(const ToricBounds& b, const ReportContext& ctx) {
    json out = envelope(ctx.command, ctx);
    out["lower"] = count_json(b.lower.count);
    out["upper"] = count_json(b.upper.count);
    out["strategy"] = to_string(Strategy::Toric);
    out["certificate"] = {{"lower", b.lower.certificate}, {"upper", b.upper.certificate}};
    return out;
}

json failure_json(const std::string& error, const json& partial, const ReportContext& ctx) {
    json out = envelope(ctx.command, ctx);
    out["error"] = error;
    out["certificate"] = partial;
    return out;
}

std::string report_text(const RootCountReport& r, const ReportContext& ctx) {
    std::ostringstream os;
    os << to_string(r.kind) << ": " << r.count.get_str() << "\n";
    os << "strategy: " << to_string(r.strategy) << "\n";
    os << "seed: " << ctx.seed << "\n";
    if (!ctx.input.empty()) os << "input: " << ctx.input << "\n";
    os << "certificate:\n" << certificate_lines(r.certificate);
    return os.str();
}

std::string toric_report_text(const ToricBounds& b, const ReportContext& ctx) {
    std::ostringstream os;
    os << "toric lower bound: " << b.lower.count.get_str() << "\n";
    os << "toric upper bound: " << b.upper.count.get_str() << "\n";
    os << "seed: " << ctx.seed << "\n";
    if (!ctx.input.empty()) os << "input: " << ctx.input << "\n";
    os << "upper certificate:\n" << certificate_lines(b.upper.certificate);
    os << "lower certificate:\n" << certificate_lines(b.lower.certificate);
    return os.str();
}

json ksite_json(const std::vector<KSiteRow>& rows, const ReportContext& ctx) {
    json out = envelope(ctx.command, ctx);
    out["family"] = "ksite";
    out["rows"] = json::array();
    for (const auto& r : rows) {
        out["rows"].push_back({{"k", r.k},
                               {"variables", r.variables},
                               {"parameters", r.parameters},
                               {"degree", count_json(r.degree.count)},
                               {"strategy", to_string(r.degree.strategy)},
                               {"positive_lower", count_json(r.positive.count)},
                               {"certificate", {{"degree", r.degree.certificate}, {"positive", r.positive.certificate}}}});
    }
    return out;
}

std::string ksite_table(const std::vector<KSiteRow>& rows) {
    std::vector<std::pair<std::string, std::vector<std::string>>> lines = {
        {"k", {}}, {"variables (n)", {}}, {"parameters (m+d)", {}}, {"steady-state degree", {}},
        {"positive lower bound", {}}, {"strategy", {}}, {"seconds", {}}};
    for (const auto& r : rows) {
        std::ostringstream sec;
        sec << std::fixed << std::setprecision(2) << r.seconds;
        lines[0].second.push_back(std::to_string(r.k));
        lines[1].second.push_back(std::to_string(r.variables));
        lines[2].second.push_back(std::to_string(r.parameters));
        lines[3].second.push_back(r.degree.count.get_str());
        lines[4].second.push_back(r.positive.count.get_str());
        lines[5].second.push_back(to_string(r.degree.strategy));
        lines[6].second.push_back(sec.str());
    }
    std::size_t label = 0, cell = 1;
    for (const auto& [name, cells] : lines) {
        label = std::max(label, name.size());
        for (const auto& c : cells) cell = std::max(cell, c.size());
    }
    std::ostringstream os;
    for (const auto& [name, cells] : lines) {
        os << std::left << std::setw(static_cast<int>(label)) << name << " |";
        for (const auto& c : cells) os << " " << std::right << std::setw(static_cast<int>(cell)) << c;
        os << "\n";
    }
    return os.str();
}

}  // namespace troproot
