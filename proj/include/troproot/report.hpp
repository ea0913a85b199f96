#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "troproot/vsys.hpp"

namespace troproot {

constexpr int kReportSchema = 1;

struct ReportContext {
    std::string command;
    std::string input;
    std::uint64_t seed = 0;
};

nlohmann::json report_json(const RootCountReport& r, const ReportContext& ctx);
nlohmann::json toric_report_json(const ToricBounds& b, const ReportContext& ctx);
// Used when a budget runs out; the certificate holds whatever was known.
nlohmann::json failure_json(const std::string& error, const nlohmann::json& partial, const ReportContext& ctx);

std::string report_text(const RootCountReport& r, const ReportContext& ctx);
std::string toric_report_text(const ToricBounds& b, const ReportContext& ctx);

struct KSiteRow {
    std::size_t k = 0;
    std::size_t variables = 0;
    std::size_t parameters = 0;
    RootCountReport degree;
    RootCountReport positive;
    double seconds = 0;
};

nlohmann::json ksite_json(const std::vector<KSiteRow>& rows, const ReportContext& ctx);
// Columns are the values of k, rows the quantities.
std::string ksite_table(const std::vector<KSiteRow>& rows);

}  // namespace troproot
