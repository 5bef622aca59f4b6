#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vctrack/ingest.hpp"
#include "vctrack/report.hpp"
#include "vctrack/trace.hpp"

namespace vctrack {

/// {"exact": "1999/1000", "display": "1.99"}
nlohmann::json money_json(const Rational& amount);

struct ReportQuery {
    std::string app_id;
    DateRange range;
    TzOffset tz;
    std::optional<Grouping> grouping; // nullopt: no date buckets
};

/// The report document served at GET /v1/apps/{app}/report and printed by
/// `vctrack report --format json`. Throws LedgerError(InvalidDateRange).
nlohmann::json report_document(const Ledger& ledger, const ReportQuery& query);
nlohmann::json trace_document(const Trace& trace);
nlohmann::json ingest_report_document(const IngestReport& report);

/// Pretty-printed with a trailing newline; the one serialization both
/// front ends use.
std::string to_text(const nlohmann::json& doc);

/// Human table for a report document.
std::string render_report_table(const nlohmann::json& doc);
/// Display-rounded CSV for a report document.
std::string render_report_csv(const nlohmann::json& doc);
std::string render_trace_table(const Trace& trace, const std::string& report_currency);

} // namespace vctrack
