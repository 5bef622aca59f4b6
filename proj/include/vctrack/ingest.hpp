#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vctrack/error.hpp"
#include "vctrack/ledger.hpp"

namespace vctrack {

inline constexpr int kSchemaVersion = 1;

/// One validated line of a JSONL event log.
struct EventRecord {
    int schema_version = kSchemaVersion;
    Event event;
    bool generated_id = false; // event_id was absent and derived from the line

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Parses and validates one JSON object. Errors are LedgerErrors carrying
/// MalformedJson, MissingField, BadTimestamp, BadDecimal, BadQuantity,
/// UnknownEventType, UnsupportedSchemaVersion or InvalidCurrency.
EventRecord parse_event_line(std::string_view text);
EventRecord parse_event_json(const nlohmann::json& j);

nlohmann::json event_to_json(const Event& event);
/// Single-line canonical form (sorted keys, decimal strings for money).
std::string serialize_event(const Event& event);

/// Id used when a line carries no event_id: a hash of the canonical form.
std::string derive_event_id(const nlohmann::json& j);

struct IngestRejection {
    std::size_t line_no = 0; // 1-based physical line
    ErrorCode code{};
    std::string message;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<IngestRejection> rejected;
    std::vector<Event> applied; // apply order

    bool all_duplicates() const;
};

struct IngestOptions {
    /// When set, lines for any other app are rejected with AppMismatch.
    std::optional<std::string> required_app;
};

/// Parses every line, sorts the valid records by (timestamp, line order)
/// and applies them. Failures are isolated per line and collected; nothing
/// is thrown past the batch. Blank lines are skipped.
IngestReport ingest_log(std::span<const std::string> lines, Ledger& ledger, const IngestOptions& options = {});

/// Splits text into physical lines (trailing "\r" stripped).
std::vector<std::string> split_lines(std::string_view text);

} // namespace vctrack
