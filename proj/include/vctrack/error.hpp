#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vctrack {

enum class ErrorCode {
    // ledger
    DuplicateEventId,
    InsufficientBalance,
    UnknownCurrency,
    NonPositiveQuantity,
    RealCurrencyInVirtualPosition,
    InvalidCurrency,
    EmptyChain,
    UnknownAttribution,
    InvalidDateRange,
    // ingest
    MalformedJson,
    MissingField,
    BadTimestamp,
    BadDecimal,
    BadQuantity,
    UnknownEventType,
    UnsupportedSchemaVersion,
    StaleEvent,
    AppMismatch,
};

/// Stable snake_case name used on the wire ("duplicate_event_id").
std::string_view error_code_name(ErrorCode code);

class LedgerError : public std::runtime_error {
public:
    using Detail = std::vector<std::pair<std::string, std::string>>;

    LedgerError(ErrorCode code, const std::string& message, Detail detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const Detail& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    Detail detail_;
};

} // namespace vctrack
