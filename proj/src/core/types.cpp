#include "vctrack/types.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "vctrack/error.hpp"

namespace vctrack {

bool is_iso_currency_code(const std::string& code)
{
    return code.size() == 3 &&
           std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

void CurrencyId::validate() const
{
    if (kind == CurrencyKind::Real) {
        if (!is_iso_currency_code(code) || !app_id.empty()) {
            throw LedgerError(ErrorCode::InvalidCurrency,
                              "real currency needs a 3-letter uppercase code and no app: '" + code + "'");
        }
        return;
    }
    if (app_id.empty() || code.empty()) {
        throw LedgerError(ErrorCode::InvalidCurrency, "virtual currency needs an app and a code");
    }
}

std::string CurrencyId::label() const
{
    return is_real() ? code : app_id + ":" + code;
}

Quantity::Quantity(std::int64_t units) : Quantity(BigInt(units)) {}

Quantity::Quantity(BigInt units) : units_(std::move(units))
{
    if (units_ < 0) {
        throw std::invalid_argument("negative quantity");
    }
}

Quantity& Quantity::operator+=(const Quantity& o)
{
    units_ += o.units_;
    return *this;
}

Quantity& Quantity::operator-=(const Quantity& o)
{
    if (o.units_ > units_) {
        throw std::underflow_error("quantity underflow");
    }
    units_ -= o.units_;
    return *this;
}

std::strong_ordering operator<=>(const Quantity& a, const Quantity& b)
{
    if (a.units_ < b.units_) {
        return std::strong_ordering::less;
    }
    if (b.units_ < a.units_) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::string_view strategy_name(Strategy s)
{
    return s == Strategy::Fifo ? "fifo" : "lifo";
}

Strategy parse_strategy(std::string_view text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "fifo") {
        return Strategy::Fifo;
    }
    if (lower == "lifo") {
        return Strategy::Lifo;
    }
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "' (expected fifo or lifo)");
}

Rational Attribution::unit_cost() const
{
    if (count.is_zero()) {
        return total_basis.amount;
    }
    return total_basis.amount / count.as_rational();
}

std::string_view error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DuplicateEventId: return "duplicate_event_id";
    case ErrorCode::InsufficientBalance: return "insufficient_balance";
    case ErrorCode::UnknownCurrency: return "unknown_currency";
    case ErrorCode::NonPositiveQuantity: return "non_positive_quantity";
    case ErrorCode::RealCurrencyInVirtualPosition: return "real_currency_in_virtual_position";
    case ErrorCode::InvalidCurrency: return "invalid_currency";
    case ErrorCode::EmptyChain: return "empty_chain";
    case ErrorCode::UnknownAttribution: return "unknown_attribution";
    case ErrorCode::InvalidDateRange: return "invalid_date_range";
    case ErrorCode::MalformedJson: return "malformed_json";
    case ErrorCode::MissingField: return "missing_field";
    case ErrorCode::BadTimestamp: return "bad_timestamp";
    case ErrorCode::BadDecimal: return "bad_decimal";
    case ErrorCode::BadQuantity: return "bad_quantity";
    case ErrorCode::UnknownEventType: return "unknown_event_type";
    case ErrorCode::UnsupportedSchemaVersion: return "unsupported_schema_version";
    case ErrorCode::StaleEvent: return "stale_event";
    case ErrorCode::AppMismatch: return "app_mismatch";
    }
    return "unknown";
}

} // namespace vctrack
