#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vctrack/ledger.hpp"

namespace vctrack {

/// Fixed offset from UTC, in minutes.
struct TzOffset {
    int minutes = 0;

    /// "+02:00", "-05:30", "Z". Throws std::invalid_argument.
    static TzOffset parse(std::string_view text);
    std::string str() const;

    friend bool operator==(const TzOffset&, const TzOffset&) = default;
};

using LocalDate = std::chrono::year_month_day;

/// "2024-03-15". Throws std::invalid_argument.
LocalDate parse_date(std::string_view text);
std::string format_date(const LocalDate& date);
LocalDate local_date(Timestamp ts, TzOffset tz);

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (or a "+00:00" suffix); UTC only, whole
/// seconds. Throws std::invalid_argument.
Timestamp parse_utc_timestamp(std::string_view text);
std::string format_utc_timestamp(Timestamp ts);

/// Inclusive range of local calendar dates; open ends are unbounded.
struct DateRange {
    std::optional<LocalDate> from;
    std::optional<LocalDate> to;

    /// Throws LedgerError(InvalidDateRange) when from > to.
    void validate() const;
    bool contains(const LocalDate& d) const;
};

struct ReportScope {
    std::optional<std::string> app_id; // nullopt: every app
    DateRange range;
    TzOffset tz;
};

struct SpendRow {
    std::string app_id;
    CurrencyId currency;
    Money real_spend;
    Quantity virtual_bought;
};

/// Real money paid per virtual currency. Only RealMoneyPurchases count
/// towards spend, so currencies obtained by exchange show zero. Rows cover
/// every currency touched by an in-range event, ordered by (app, code).
std::vector<SpendRow> report_spend_by_currency(const Ledger& ledger, const ReportScope& scope = {});

enum class Grouping { Day, Month };

std::string_view grouping_name(Grouping g);

struct DateBucket {
    std::string label; // "2024-03-15" or "2024-03"
    Money real_spend;
    Money attributed;
    std::vector<Attribution> attributions;
};

/// Buckets by the local date of each event, ascending.
std::vector<DateBucket> report_by_date(const Ledger& ledger, Grouping grouping, const ReportScope& scope = {});

} // namespace vctrack
