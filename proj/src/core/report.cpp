#include "vctrack/report.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "vctrack/error.hpp"

namespace vctrack {

namespace {

using namespace std::chrono;

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len)
{
    if (pos + len > text.size()) {
        throw std::invalid_argument("truncated");
    }
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + len;
    for (const char* p = first; p != last; ++p) {
        if (*p < '0' || *p > '9') {
            throw std::invalid_argument("expected digit");
        }
    }
    std::from_chars(first, last, value);
    return value;
}

void expect(std::string_view text, std::size_t pos, char c)
{
    if (pos >= text.size() || text[pos] != c) {
        throw std::invalid_argument(std::string("expected '") + c + "'");
    }
}

LocalDate parse_ymd_prefix(std::string_view text)
{
    const int y = parse_fixed(text, 0, 4);
    expect(text, 4, '-');
    const int m = parse_fixed(text, 5, 2);
    expect(text, 7, '-');
    const int d = parse_fixed(text, 8, 2);
    const LocalDate date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw std::invalid_argument("no such calendar date");
    }
    return date;
}

} // namespace

TzOffset TzOffset::parse(std::string_view text)
{
    if (text == "Z" || text == "z") {
        return {};
    }
    try {
        if (text.size() != 6 || (text[0] != '+' && text[0] != '-')) {
            throw std::invalid_argument("shape");
        }
        const int h = parse_fixed(text, 1, 2);
        expect(text, 3, ':');
        const int m = parse_fixed(text, 4, 2);
        if (h > 23 || m > 59) {
            throw std::invalid_argument("range");
        }
        const int total = h * 60 + m;
        return {text[0] == '-' ? -total : total};
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad timezone offset '" + std::string(text) + "' (expected +HH:MM)");
    }
}

std::string TzOffset::str() const
{
    const int a = minutes < 0 ? -minutes : minutes;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", minutes < 0 ? '-' : '+', a / 60, a % 60);
    return buf;
}

LocalDate parse_date(std::string_view text)
{
    try {
        if (text.size() != 10) {
            throw std::invalid_argument("length");
        }
        return parse_ymd_prefix(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
}

std::string format_date(const LocalDate& date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

LocalDate local_date(Timestamp ts, TzOffset tz)
{
    return LocalDate{floor<days>(ts + minutes{tz.minutes})};
}

Timestamp parse_utc_timestamp(std::string_view text)
{
    try {
        const LocalDate date = parse_ymd_prefix(text);
        if (text.size() < 11 || (text[10] != 'T' && text[10] != 't')) {
            throw std::invalid_argument("expected 'T'");
        }
        const int hh = parse_fixed(text, 11, 2);
        expect(text, 13, ':');
        const int mi = parse_fixed(text, 14, 2);
        expect(text, 16, ':');
        const int ss = parse_fixed(text, 17, 2);
        const std::string_view zone = text.substr(19);
        if (zone != "Z" && zone != "z" && zone != "+00:00") {
            throw std::invalid_argument("not UTC");
        }
        if (hh > 23 || mi > 59 || ss > 59) {
            throw std::invalid_argument("time out of range");
        }
        return sys_days{date} + hours{hh} + minutes{mi} + seconds{ss};
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("bad timestamp '" + std::string(text) + "': " + e.what());
    }
}

std::string format_utc_timestamp(Timestamp ts)
{
    const auto day_start = floor<days>(ts);
    const LocalDate date{day_start};
    const hh_mm_ss<seconds> tod{ts - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(date).c_str(),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

void DateRange::validate() const
{
    if (from && to && *to < *from) {
        throw LedgerError(ErrorCode::InvalidDateRange,
                          "invalid date range: " + format_date(*from) + " is after " + format_date(*to),
                          {{"from", format_date(*from)}, {"to", format_date(*to)}});
    }
}

bool DateRange::contains(const LocalDate& d) const
{
    return (!from || *from <= d) && (!to || d <= *to);
}

namespace {

bool in_scope(const Event& e, const ReportScope& scope)
{
    if (scope.app_id && *scope.app_id != e.app_id) {
        return false;
    }
    return scope.range.contains(local_date(e.timestamp, scope.tz));
}

} // namespace

std::vector<SpendRow> report_spend_by_currency(const Ledger& ledger, const ReportScope& scope)
{
    scope.range.validate();

    std::map<std::pair<std::string, std::string>, SpendRow> rows;
    auto row = [&](const Event& e, const Position& pos) -> SpendRow& {
        auto [it, inserted] = rows.try_emplace({e.app_id, pos.currency.code});
        if (inserted) {
            it->second.app_id = e.app_id;
            it->second.currency = pos.currency;
            it->second.real_spend.currency = ledger.report_currency();
        }
        return it->second;
    };

    for (const Event& e : ledger.events()) {
        if (!in_scope(e, scope)) {
            continue;
        }
        if (const auto* p = std::get_if<RealMoneyPurchase>(&e.payload)) {
            SpendRow& r = row(e, p->received);
            r.real_spend.amount += p->paid.amount;
            r.virtual_bought += p->received.units;
        } else if (const auto* x = std::get_if<Exchange>(&e.payload)) {
            row(e, x->spent);
            row(e, x->received);
        } else if (const auto* ip = std::get_if<ItemPurchase>(&e.payload)) {
            for (const Position& pos : ip->paid_with) {
                row(e, pos);
            }
        } else if (const auto* s = std::get_if<ItemSale>(&e.payload)) {
            row(e, s->proceeds);
        } else if (const auto* g = std::get_if<Grant>(&e.payload)) {
            row(e, g->received);
        }
    }

    std::vector<SpendRow> out;
    out.reserve(rows.size());
    for (auto& [_, r] : rows) {
        out.push_back(std::move(r));
    }
    return out;
}

std::string_view grouping_name(Grouping g)
{
    return g == Grouping::Day ? "day" : "month";
}

std::vector<DateBucket> report_by_date(const Ledger& ledger, Grouping grouping, const ReportScope& scope)
{
    scope.range.validate();

    auto label_of = [&](Timestamp ts) {
        const std::string d = format_date(local_date(ts, scope.tz));
        return grouping == Grouping::Day ? d : d.substr(0, 7);
    };

    std::map<std::string, DateBucket> buckets;
    auto bucket = [&](Timestamp ts) -> DateBucket& {
        const std::string label = label_of(ts);
        auto [it, inserted] = buckets.try_emplace(label);
        if (inserted) {
            it->second.label = label;
            it->second.real_spend.currency = ledger.report_currency();
            it->second.attributed.currency = ledger.report_currency();
        }
        return it->second;
    };

    for (const Event& e : ledger.events()) {
        if (!in_scope(e, scope)) {
            continue;
        }
        if (const auto* p = std::get_if<RealMoneyPurchase>(&e.payload)) {
            bucket(e.timestamp).real_spend.amount += p->paid.amount;
        } else if (std::holds_alternative<ItemPurchase>(e.payload)) {
            const Attribution& a = attribute_item_purchase(ledger, e.app_id, e.event_id);
            DateBucket& b = bucket(e.timestamp);
            b.attributed.amount += a.total_basis.amount;
            b.attributions.push_back(a);
        }
    }

    std::vector<DateBucket> out;
    out.reserve(buckets.size());
    for (auto& [_, b] : buckets) {
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace vctrack
