#include "vctrack/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <cstdio>

#include <openssl/sha.h>

#include "vctrack/report.hpp"

namespace vctrack {

using nlohmann::json;

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& message, LedgerError::Detail detail = {})
{
    throw LedgerError(code, message, std::move(detail));
}

const json& field(const json& obj, const char* name)
{
    if (!obj.is_object()) {
        fail(ErrorCode::MalformedJson, "expected an object holding '" + std::string(name) + "'");
    }
    const auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) {
        fail(ErrorCode::MissingField, std::string("missing field '") + name + "'", {{"name", name}});
    }
    return *it;
}

std::string string_field(const json& obj, const char* name)
{
    const json& v = field(obj, name);
    if (!v.is_string()) {
        fail(ErrorCode::MalformedJson, std::string("field '") + name + "' must be a string");
    }
    return v.get<std::string>();
}

Quantity parse_quantity(const json& v, const char* name)
{
    if (v.is_number_unsigned()) {
        return Quantity(BigInt(v.get<std::uint64_t>()));
    }
    if (v.is_string()) {
        try {
            return Quantity(parse_bigint(v.get<std::string>()));
        } catch (const std::invalid_argument&) {
        }
    }
    fail(ErrorCode::BadQuantity,
         std::string("field '") + name + "' must be a non-negative integer (got " + v.dump() + ")");
}

Quantity quantity_field(const json& obj, const char* name)
{
    return parse_quantity(field(obj, name), name);
}

Position position_from(const json& p, const char* name, const std::string& app_id)
{
    if (!p.is_object()) {
        fail(ErrorCode::MalformedJson, std::string("field '") + name + "' must be an object");
    }
    CurrencyId currency = CurrencyId::in_app(app_id, string_field(p, "code"));
    if (const auto k = p.find("kind"); k != p.end()) {
        if (*k == "real") {
            currency = CurrencyId::real(currency.code);
        } else if (*k != "virtual") {
            fail(ErrorCode::InvalidCurrency, "currency kind must be 'real' or 'virtual'");
        }
    }
    return {std::move(currency), quantity_field(p, "units")};
}

Position position_field(const json& obj, const char* name, const std::string& app_id)
{
    return position_from(field(obj, name), name, app_id);
}

Rational decimal_field(const json& obj, const char* name)
{
    const json& v = field(obj, name);
    if (!v.is_string()) {
        fail(ErrorCode::BadDecimal, std::string("field '") + name + "' must be a decimal string, not " + v.dump());
    }
    try {
        return Rational::from_decimal(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(ErrorCode::BadDecimal, e.what());
    }
}

json count_json(const Quantity& q)
{
    if (q.units() <= std::numeric_limits<std::uint64_t>::max()) {
        return q.units().convert_to<std::uint64_t>();
    }
    return q.str();
}

json position_json(const Position& p)
{
    json j{{"code", p.currency.code}, {"units", count_json(p.units)}};
    if (p.currency.is_real()) {
        j["kind"] = "real";
    }
    return j;
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

std::string derive_event_id(const json& j)
{
    json body = j;
    body.erase("event_id");
    const std::string canonical = body.dump();
    std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
    SHA256(reinterpret_cast<const unsigned char*>(canonical.data()), canonical.size(), digest.data());
    std::string out = "h-";
    char hex[3];
    for (std::size_t i = 0; i < 12; ++i) {
        std::snprintf(hex, sizeof hex, "%02x", digest[i]);
        out += hex;
    }
    return out;
}

EventRecord parse_event_json(const json& j)
{
    if (!j.is_object()) {
        fail(ErrorCode::MalformedJson, "event must be a JSON object");
    }

    EventRecord rec;
    const json& version = field(j, "schema_version");
    if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion) {
        fail(ErrorCode::UnsupportedSchemaVersion, "unsupported schema_version " + version.dump());
    }

    const std::string type = string_field(j, "type");
    Event& e = rec.event;
    e.app_id = string_field(j, "app_id");
    const std::string ts = string_field(j, "ts");
    try {
        e.timestamp = parse_utc_timestamp(ts);
    } catch (const std::invalid_argument& ex) {
        fail(ErrorCode::BadTimestamp, ex.what());
    }

    if (type == "real_purchase") {
        const json& paid = field(j, "paid");
        RealMoneyPurchase p;
        p.paid.amount = decimal_field(paid, "amount");
        p.paid.currency = CurrencyId::real(string_field(paid, "currency"));
        p.paid.currency.validate();
        p.received = position_field(j, "received", e.app_id);
        e.payload = std::move(p);
    } else if (type == "exchange") {
        e.payload = Exchange{position_field(j, "spent", e.app_id), position_field(j, "received", e.app_id)};
    } else if (type == "item_purchase") {
        ItemPurchase ip;
        ip.item_id = string_field(j, "item_id");
        ip.count = quantity_field(j, "count");
        const json& paid_with = field(j, "paid_with");
        if (!paid_with.is_array()) {
            fail(ErrorCode::MalformedJson, "field 'paid_with' must be an array");
        }
        for (const json& p : paid_with) {
            ip.paid_with.push_back(position_from(p, "paid_with", e.app_id));
        }
        e.payload = std::move(ip);
    } else if (type == "item_sale") {
        ItemSale s;
        s.item_id = string_field(j, "item_id");
        s.count = quantity_field(j, "count");
        s.proceeds = position_field(j, "proceeds", e.app_id);
        e.payload = std::move(s);
    } else if (type == "grant") {
        Grant g;
        g.received = position_field(j, "received", e.app_id);
        if (const auto r = j.find("reason"); r != j.end() && !r->is_null()) {
            if (!r->is_string()) {
                fail(ErrorCode::MalformedJson, "field 'reason' must be a string");
            }
            g.reason = r->get<std::string>();
        }
        e.payload = std::move(g);
    } else {
        fail(ErrorCode::UnknownEventType, "unknown event type '" + type + "'", {{"type", type}});
    }

    if (const auto id = j.find("event_id"); id != j.end() && !id->is_null()) {
        if (!id->is_string() || id->get<std::string>().empty()) {
            fail(ErrorCode::MalformedJson, "field 'event_id' must be a non-empty string");
        }
        e.event_id = id->get<std::string>();
    } else {
        e.event_id = derive_event_id(j);
        rec.generated_id = true;
    }
    return rec;
}

EventRecord parse_event_line(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::MalformedJson, std::string("malformed JSON: ") + e.what());
    }
    return parse_event_json(j);
}

json event_to_json(const Event& event)
{
    json j{{"schema_version", kSchemaVersion},
           {"event_id", event.event_id},
           {"app_id", event.app_id},
           {"ts", format_utc_timestamp(event.timestamp)}};
    std::visit(Overloaded{
                   [&](const RealMoneyPurchase& p) {
                       j["type"] = "real_purchase";
                       j["paid"] = {{"amount", p.paid.amount.to_exact_string()}, {"currency", p.paid.currency.code}};
                       j["received"] = position_json(p.received);
                   },
                   [&](const Exchange& x) {
                       j["type"] = "exchange";
                       j["spent"] = position_json(x.spent);
                       j["received"] = position_json(x.received);
                   },
                   [&](const ItemPurchase& ip) {
                       j["type"] = "item_purchase";
                       j["item_id"] = ip.item_id;
                       j["count"] = count_json(ip.count);
                       j["paid_with"] = json::array();
                       for (const Position& p : ip.paid_with) {
                           j["paid_with"].push_back(position_json(p));
                       }
                   },
                   [&](const ItemSale& s) {
                       j["type"] = "item_sale";
                       j["item_id"] = s.item_id;
                       j["count"] = count_json(s.count);
                       j["proceeds"] = position_json(s.proceeds);
                   },
                   [&](const Grant& g) {
                       j["type"] = "grant";
                       j["received"] = position_json(g.received);
                       j["reason"] = g.reason;
                   },
               },
               event.payload);
    return j;
}

std::string serialize_event(const Event& event)
{
    return event_to_json(event).dump();
}

bool IngestReport::all_duplicates() const
{
    return accepted == 0 && !rejected.empty() &&
           std::all_of(rejected.begin(), rejected.end(),
                       [](const IngestRejection& r) { return r.code == ErrorCode::DuplicateEventId; });
}

std::vector<std::string> split_lines(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

IngestReport ingest_log(std::span<const std::string> lines, Ledger& ledger, const IngestOptions& options)
{
    IngestReport report;
    struct Parsed {
        std::size_t line_no;
        Event event;
    };
    std::vector<Parsed> parsed;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        try {
            EventRecord rec = parse_event_line(line);
            if (options.required_app && rec.event.app_id != *options.required_app) {
                fail(ErrorCode::AppMismatch,
                     "event belongs to app '" + rec.event.app_id + "', expected '" + *options.required_app + "'");
            }
            parsed.push_back({i + 1, std::move(rec.event)});
        } catch (const LedgerError& e) {
            report.rejected.push_back({i + 1, e.code(), e.what()});
        }
    }

    std::stable_sort(parsed.begin(), parsed.end(),
                     [](const Parsed& a, const Parsed& b) { return a.event.timestamp < b.event.timestamp; });

    for (Parsed& p : parsed) {
        try {
            if (ledger.contains_event(p.event.app_id, p.event.event_id)) {
                fail(ErrorCode::DuplicateEventId, "duplicate event id '" + p.event.event_id + "'");
            }
            if (const auto head = ledger.head(p.event.app_id); head && p.event.timestamp < *head) {
                fail(ErrorCode::StaleEvent, "event " + p.event.event_id + " at " +
                                                format_utc_timestamp(p.event.timestamp) +
                                                " is older than the ledger head " + format_utc_timestamp(*head));
            }
            ledger.apply(p.event);
            ++report.accepted;
            report.applied.push_back(std::move(p.event));
        } catch (const LedgerError& e) {
            report.rejected.push_back({p.line_no, e.code(), e.what()});
        }
    }

    std::stable_sort(report.rejected.begin(), report.rejected.end(),
                     [](const IngestRejection& a, const IngestRejection& b) { return a.line_no < b.line_no; });
    return report;
}

} // namespace vctrack
