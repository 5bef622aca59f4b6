#include "vctrack/render.hpp"

#include <algorithm>
#include <sstream>

namespace vctrack {

using nlohmann::json;

json money_json(const Rational& amount)
{
    return {{"exact", amount.to_fraction_string()}, {"display", amount.to_display_string()}};
}

namespace {

json attribution_json(const Attribution& a, const TzOffset& tz)
{
    return {{"id", a.event_id},
            {"item_id", a.item_id},
            {"count", a.count.str()},
            {"ts", format_utc_timestamp(a.timestamp)},
            {"date", format_date(local_date(a.timestamp, tz))},
            {"cost", money_json(a.total_basis.amount)},
            {"unit_cost", money_json(a.unit_cost())}};
}

std::string optional_date(const std::optional<LocalDate>& d)
{
    return d ? format_date(*d) : std::string{};
}

} // namespace

json report_document(const Ledger& ledger, const ReportQuery& query)
{
    const ReportScope scope{query.app_id, query.range, query.tz};
    const auto rows = report_spend_by_currency(ledger, scope);

    json doc;
    doc["app_id"] = query.app_id;
    doc["report_currency"] = ledger.config().report_currency;
    doc["strategy"] = std::string(strategy_name(ledger.config().strategy));
    doc["query"] = {{"from", query.range.from ? json(optional_date(query.range.from)) : json(nullptr)},
                    {"to", query.range.to ? json(optional_date(query.range.to)) : json(nullptr)},
                    {"group", query.grouping ? std::string(grouping_name(*query.grouping)) : std::string("none")},
                    {"tz", query.tz.str()}};

    Rational spend;
    json currencies = json::array();
    for (const SpendRow& r : rows) {
        spend += r.real_spend.amount;
        currencies.push_back({{"currency", r.currency.code},
                              {"real_spend", money_json(r.real_spend.amount)},
                              {"virtual_bought", r.virtual_bought.str()}});
    }
    doc["currencies"] = std::move(currencies);

    Rational attributed;
    json attributions = json::array();
    for (const Attribution* a : ledger.attributions(query.app_id)) {
        if (!query.range.contains(local_date(a->timestamp, query.tz))) {
            continue;
        }
        attributed += a->total_basis.amount;
        attributions.push_back(attribution_json(*a, query.tz));
    }
    doc["attributions"] = std::move(attributions);
    doc["totals"] = {{"real_spend", money_json(spend)}, {"attributed", money_json(attributed)}};

    if (query.grouping) {
        json buckets = json::array();
        for (const DateBucket& b : report_by_date(ledger, *query.grouping, scope)) {
            json items = json::array();
            for (const Attribution& a : b.attributions) {
                items.push_back(attribution_json(a, query.tz));
            }
            buckets.push_back({{"bucket", b.label},
                               {"real_spend", money_json(b.real_spend.amount)},
                               {"attributed", money_json(b.attributed.amount)},
                               {"attributions", std::move(items)}});
        }
        doc["buckets"] = std::move(buckets);
    }
    return doc;
}

json trace_document(const Trace& trace)
{
    json paths = json::array();
    for (const TracePath& p : trace.paths) {
        json steps = json::array();
        for (const TraceStep& s : p.steps) {
            steps.push_back({{"description", s.description},
                             {"rate", s.rate_text},
                             {"rate_exact", s.rate.to_fraction_string()},
                             {"running_product", s.running_product.to_fraction_string()}});
        }
        paths.push_back({{"lot_id", p.lot_id},
                         {"currency", p.currency.code},
                         {"taken", p.taken.str()},
                         {"steps", std::move(steps)},
                         {"subtotal", money_json(p.subtotal)},
                         {"arithmetic", p.arithmetic}});
    }
    json doc{{"app_id", trace.app_id},
             {"attribution_id", trace.attribution_id},
             {"item_id", trace.item_id},
             {"count", trace.count.str()},
             {"total", money_json(trace.total_basis.amount)},
             {"paths", paths},
             {"arithmetic", trace.rendered_arithmetic()}};
    if (paths.size() == 1) {
        doc["steps"] = paths.front()["steps"];
    }
    return doc;
}

json ingest_report_document(const IngestReport& report)
{
    json rejected = json::array();
    for (const IngestRejection& r : report.rejected) {
        rejected.push_back({{"line", r.line_no}, {"code", error_code_name(r.code)}, {"message", r.message}});
    }
    return {{"accepted", report.accepted}, {"rejected", std::move(rejected)}};
}

std::string to_text(const json& doc)
{
    return doc.dump(2) + "\n";
}

namespace {

std::string display(const json& money) { return money.at("display").get<std::string>(); }

// Pads to `width` terminal columns, counting UTF-8 code points.
std::string pad(std::string s, std::size_t width)
{
    const auto columns = static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
    if (columns < width) {
        s.append(width - columns, ' ');
    }
    return s;
}

std::string item_label(const json& a)
{
    const std::string count = a.at("count").get<std::string>();
    const std::string item = a.at("item_id").get<std::string>();
    return count == "1" ? item : count + "× " + item;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string render_report_table(const json& doc)
{
    const std::string sym = currency_prefix(doc.at("report_currency").get<std::string>());
    std::ostringstream os;
    os << "app " << doc.at("app_id").get<std::string>() << " (" << doc.at("strategy").get<std::string>()
       << ", " << doc.at("report_currency").get<std::string>() << ")\n\n";

    os << pad("currency", 16) << pad("real spend", 14) << "bought with money\n";
    for (const json& r : doc.at("currencies")) {
        os << pad(r.at("currency").get<std::string>(), 16) << pad(sym + display(r.at("real_spend")), 14)
           << r.at("virtual_bought").get<std::string>() << "\n";
    }

    auto attribution_lines = [&](const json& list, const char* indent) {
        for (const json& a : list) {
            os << indent << pad(a.at("date").get<std::string>(), 12) << pad(item_label(a), 24)
               << pad(sym + display(a.at("cost")), 10) << "[" << a.at("id").get<std::string>() << "]\n";
        }
    };

    if (doc.contains("buckets")) {
        for (const json& b : doc.at("buckets")) {
            os << "\n" << b.at("bucket").get<std::string>() << "  " << sym << display(b.at("real_spend"))
               << " spent, " << sym << display(b.at("attributed")) << " in items\n";
            attribution_lines(b.at("attributions"), "  ");
        }
    } else {
        os << "\nitems\n";
        attribution_lines(doc.at("attributions"), "  ");
    }
    os << "\ntotal  " << sym << display(doc.at("totals").at("real_spend")) << " spent, " << sym
       << display(doc.at("totals").at("attributed")) << " in items\n";
    return os.str();
}

std::string render_report_csv(const json& doc)
{
    std::ostringstream os;
    os << "section,bucket,currency,item_id,count,attribution_id,real_spend,virtual_bought,cost\n";
    for (const json& r : doc.at("currencies")) {
        os << "currency,," << csv_field(r.at("currency").get<std::string>()) << ",,,,"
           << display(r.at("real_spend")) << "," << r.at("virtual_bought").get<std::string>() << ",\n";
    }
    auto attribution_rows = [&](const json& list, const std::string& bucket) {
        for (const json& a : list) {
            os << "attribution," << bucket << ",," << csv_field(a.at("item_id").get<std::string>()) << ","
               << a.at("count").get<std::string>() << "," << csv_field(a.at("id").get<std::string>()) << ",,,"
               << display(a.at("cost")) << "\n";
        }
    };
    if (doc.contains("buckets")) {
        for (const json& b : doc.at("buckets")) {
            const std::string label = b.at("bucket").get<std::string>();
            os << "bucket," << label << ",,,,," << display(b.at("real_spend")) << ",," << display(b.at("attributed"))
               << "\n";
            attribution_rows(b.at("attributions"), label);
        }
    } else {
        attribution_rows(doc.at("attributions"), "");
    }
    os << "total,,,,,," << display(doc.at("totals").at("real_spend")) << ",,"
       << display(doc.at("totals").at("attributed")) << "\n";
    return os.str();
}

std::string render_trace_table(const Trace& trace, const std::string& report_currency)
{
    const std::string sym = currency_prefix(report_currency);
    std::ostringstream os;
    os << "attribution " << trace.attribution_id << ": "
       << (trace.count.str() == "1" ? trace.item_id : trace.count.str() + "× " + trace.item_id) << " cost " << sym
       << trace.total_basis.amount.to_display_string() << " (exact " << trace.total_basis.amount.to_fraction_string()
       << ")\n";
    for (std::size_t i = 0; i < trace.paths.size(); ++i) {
        const TracePath& p = trace.paths[i];
        os << "\npath " << (i + 1) << ": " << p.taken.str() << " " << p.currency.code << " from lot " << p.lot_id
           << "\n";
        std::size_t n = 1;
        for (const TraceStep& s : p.steps) {
            os << "  " << n++ << ". " << pad(s.description, 44) << " × " << pad(s.rate_text, 14) << " = "
               << s.running_product.to_exact_string() << "\n";
        }
    }
    os << "\n" << trace.arithmetic() << " = " << sym << trace.total_basis.amount.to_display_string() << "\n";
    return os.str();
}

} // namespace vctrack
