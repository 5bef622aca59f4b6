#include <doctest.h>

#include <random>
#include <sstream>

#include "support/generators.hpp"
#include "vctrack/casestudy.hpp"
#include "vctrack/catalog.hpp"
#include "vctrack/render.hpp"

using namespace vctrack;
using nlohmann::json;

namespace {

Ledger case_study_ledger()
{
    Ledger ledger;
    const auto lines = casestudy::log_lines();
    ingest_log(lines, ledger);
    return ledger;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("money renders exact and display forms")
{
    CHECK(money_json(Rational(1999, 1000)) == json{{"exact", "1999/1000"}, {"display", "1.99"}});
}

TEST_CASE("case-study report document")
{
    const Ledger ledger = case_study_ledger();
    ReportQuery q;
    q.app_id = casestudy::kApp;
    q.grouping = Grouping::Day;
    const json doc = report_document(ledger, q);

    REQUIRE(doc["buckets"].size() == 1);
    const json& bucket = doc["buckets"][0];
    CHECK(bucket["bucket"] == "2024-03-15");
    CHECK(bucket["real_spend"]["display"] == "19.99");
    REQUIRE(bucket["attributions"].size() == 2);
    CHECK(bucket["attributions"][0]["cost"]["display"] == "1.99");
    CHECK(bucket["attributions"][0]["cost"]["exact"] == "1999/1000");
    CHECK(bucket["attributions"][1]["cost"]["display"] == "0.38");
    CHECK(bucket["attributions"][1]["cost"]["exact"] == "5997/15625");
    CHECK(bucket["attributions"][1]["count"] == "8");
    CHECK(doc["currencies"][0]["currency"] == "gems");
    CHECK(doc["currencies"][0]["real_spend"]["exact"] == "1999/100");
    CHECK(doc["currencies"][1]["currency"] == "gold");
    CHECK(doc["currencies"][1]["real_spend"]["exact"] == "0");

    // Money never appears as a JSON number.
    std::function<void(const json&)> no_floats = [&](const json& j) {
        CHECK_FALSE(j.is_number_float());
        for (const auto& child : j) {
            if (j.is_structured()) {
                no_floats(child);
            }
        }
    };
    no_floats(doc);
}

TEST_CASE("range before any events gives an empty document")
{
    const Ledger ledger = case_study_ledger();
    ReportQuery q;
    q.app_id = casestudy::kApp;
    q.grouping = Grouping::Day;
    q.range = {parse_date("2020-01-01"), parse_date("2020-12-31")};
    const json doc = report_document(ledger, q);
    CHECK(doc["buckets"].empty());
    CHECK(doc["attributions"].empty());
    CHECK(doc["currencies"].empty());
    CHECK(doc["totals"]["real_spend"]["exact"] == "0");
}

TEST_CASE("ungrouped totals equal the sum of day buckets")
{
    std::mt19937_64 rng(31);
    for (int round = 0; round < 50; ++round) {
        const Ledger ledger = testing::replay(testing::random_general_log(rng), Strategy::Fifo);
        ReportQuery none;
        none.app_id = testing::kApp;
        ReportQuery day = none;
        day.grouping = Grouping::Day;
        const json flat = report_document(ledger, none);
        const json grouped = report_document(ledger, day);
        CHECK_FALSE(flat.contains("buckets"));
        Rational spend;
        Rational attributed;
        for (const json& b : grouped["buckets"]) {
            spend += Rational::parse(b["real_spend"]["exact"].get<std::string>());
            attributed += Rational::parse(b["attributed"]["exact"].get<std::string>());
        }
        CHECK(spend == Rational::parse(flat["totals"]["real_spend"]["exact"].get<std::string>()));
        CHECK(attributed == Rational::parse(flat["totals"]["attributed"]["exact"].get<std::string>()));
    }
}

TEST_CASE("csv and json carry the same values")
{
    std::mt19937_64 rng(4);
    for (int round = 0; round < 20; ++round) {
        const Ledger ledger = testing::replay(testing::random_general_log(rng), Strategy::Lifo);
        ReportQuery q;
        q.app_id = testing::kApp;
        q.grouping = Grouping::Day;
        const json doc = report_document(ledger, q);
        const auto rows = parse_csv(render_report_csv(doc));

        std::vector<std::string> csv_costs;
        std::vector<std::string> csv_spend;
        std::string csv_total;
        for (const auto& r : rows) {
            if (r[0] == "attribution") {
                csv_costs.push_back(r[8]);
            } else if (r[0] == "currency") {
                csv_spend.push_back(r[2] + "=" + r[6] + "/" + r[7]);
            } else if (r[0] == "total") {
                csv_total = r[6];
            }
        }
        std::vector<std::string> json_costs;
        for (const json& b : doc["buckets"]) {
            for (const json& a : b["attributions"]) {
                json_costs.push_back(a["cost"]["display"]);
            }
        }
        std::vector<std::string> json_spend;
        for (const json& c : doc["currencies"]) {
            json_spend.push_back(c["currency"].get<std::string>() + "=" + c["real_spend"]["display"].get<std::string>() +
                                 "/" + c["virtual_bought"].get<std::string>());
        }
        CHECK(csv_costs == json_costs);
        CHECK(csv_spend == json_spend);
        CHECK(csv_total == doc["totals"]["real_spend"]["display"]);
    }
}

TEST_CASE("table rendering shows the review page")
{
    const Ledger ledger = case_study_ledger();
    ReportQuery q;
    q.app_id = casestudy::kApp;
    q.grouping = Grouping::Day;
    const std::string table = render_report_table(report_document(ledger, q));
    CHECK(table.find("magic_chest") != std::string::npos);
    CHECK(table.find("$1.99") != std::string::npos);
    CHECK(table.find("8× wizard") != std::string::npos);
    CHECK(table.find("$0.38") != std::string::npos);
    CHECK(table.find("$19.99 spent") != std::string::npos);
}

TEST_CASE("trace document")
{
    const Ledger ledger = case_study_ledger();
    const json doc = trace_document(build_trace(ledger, casestudy::kApp, casestudy::kChestId));
    CHECK(doc["arithmetic"] == "250/2500 × 19.99 = 1.99");
    REQUIRE(doc["steps"].size() == 2);
    CHECK(doc["steps"][1]["running_product"] == "1999/1000");
    CHECK(doc["total"]["exact"] == "1999/1000");

    const std::string table = render_trace_table(build_trace(ledger, casestudy::kApp, casestudy::kChestId), "USD");
    CHECK(table.find("× 19.99 = $1.99") != std::string::npos);
}

TEST_CASE("catalog validation and canonical form")
{
    const json good = json::parse(R"({"items":[{"item":"chest","price":{"code":"gems","units":250}}],
        "packs":[{"pack":"gems_2500","price":"19.99","currency":"USD","receive":{"code":"gems","units":2500}}]})");
    const Catalog c = Catalog::from_json(good);
    CHECK(c.canonical() == good.dump());

    json bad = good;
    bad["packs"][0]["price"] = 19.99;
    CHECK_THROWS_AS(Catalog::from_json(bad), std::runtime_error);
    bad = good;
    bad["items"][0]["price"]["units"] = 0;
    CHECK_THROWS_AS(Catalog::from_json(bad), std::runtime_error);
    CHECK_THROWS_AS(Catalog::load("/nonexistent/catalog.json"), std::runtime_error);
}
