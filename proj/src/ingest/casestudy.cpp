#include "vctrack/casestudy.hpp"

#include <nlohmann/json.hpp>

namespace vctrack::casestudy {

std::vector<std::string> log_lines(unsigned scale)
{
    using nlohmann::json;
    const std::uint64_t m = scale;
    auto units = [&](const char* code, std::uint64_t n) { return json{{"code", code}, {"units", n * m}}; };
    auto base = [&](const char* id, const char* type, const char* ts) {
        return json{{"schema_version", 1}, {"event_id", id}, {"app_id", kApp}, {"type", type}, {"ts", ts}};
    };

    std::vector<json> events;

    json buy_gems = base("cs-1", "real_purchase", "2024-03-15T10:00:00Z");
    buy_gems["paid"] = {{"amount", "19.99"}, {"currency", "USD"}};
    buy_gems["received"] = units("gems", 2500);
    events.push_back(buy_gems);

    json chest = base(kChestId, "item_purchase", "2024-03-15T10:02:00Z");
    chest["item_id"] = "magic_chest";
    chest["count"] = 1 * m;
    chest["paid_with"] = json::array({units("gems", 250)});
    events.push_back(chest);

    json gold = base("cs-3", "exchange", "2024-03-15T10:05:00Z");
    gold["spent"] = units("gems", 60);
    gold["received"] = units("gold", 1000);
    events.push_back(gold);

    json wizards = base(kWizardsId, "item_purchase", "2024-03-15T10:06:00Z");
    wizards["item_id"] = "wizard";
    wizards["count"] = 8 * m;
    wizards["paid_with"] = json::array({units("gold", 800)});
    events.push_back(wizards);

    json reward = base("cs-5", "grant", "2024-03-15T18:00:00Z");
    reward["received"] = units("gems", 20);
    reward["reason"] = "daily quest reward";
    events.push_back(reward);

    json resale = base("cs-6", "item_sale", "2024-03-15T18:30:00Z");
    resale["item_id"] = "wizard";
    resale["count"] = 1 * m;
    resale["proceeds"] = units("gold", 50);
    events.push_back(resale);

    std::vector<std::string> lines;
    for (const json& e : events) {
        lines.push_back(e.dump());
    }
    return lines;
}

} // namespace vctrack::casestudy
