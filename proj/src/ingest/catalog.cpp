#include "vctrack/catalog.hpp"

#include <fstream>
#include <stdexcept>

#include "vctrack/rational.hpp"
#include "vctrack/types.hpp"

namespace vctrack {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw std::runtime_error("invalid catalog: " + what);
    }
}

void check_amount(const json& j, const std::string& where)
{
    require(j.is_object() && j.contains("code") && j["code"].is_string() && j.contains("units") &&
                j["units"].is_number_unsigned() && j["units"].get<std::uint64_t>() > 0,
            where + " needs {code, units > 0}");
}

void check_list(const json& doc, const char* key, const char* id_key, auto&& check_entry)
{
    if (!doc.contains(key)) {
        return;
    }
    require(doc[key].is_array(), std::string(key) + " must be an array");
    for (const json& e : doc[key]) {
        require(e.is_object() && e.contains(id_key) && e[id_key].is_string(),
                std::string(key) + " entries need a string '" + id_key + "'");
        check_entry(e, e[id_key].get<std::string>());
    }
}

} // namespace

Catalog Catalog::from_json(json doc)
{
    require(doc.is_object(), "top level must be an object");
    check_list(doc, "packs", "pack", [](const json& e, const std::string& id) {
        require(e.contains("price") && e["price"].is_string(), "pack " + id + " needs a decimal string price");
        try {
            (void)Rational::from_decimal(e["price"].get<std::string>());
        } catch (const std::invalid_argument&) {
            require(false, "pack " + id + " has a malformed price");
        }
        require(e.contains("currency") && e["currency"].is_string() &&
                    is_iso_currency_code(e["currency"].get<std::string>()),
                "pack " + id + " needs an ISO currency");
        require(e.contains("receive"), "pack " + id + " needs 'receive'");
        check_amount(e["receive"], "pack " + id + " receive");
    });
    check_list(doc, "exchanges", "exchange", [](const json& e, const std::string& id) {
        require(e.contains("spend") && e.contains("receive"), "exchange " + id + " needs spend and receive");
        check_amount(e["spend"], "exchange " + id + " spend");
        check_amount(e["receive"], "exchange " + id + " receive");
    });
    check_list(doc, "items", "item", [](const json& e, const std::string& id) {
        require(e.contains("price"), "item " + id + " needs a price");
        check_amount(e["price"], "item " + id + " price");
    });
    return Catalog(std::move(doc));
}

Catalog Catalog::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read catalog " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("catalog " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(std::move(doc));
}

} // namespace vctrack
