#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace vctrack {

/// Demo shop catalog: real-money packs, currency exchanges and items.
///
///   {"packs":     [{"pack": "gems_2500", "price": "19.99", "currency": "USD",
///                   "receive": {"code": "gems", "units": 2500}}],
///    "exchanges": [{"exchange": "gold_1000", "spend": {"code": "gems", "units": 60},
///                   "receive": {"code": "gold", "units": 1000}}],
///    "items":     [{"item": "magic_chest", "price": {"code": "gems", "units": 250}}]}
class Catalog {
public:
    /// Throws std::runtime_error on unreadable or invalid files.
    static Catalog load(const std::filesystem::path& path);
    static Catalog from_json(nlohmann::json doc);

    const nlohmann::json& document() const { return doc_; }
    /// Sorted keys, no whitespace.
    std::string canonical() const { return doc_.dump(); }

private:
    explicit Catalog(nlohmann::json doc) : doc_(std::move(doc)) {}
    nlohmann::json doc_;
};

} // namespace vctrack
