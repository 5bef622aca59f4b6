#pragma once

#include <span>
#include <string>
#include <vector>

#include "vctrack/ledger.hpp"

namespace vctrack {

/// Product of a chain of exchange rates, item end first. Throws
/// LedgerError(EmptyChain) for an empty chain.
Rational chain_price(std::span<const Rational> rates);

struct TraceStep {
    std::string description;
    std::string rate_text; // rate as a reader would write it, e.g. "250/2500"
    Rational rate;
    Rational running_product;
};

/// One route from the item back to real money through a single consumed lot
/// (and, for blended exchange lots, a single source lot per hop).
struct TracePath {
    std::string lot_id;
    CurrencyId currency;
    Quantity taken;
    std::vector<TraceStep> steps;
    Rational subtotal;
    std::string arithmetic; // "250/2500 × 19.99"

    std::vector<Rational> rates() const;
};

struct Trace {
    std::string app_id;
    std::string attribution_id;
    std::string item_id;
    Quantity count;
    Money total_basis;
    std::vector<TracePath> paths;

    /// Left-hand side of the arithmetic line; paths are joined with " + ".
    std::string arithmetic() const;
    /// "250/2500 × 19.99 = 1.99"
    std::string rendered_arithmetic() const;
};

/// Walks an attribution back to real money. Throws
/// LedgerError(UnknownAttribution).
Trace build_trace(const Ledger& ledger, const std::string& app_id, const std::string& attribution_id);

/// "$" for USD, otherwise the code followed by a space.
std::string currency_prefix(const std::string& code);

} // namespace vctrack
