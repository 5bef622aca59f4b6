#pragma once

#include <map>
#include <string>
#include <vector>

#include "vctrack/types.hpp"

namespace vctrack {

/// Live lots of one app, per currency, ordered by (acquired_at, sequence).
/// Exhausted lots are dropped.
class Wallet {
public:
    Wallet() = default;
    explicit Wallet(std::string app_id) : app_id_(std::move(app_id)) {}

    const std::string& app_id() const { return app_id_; }

    Quantity balance(const CurrencyId& currency) const;
    const std::vector<Lot>& lots(const CurrencyId& currency) const;
    std::vector<CurrencyId> currencies() const;
    bool knows(const CurrencyId& currency) const { return lots_.contains(currency); }

    /// Inserts keeping acquisition order. A zero-remaining lot is ignored.
    void add_lot(Lot lot);

    /// Drains `qty` units oldest-first (Fifo) or newest-first (Lifo).
    /// Throws LedgerError(InsufficientBalance) without touching the wallet
    /// when the balance is short.
    std::vector<Consumption> consume(const CurrencyId& currency, const Quantity& qty, Strategy strategy);

    /// Σ remaining × unit_basis over every live lot.
    Rational live_basis() const;

private:
    std::string app_id_;
    // Currencies stay registered after their lots run out so they remain known.
    std::map<CurrencyId, std::vector<Lot>> lots_;
};

} // namespace vctrack
