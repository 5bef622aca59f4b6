#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vctrack/rational.hpp"

namespace vctrack {

using Timestamp = std::chrono::sys_seconds;

enum class CurrencyKind { Real, Virtual };

/// A real currency (ISO-4217 style code, no app) or a virtual currency
/// scoped to one app.
struct CurrencyId {
    std::string app_id;
    std::string code;
    CurrencyKind kind = CurrencyKind::Virtual;

    static CurrencyId real(std::string code) { return {{}, std::move(code), CurrencyKind::Real}; }
    static CurrencyId in_app(std::string app, std::string code)
    {
        return {std::move(app), std::move(code), CurrencyKind::Virtual};
    }

    bool is_real() const { return kind == CurrencyKind::Real; }

    /// Throws LedgerError(InvalidCurrency) when the kind-specific shape is wrong.
    void validate() const;

    std::string label() const;

    friend bool operator==(const CurrencyId&, const CurrencyId&) = default;
    friend auto operator<=>(const CurrencyId&, const CurrencyId&) = default;
};

bool is_iso_currency_code(const std::string& code);

/// Non-negative integral count of currency units or items.
class Quantity {
public:
    Quantity() = default;
    Quantity(std::int64_t units); // NOLINT(implicit)
    explicit Quantity(BigInt units);

    const BigInt& units() const { return units_; }
    bool is_zero() const { return units_ == 0; }
    std::string str() const { return units_.str(); }
    Rational as_rational() const { return Rational(units_); }

    Quantity& operator+=(const Quantity& o);
    Quantity& operator-=(const Quantity& o);
    friend Quantity operator+(Quantity a, const Quantity& b) { return a += b; }
    friend Quantity operator-(Quantity a, const Quantity& b) { return a -= b; }
    friend Quantity operator*(Quantity a, const BigInt& m) { return Quantity(a.units_ * m); }

    friend bool operator==(const Quantity& a, const Quantity& b) { return a.units_ == b.units_; }
    friend std::strong_ordering operator<=>(const Quantity& a, const Quantity& b);

private:
    BigInt units_{0};
};

/// Real money in the ledger's report currency.
struct Money {
    Rational amount;
    CurrencyId currency = CurrencyId::real("USD");

    friend bool operator==(const Money&, const Money&) = default;
};

struct Position {
    CurrencyId currency;
    Quantity units;

    friend bool operator==(const Position&, const Position&) = default;
};

struct RealMoneyPurchase {
    Money paid;
    Position received;
    friend bool operator==(const RealMoneyPurchase&, const RealMoneyPurchase&) = default;
};

struct Exchange {
    Position spent;
    Position received;
    friend bool operator==(const Exchange&, const Exchange&) = default;
};

struct ItemPurchase {
    std::string item_id;
    Quantity count;
    std::vector<Position> paid_with;
    friend bool operator==(const ItemPurchase&, const ItemPurchase&) = default;
};

struct ItemSale {
    std::string item_id;
    Quantity count;
    Position proceeds;
    friend bool operator==(const ItemSale&, const ItemSale&) = default;
};

struct Grant {
    Position received;
    std::string reason;
    friend bool operator==(const Grant&, const Grant&) = default;
};

using Payload = std::variant<RealMoneyPurchase, Exchange, ItemPurchase, ItemSale, Grant>;

struct Event {
    std::string event_id;
    std::string app_id;
    Timestamp timestamp{};
    Payload payload;

    friend bool operator==(const Event&, const Event&) = default;
};

enum class Strategy { Fifo, Lifo };

std::string_view strategy_name(Strategy s);
/// Accepts "fifo"/"lifo" in any case; throws std::invalid_argument otherwise.
Strategy parse_strategy(std::string_view text);

enum class LotOrigin { RealMoneyPurchase, Exchange, Grant, ItemSale };

struct Lot {
    std::string lot_id;
    CurrencyId currency;
    Quantity remaining;
    Quantity initial;
    Rational unit_basis;
    std::string origin_event_id;
    LotOrigin origin = LotOrigin::Grant;
    Timestamp acquired_at{};
    std::uint64_t sequence = 0; // ledger apply order, breaks acquired_at ties
};

struct Consumption {
    std::string lot_id;
    CurrencyId currency;
    Quantity taken;
    Rational unit_basis;
    Rational basis_part; // taken * unit_basis
};

struct Attribution {
    std::string app_id;
    std::string event_id;
    std::string item_id;
    Quantity count;
    Timestamp timestamp{};
    std::vector<Consumption> consumptions;
    Money total_basis;

    /// Display-only per-item cost.
    Rational unit_cost() const;
};

} // namespace vctrack
