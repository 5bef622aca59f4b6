#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vctrack/types.hpp"
#include "vctrack/wallet.hpp"

namespace vctrack {

struct LedgerConfig {
    Strategy strategy = Strategy::Fifo;
    std::string report_currency = "USD";
};

/// Everything needed to explain where a lot's basis came from, kept after
/// the lot itself is exhausted.
struct LotRecord {
    Lot lot; // as created
    std::optional<Money> paid;            // RealMoneyPurchase
    std::optional<Position> spent;        // Exchange
    std::vector<Consumption> sources;     // Exchange
    std::string note;                     // grant reason or sold item id
};

/// Event-sourced lot ledger. Holds any number of apps; each app has its own
/// wallet, lot history and attributions. Copyable value type: a copy is an
/// independent snapshot.
class Ledger {
public:
    Ledger() = default;
    explicit Ledger(LedgerConfig config);

    const LedgerConfig& config() const { return config_; }
    CurrencyId report_currency() const { return CurrencyId::real(config_.report_currency); }

    /// Applies one event. Atomic: on any LedgerError nothing changes.
    void apply(const Event& event);

    const std::vector<Event>& events() const { return log_; }
    std::vector<std::string> apps() const;
    bool has_app(const std::string& app_id) const { return books_.contains(app_id); }
    bool contains_event(const std::string& app_id, const std::string& event_id) const;
    std::optional<Timestamp> head(const std::string& app_id) const;

    const Wallet& wallet(const std::string& app_id) const;
    /// Attributions of one app in apply order.
    std::vector<const Attribution*> attributions(const std::string& app_id) const;
    const Attribution* find_attribution(const std::string& app_id, const std::string& event_id) const;
    const LotRecord* find_lot(const std::string& app_id, const std::string& lot_id) const;

    /// Σ RealMoneyPurchase amounts, over one app or (nullopt) all apps.
    Rational total_real_purchases(const std::optional<std::string>& app_id = std::nullopt) const;
    Rational total_attributed(const std::optional<std::string>& app_id = std::nullopt) const;
    Rational total_live_basis(const std::optional<std::string>& app_id = std::nullopt) const;

private:
    struct AppBook {
        Wallet wallet;
        std::set<std::string> event_ids;
        std::map<std::string, LotRecord> lots;
        std::map<std::string, Attribution> attributions;
        std::vector<std::string> attribution_order;
        std::optional<Timestamp> head;
        Rational real_purchases;
    };

    void validate(const Event& event, const AppBook* book) const;
    void check_virtual(const Event& event, const Position& pos) const;
    Lot make_lot(const Event& event, const Position& received, Rational unit_basis, LotOrigin origin);

    LedgerConfig config_;
    std::map<std::string, AppBook> books_;
    std::vector<Event> log_;
    std::uint64_t sequence_ = 0;
};

/// Applies a RealMoneyPurchase/Exchange/ItemPurchase/ItemSale/Grant; a thin
/// alias over Ledger::apply for call sites that read better as a function.
inline void apply_event(Ledger& ledger, const Event& event) { ledger.apply(event); }

/// Records an ItemSale. Proceeds arrive as a zero-basis lot and earlier
/// attributions of the sold item are left untouched.
void handle_item_sale(Ledger& ledger, const Event& sale);

/// Looks up the attribution recorded for an applied ItemPurchase.
/// Throws LedgerError(UnknownAttribution).
const Attribution& attribute_item_purchase(const Ledger& ledger, const std::string& app_id,
                                           const std::string& purchase_event_id);

} // namespace vctrack
