#include "vctrack/ledger.hpp"

#include <algorithm>

#include "vctrack/error.hpp"

namespace vctrack {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(const Quantity& q, const char* what)
{
    if (q.is_zero()) {
        throw LedgerError(ErrorCode::NonPositiveQuantity, std::string(what) + " must be positive");
    }
}

const Wallet kEmptyWallet;

} // namespace

Ledger::Ledger(LedgerConfig config) : config_(std::move(config))
{
    CurrencyId::real(config_.report_currency).validate();
}

std::vector<std::string> Ledger::apps() const
{
    std::vector<std::string> out;
    for (const auto& [app, _] : books_) {
        out.push_back(app);
    }
    return out;
}

bool Ledger::contains_event(const std::string& app_id, const std::string& event_id) const
{
    const auto it = books_.find(app_id);
    return it != books_.end() && it->second.event_ids.contains(event_id);
}

std::optional<Timestamp> Ledger::head(const std::string& app_id) const
{
    const auto it = books_.find(app_id);
    return it == books_.end() ? std::nullopt : it->second.head;
}

const Wallet& Ledger::wallet(const std::string& app_id) const
{
    const auto it = books_.find(app_id);
    return it == books_.end() ? kEmptyWallet : it->second.wallet;
}

std::vector<const Attribution*> Ledger::attributions(const std::string& app_id) const
{
    std::vector<const Attribution*> out;
    const auto it = books_.find(app_id);
    if (it == books_.end()) {
        return out;
    }
    for (const auto& id : it->second.attribution_order) {
        out.push_back(&it->second.attributions.at(id));
    }
    return out;
}

const Attribution* Ledger::find_attribution(const std::string& app_id, const std::string& event_id) const
{
    const auto it = books_.find(app_id);
    if (it == books_.end()) {
        return nullptr;
    }
    const auto a = it->second.attributions.find(event_id);
    return a == it->second.attributions.end() ? nullptr : &a->second;
}

const LotRecord* Ledger::find_lot(const std::string& app_id, const std::string& lot_id) const
{
    const auto it = books_.find(app_id);
    if (it == books_.end()) {
        return nullptr;
    }
    const auto l = it->second.lots.find(lot_id);
    return l == it->second.lots.end() ? nullptr : &l->second;
}

Rational Ledger::total_real_purchases(const std::optional<std::string>& app_id) const
{
    Rational total;
    for (const auto& [app, book] : books_) {
        if (!app_id || *app_id == app) {
            total += book.real_purchases;
        }
    }
    return total;
}

Rational Ledger::total_attributed(const std::optional<std::string>& app_id) const
{
    Rational total;
    for (const auto& [app, book] : books_) {
        if (app_id && *app_id != app) {
            continue;
        }
        for (const auto& [_, a] : book.attributions) {
            total += a.total_basis.amount;
        }
    }
    return total;
}

Rational Ledger::total_live_basis(const std::optional<std::string>& app_id) const
{
    Rational total;
    for (const auto& [app, book] : books_) {
        if (!app_id || *app_id == app) {
            total += book.wallet.live_basis();
        }
    }
    return total;
}

void Ledger::check_virtual(const Event& event, const Position& pos) const
{
    if (pos.currency.is_real()) {
        throw LedgerError(ErrorCode::RealCurrencyInVirtualPosition,
                          "real currency " + pos.currency.code + " used where a virtual currency is required",
                          {{"currency", pos.currency.code}});
    }
    pos.currency.validate();
    if (pos.currency.app_id != event.app_id) {
        throw LedgerError(ErrorCode::UnknownCurrency,
                          "currency " + pos.currency.label() + " does not belong to app " + event.app_id,
                          {{"currency", pos.currency.code}});
    }
    require_positive(pos.units, "quantity");
}

void Ledger::validate(const Event& event, const AppBook* book) const
{
    if (event.event_id.empty()) {
        throw LedgerError(ErrorCode::MissingField, "event_id is empty", {{"name", "event_id"}});
    }
    if (event.app_id.empty()) {
        throw LedgerError(ErrorCode::MissingField, "app_id is empty", {{"name", "app_id"}});
    }
    if (book && book->event_ids.contains(event.event_id)) {
        throw LedgerError(ErrorCode::DuplicateEventId, "duplicate event id '" + event.event_id + "'",
                          {{"event_id", event.event_id}});
    }

    // Total demand per currency, so repeated paid_with entries are checked together.
    std::map<CurrencyId, Quantity> demand;

    std::visit(Overloaded{
                   [&](const RealMoneyPurchase& p) {
                       if (!p.paid.currency.is_real()) {
                           throw LedgerError(ErrorCode::InvalidCurrency, "purchase must be paid in real currency");
                       }
                       p.paid.currency.validate();
                       if (p.paid.currency.code != config_.report_currency) {
                           throw LedgerError(ErrorCode::UnknownCurrency,
                                             "ledger reports in " + config_.report_currency + ", got " +
                                                 p.paid.currency.code,
                                             {{"currency", p.paid.currency.code}});
                       }
                       if (p.paid.amount.is_negative()) {
                           throw LedgerError(ErrorCode::NonPositiveQuantity, "paid amount is negative");
                       }
                       check_virtual(event, p.received);
                   },
                   [&](const Exchange& x) {
                       check_virtual(event, x.spent);
                       check_virtual(event, x.received);
                       demand[x.spent.currency] += x.spent.units;
                   },
                   [&](const ItemPurchase& ip) {
                       require_positive(ip.count, "item count");
                       if (ip.paid_with.empty()) {
                           throw LedgerError(ErrorCode::NonPositiveQuantity, "item purchase pays nothing");
                       }
                       for (const Position& pos : ip.paid_with) {
                           check_virtual(event, pos);
                           demand[pos.currency] += pos.units;
                       }
                   },
                   [&](const ItemSale& s) {
                       require_positive(s.count, "item count");
                       check_virtual(event, s.proceeds);
                   },
                   [&](const Grant& g) { check_virtual(event, g.received); },
               },
               event.payload);

    for (const auto& [currency, need] : demand) {
        if (!book || !book->wallet.knows(currency)) {
            throw LedgerError(ErrorCode::UnknownCurrency, "no " + currency.label() + " has ever been acquired",
                              {{"currency", currency.code}});
        }
        const Quantity have = book->wallet.balance(currency);
        if (have < need) {
            throw LedgerError(ErrorCode::InsufficientBalance,
                              "insufficient " + currency.label() + ": have " + have.str() + ", need " + need.str(),
                              {{"currency", currency.code}, {"have", have.str()}, {"need", need.str()}});
        }
    }
}

Lot Ledger::make_lot(const Event& event, const Position& received, Rational unit_basis, LotOrigin origin)
{
    Lot lot;
    lot.lot_id = event.event_id;
    lot.currency = received.currency;
    lot.remaining = received.units;
    lot.initial = received.units;
    lot.unit_basis = std::move(unit_basis);
    lot.origin_event_id = event.event_id;
    lot.origin = origin;
    lot.acquired_at = event.timestamp;
    lot.sequence = sequence_;
    return lot;
}

void Ledger::apply(const Event& event)
{
    const auto existing = books_.find(event.app_id);
    validate(event, existing == books_.end() ? nullptr : &existing->second);

    // Nothing below can fail for a validated event.
    AppBook& book = books_[event.app_id];
    if (book.wallet.app_id().empty()) {
        book.wallet = Wallet(event.app_id);
    }
    ++sequence_;

    auto add = [&](Lot lot, LotRecord record) {
        record.lot = lot;
        book.lots.emplace(lot.lot_id, std::move(record));
        book.wallet.add_lot(std::move(lot));
    };

    std::visit(Overloaded{
                   [&](const RealMoneyPurchase& p) {
                       const Rational basis = p.paid.amount / p.received.units.as_rational();
                       LotRecord rec;
                       rec.paid = p.paid;
                       add(make_lot(event, p.received, basis, LotOrigin::RealMoneyPurchase), std::move(rec));
                       book.real_purchases += p.paid.amount;
                   },
                   [&](const Exchange& x) {
                       auto consumed = book.wallet.consume(x.spent.currency, x.spent.units, config_.strategy);
                       Rational total;
                       for (const Consumption& c : consumed) {
                           total += c.basis_part;
                       }
                       LotRecord rec;
                       rec.spent = x.spent;
                       rec.sources = std::move(consumed);
                       add(make_lot(event, x.received, total / x.received.units.as_rational(), LotOrigin::Exchange),
                           std::move(rec));
                   },
                   [&](const ItemPurchase& ip) {
                       Attribution a;
                       a.app_id = event.app_id;
                       a.event_id = event.event_id;
                       a.item_id = ip.item_id;
                       a.count = ip.count;
                       a.timestamp = event.timestamp;
                       a.total_basis.currency = report_currency();
                       for (const Position& pos : ip.paid_with) {
                           for (Consumption& c : book.wallet.consume(pos.currency, pos.units, config_.strategy)) {
                               a.total_basis.amount += c.basis_part;
                               a.consumptions.push_back(std::move(c));
                           }
                       }
                       book.attribution_order.push_back(event.event_id);
                       book.attributions.emplace(event.event_id, std::move(a));
                   },
                   [&](const ItemSale& s) {
                       LotRecord rec;
                       rec.note = s.item_id;
                       add(make_lot(event, s.proceeds, Rational{}, LotOrigin::ItemSale), std::move(rec));
                   },
                   [&](const Grant& g) {
                       LotRecord rec;
                       rec.note = g.reason;
                       add(make_lot(event, g.received, Rational{}, LotOrigin::Grant), std::move(rec));
                   },
               },
               event.payload);

    book.event_ids.insert(event.event_id);
    if (!book.head || *book.head < event.timestamp) {
        book.head = event.timestamp;
    }
    log_.push_back(event);
}

void handle_item_sale(Ledger& ledger, const Event& sale)
{
    if (!std::holds_alternative<ItemSale>(sale.payload)) {
        throw std::invalid_argument("handle_item_sale: event is not an item sale");
    }
    ledger.apply(sale);
}

const Attribution& attribute_item_purchase(const Ledger& ledger, const std::string& app_id,
                                           const std::string& purchase_event_id)
{
    const Attribution* a = ledger.find_attribution(app_id, purchase_event_id);
    if (!a) {
        throw LedgerError(ErrorCode::UnknownAttribution, "no attribution '" + purchase_event_id + "' in app " + app_id,
                          {{"attribution_id", purchase_event_id}});
    }
    return *a;
}

} // namespace vctrack
