#include "vctrack/wallet.hpp"

#include <algorithm>

#include "vctrack/error.hpp"

namespace vctrack {

namespace {

const std::vector<Lot> kNoLots;

bool acquired_before(const Lot& a, const Lot& b)
{
    if (a.acquired_at != b.acquired_at) {
        return a.acquired_at < b.acquired_at;
    }
    return a.sequence < b.sequence;
}

} // namespace

Quantity Wallet::balance(const CurrencyId& currency) const
{
    Quantity total;
    for (const Lot& lot : lots(currency)) {
        total += lot.remaining;
    }
    return total;
}

const std::vector<Lot>& Wallet::lots(const CurrencyId& currency) const
{
    const auto it = lots_.find(currency);
    return it == lots_.end() ? kNoLots : it->second;
}

std::vector<CurrencyId> Wallet::currencies() const
{
    std::vector<CurrencyId> out;
    out.reserve(lots_.size());
    for (const auto& [currency, _] : lots_) {
        out.push_back(currency);
    }
    return out;
}

void Wallet::add_lot(Lot lot)
{
    auto& seq = lots_[lot.currency];
    if (lot.remaining.is_zero()) {
        return;
    }
    const auto pos = std::upper_bound(seq.begin(), seq.end(), lot, acquired_before);
    seq.insert(pos, std::move(lot));
}

std::vector<Consumption> Wallet::consume(const CurrencyId& currency, const Quantity& qty, Strategy strategy)
{
    const Quantity have = balance(currency);
    if (have < qty) {
        throw LedgerError(ErrorCode::InsufficientBalance,
                          "insufficient " + currency.label() + ": have " + have.str() + ", need " + qty.str(),
                          {{"currency", currency.code}, {"have", have.str()}, {"need", qty.str()}});
    }

    std::vector<Consumption> out;
    if (qty.is_zero()) {
        return out;
    }
    auto& seq = lots_[currency];
    Quantity left = qty;

    auto take_from = [&](Lot& lot) {
        const Quantity taken = std::min(lot.remaining, left);
        lot.remaining -= taken;
        left -= taken;
        out.push_back({lot.lot_id, currency, taken, lot.unit_basis, taken.as_rational() * lot.unit_basis});
    };

    if (strategy == Strategy::Fifo) {
        for (auto it = seq.begin(); it != seq.end() && !left.is_zero(); ++it) {
            take_from(*it);
        }
    } else {
        for (auto it = seq.rbegin(); it != seq.rend() && !left.is_zero(); ++it) {
            take_from(*it);
        }
    }
    std::erase_if(seq, [](const Lot& lot) { return lot.remaining.is_zero(); });
    return out;
}

Rational Wallet::live_basis() const
{
    Rational total;
    for (const auto& [_, seq] : lots_) {
        for (const Lot& lot : seq) {
            total += lot.remaining.as_rational() * lot.unit_basis;
        }
    }
    return total;
}

} // namespace vctrack
