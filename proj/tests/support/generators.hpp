#pragma once

// Random event-log generators and the unit-provenance oracle used by the
// property and acceptance suites. Nothing here calls into Wallet or Ledger
// internals; the oracle tracks every currency unit on its own.

#include <deque>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vctrack/ledger.hpp"

namespace vctrack::testing {

inline const std::string kApp = "app";

inline Timestamp at(long long seconds)
{
    return Timestamp{std::chrono::seconds{1'710'000'000 + seconds}};
}

inline CurrencyId vc(const std::string& code)
{
    return CurrencyId::in_app(kApp, code);
}

inline Event purchase(std::string id, long long t, Rational amount, const std::string& code, std::int64_t units)
{
    return {std::move(id), kApp, at(t),
            RealMoneyPurchase{Money{std::move(amount), CurrencyId::real("USD")}, Position{vc(code), units}}};
}

inline Event exchange(std::string id, long long t, const std::string& from, std::int64_t spent, const std::string& to,
                      std::int64_t received)
{
    return {std::move(id), kApp, at(t), Exchange{Position{vc(from), spent}, Position{vc(to), received}}};
}

inline Event buy_item(std::string id, long long t, std::string item, std::int64_t count,
                      std::vector<std::pair<std::string, std::int64_t>> paid)
{
    ItemPurchase ip{std::move(item), count, {}};
    for (auto& [code, units] : paid) {
        ip.paid_with.push_back({vc(code), units});
    }
    return {std::move(id), kApp, at(t), std::move(ip)};
}

inline Event sell_item(std::string id, long long t, std::string item, std::int64_t count, const std::string& code,
                       std::int64_t units)
{
    return {std::move(id), kApp, at(t), ItemSale{std::move(item), count, Position{vc(code), units}}};
}

inline Event grant(std::string id, long long t, const std::string& code, std::int64_t units,
                   std::string reason = "reward")
{
    return {std::move(id), kApp, at(t), Grant{Position{vc(code), units}, std::move(reason)}};
}

/// Tags each atomic unit with the real money it carries. Consumption takes
/// units from the front (FIFO) or back (LIFO) of the per-currency queue;
/// exchanged units share the consumed value equally.
class UnitOracle {
public:
    explicit UnitOracle(Strategy strategy) : strategy_(strategy) {}

    void apply(const Event& e)
    {
        if (const auto* p = std::get_if<RealMoneyPurchase>(&e.payload)) {
            push(p->received, p->paid.amount / p->received.units.as_rational());
            injected_ += p->paid.amount;
        } else if (const auto* x = std::get_if<Exchange>(&e.payload)) {
            const Rational value = pop(x->spent);
            push(x->received, value / x->received.units.as_rational());
        } else if (const auto* ip = std::get_if<ItemPurchase>(&e.payload)) {
            Rational total;
            for (const Position& pos : ip->paid_with) {
                total += pop(pos);
            }
            attributions_[e.event_id] = total;
        } else if (const auto* s = std::get_if<ItemSale>(&e.payload)) {
            push(s->proceeds, Rational{});
        } else if (const auto* g = std::get_if<Grant>(&e.payload)) {
            push(g->received, Rational{});
        }
    }

    const std::map<std::string, Rational>& attributions() const { return attributions_; }
    const Rational& injected() const { return injected_; }

    Rational held_value() const
    {
        Rational total;
        for (const auto& [_, q] : units_) {
            for (const Rational& v : q) {
                total += v;
            }
        }
        return total;
    }

private:
    void push(const Position& pos, const Rational& per_unit)
    {
        auto& q = units_[pos.currency.code];
        const auto n = pos.units.units().convert_to<std::size_t>();
        for (std::size_t i = 0; i < n; ++i) {
            q.push_back(per_unit);
        }
    }

    Rational pop(const Position& pos)
    {
        auto& q = units_[pos.currency.code];
        const auto n = pos.units.units().convert_to<std::size_t>();
        Rational total;
        for (std::size_t i = 0; i < n; ++i) {
            if (strategy_ == Strategy::Fifo) {
                total += q.front();
                q.pop_front();
            } else {
                total += q.back();
                q.pop_back();
            }
        }
        return total;
    }

    Strategy strategy_;
    std::map<std::string, std::deque<Rational>> units_;
    std::map<std::string, Rational> attributions_;
    Rational injected_;
};

struct GeneralLogOptions {
    int max_events = 50;
    std::int64_t max_quantity = 1000;
    bool allow_ties = true; // repeat timestamps now and then
};

/// Valid random log over three currencies: purchases, exchanges, item
/// purchases (sometimes mixed-currency), resales and grants.
inline std::vector<Event> random_general_log(std::mt19937_64& rng, const GeneralLogOptions& opt = {})
{
    static const std::vector<std::string> codes = {"gems", "gold", "elixir"};
    std::map<std::string, std::int64_t> balance;
    std::vector<Event> log;

    auto uniform = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    auto pick_code = [&] { return codes[static_cast<std::size_t>(uniform(0, 2))]; };
    auto funded = [&] {
        std::vector<std::string> out;
        for (const auto& [c, b] : balance) {
            if (b > 0) {
                out.push_back(c);
            }
        }
        return out;
    };

    const int n = static_cast<int>(uniform(1, opt.max_events));
    long long t = 0;
    for (int i = 0; i < n; ++i) {
        if (!opt.allow_ties || uniform(0, 3) != 0) {
            t += uniform(1, 7200);
        }
        const std::string id = "e" + std::to_string(i);
        const auto have = funded();
        int kind = static_cast<int>(uniform(0, 9));
        if (have.empty() && kind >= 2 && kind <= 6) {
            kind = 0;
        }
        if (kind <= 1) {
            const std::string c = pick_code();
            const std::int64_t units = uniform(1, opt.max_quantity);
            log.push_back(purchase(id, t, Rational(uniform(0, 9999), 100), c, units));
            balance[c] += units;
        } else if (kind <= 3) {
            const std::string from = have[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(have.size()) - 1))];
            const std::string to = pick_code();
            const std::int64_t spent = uniform(1, balance[from]);
            const std::int64_t got = uniform(1, opt.max_quantity);
            log.push_back(exchange(id, t, from, spent, to, got));
            balance[from] -= spent;
            balance[to] += got;
        } else if (kind <= 6) {
            std::vector<std::pair<std::string, std::int64_t>> paid;
            const std::string c = have[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(have.size()) - 1))];
            const std::int64_t q = uniform(1, balance[c]);
            paid.emplace_back(c, q);
            balance[c] -= q;
            if (have.size() > 1 && uniform(0, 2) == 0) {
                for (const auto& other : have) {
                    if (other != c && balance[other] > 0) {
                        const std::int64_t q2 = uniform(1, balance[other]);
                        paid.emplace_back(other, q2);
                        balance[other] -= q2;
                        break;
                    }
                }
            }
            log.push_back(buy_item(id, t, "item" + std::to_string(uniform(0, 4)), uniform(1, 5), paid));
        } else if (kind <= 7) {
            const std::string c = pick_code();
            const std::int64_t units = uniform(1, opt.max_quantity);
            log.push_back(sell_item(id, t, "item" + std::to_string(uniform(0, 4)), uniform(1, 3), c, units));
            balance[c] += units;
        } else {
            const std::string c = pick_code();
            const std::int64_t units = uniform(1, opt.max_quantity);
            log.push_back(grant(id, t, c, units));
            balance[c] += units;
        }
    }
    return log;
}

/// A pure chain: one real purchase, `hops` exchanges each drawing on the
/// single lot of the previous currency, one item purchase. `rates` holds the
/// per-hop factors computed from the generated numbers alone.
struct SingleChain {
    std::vector<Event> log;
    std::vector<Rational> rates;
    std::string item_event_id;
};

inline SingleChain random_single_chain(std::mt19937_64& rng, int hops, bool full_lots = true)
{
    auto uniform = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    SingleChain chain;
    std::vector<std::int64_t> sizes;  // n_i
    std::vector<std::int64_t> spends; // s_i, index 1..hops
    const Rational paid(uniform(1, 99999), 100);

    sizes.push_back(uniform(1, 5000));
    chain.log.push_back(purchase("c0", 0, paid, "cur0", sizes[0]));
    spends.push_back(0);
    for (int i = 1; i <= hops; ++i) {
        const std::int64_t s = full_lots ? sizes[i - 1] : uniform(1, sizes[i - 1]);
        sizes.push_back(uniform(1, 5000));
        spends.push_back(s);
        chain.log.push_back(exchange("c" + std::to_string(i), i * 60, "cur" + std::to_string(i - 1), s,
                                     "cur" + std::to_string(i), sizes[i]));
    }
    const std::int64_t q = uniform(1, sizes[hops]);
    chain.item_event_id = "item";
    chain.log.push_back(buy_item("item", (hops + 1) * 60, "thing", uniform(1, 9), {{"cur" + std::to_string(hops), q}}));

    chain.rates.push_back(Rational(q, sizes[hops]));
    if (hops == 0) {
        chain.rates.push_back(paid);
    } else {
        chain.rates.push_back(Rational(spends[hops]));
        for (int i = hops - 1; i >= 1; --i) {
            chain.rates.push_back(Rational(spends[i], sizes[i]));
        }
        chain.rates.push_back(paid / Rational(sizes[0]));
    }
    return chain;
}

/// Same log with every currency quantity and item count multiplied by m.
inline std::vector<Event> scaled(const std::vector<Event>& log, std::int64_t m)
{
    const BigInt factor(m);
    auto scale = [&](Position p) {
        p.units = p.units * factor;
        return p;
    };
    std::vector<Event> out = log;
    for (Event& e : out) {
        std::visit(
            [&](auto& payload) {
                using T = std::decay_t<decltype(payload)>;
                if constexpr (std::is_same_v<T, RealMoneyPurchase>) {
                    payload.received = scale(payload.received);
                } else if constexpr (std::is_same_v<T, Exchange>) {
                    payload.spent = scale(payload.spent);
                    payload.received = scale(payload.received);
                } else if constexpr (std::is_same_v<T, ItemPurchase>) {
                    payload.count = payload.count * factor;
                    for (auto& p : payload.paid_with) {
                        p = scale(p);
                    }
                } else if constexpr (std::is_same_v<T, ItemSale>) {
                    payload.count = payload.count * factor;
                    payload.proceeds = scale(payload.proceeds);
                } else {
                    payload.received = scale(payload.received);
                }
            },
            e.payload);
    }
    return out;
}

inline Ledger replay(const std::vector<Event>& log, Strategy strategy)
{
    Ledger ledger(LedgerConfig{strategy, "USD"});
    for (const Event& e : log) {
        ledger.apply(e);
    }
    return ledger;
}

} // namespace vctrack::testing
