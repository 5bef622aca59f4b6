#include "vctrack/trace.hpp"

#include "vctrack/error.hpp"

namespace vctrack {

Rational chain_price(std::span<const Rational> rates)
{
    if (rates.empty()) {
        throw LedgerError(ErrorCode::EmptyChain, "exchange-rate chain is empty");
    }
    Rational p{1};
    for (const Rational& r : rates) {
        p *= r;
    }
    return p;
}

std::string currency_prefix(const std::string& code)
{
    return code == "USD" ? "$" : code + " ";
}

std::vector<Rational> TracePath::rates() const
{
    std::vector<Rational> out;
    out.reserve(steps.size());
    for (const auto& s : steps) {
        out.push_back(s.rate);
    }
    return out;
}

std::string Trace::arithmetic() const
{
    if (paths.size() == 1) {
        return paths.front().arithmetic;
    }
    std::string out;
    for (const auto& p : paths) {
        if (!out.empty()) {
            out += " + ";
        }
        out += "(" + p.arithmetic + ")";
    }
    return out;
}

std::string Trace::rendered_arithmetic() const
{
    return arithmetic() + " = " + total_basis.amount.to_display_string();
}

namespace {

class TraceBuilder {
public:
    TraceBuilder(const Ledger& ledger, std::string app, std::string prefix)
        : ledger_(ledger), app_(std::move(app)), prefix_(std::move(prefix))
    {
    }

    void expand(const Consumption& c, std::vector<TracePath>& out) const
    {
        const LotRecord& rec = lot(c.lot_id);
        TracePath base;
        base.lot_id = c.lot_id;
        base.currency = c.currency;
        base.taken = c.taken;

        if (is_zero_origin(rec)) {
            push(base, earned_description(rec), "0", Rational{});
            finish(std::move(base), out);
            return;
        }

        push(base,
             c.taken.str() + " of " + rec.lot.initial.str() + " " + c.currency.code + " from lot " + rec.lot.lot_id,
             c.taken.str() + "/" + rec.lot.initial.str(), Rational(c.taken.units(), rec.lot.initial.units()));

        if (rec.paid) {
            const std::string paid = rec.paid->amount.to_exact_string();
            push(base, "lot " + rec.lot.lot_id + " bought for " + prefix_ + paid, paid, rec.paid->amount);
            finish(std::move(base), out);
            return;
        }
        for (const Consumption& src : rec.sources) {
            TracePath path = base;
            push(path,
                 "lot " + rec.lot.lot_id + " cost " + src.taken.str() + " " + src.currency.code + " (lot " +
                     src.lot_id + ")",
                 src.taken.str(), src.taken.as_rational());
            per_unit(lot(src.lot_id), std::move(path), out);
        }
    }

private:
    // Continues a path whose running product is measured in units of
    // `rec`'s currency.
    void per_unit(const LotRecord& rec, TracePath path, std::vector<TracePath>& out) const
    {
        if (is_zero_origin(rec)) {
            push(path, earned_description(rec), "0", Rational{});
            finish(std::move(path), out);
            return;
        }
        if (rec.paid) {
            const std::string paid = rec.paid->amount.to_exact_string();
            push(path,
                 rec.lot.currency.code + " at " + prefix_ + paid + " per " + rec.lot.initial.str() + " (lot " +
                     rec.lot.lot_id + ")",
                 paid + "/" + rec.lot.initial.str(), rec.paid->amount / rec.lot.initial.as_rational());
            finish(std::move(path), out);
            return;
        }
        for (const Consumption& src : rec.sources) {
            TracePath branch = path;
            push(branch,
                 rec.lot.currency.code + " at " + src.taken.str() + " " + src.currency.code + " per " +
                     rec.lot.initial.str() + " (lot " + rec.lot.lot_id + ")",
                 src.taken.str() + "/" + rec.lot.initial.str(),
                 Rational(src.taken.units(), rec.lot.initial.units()));
            per_unit(lot(src.lot_id), std::move(branch), out);
        }
    }

    const LotRecord& lot(const std::string& id) const
    {
        const LotRecord* rec = ledger_.find_lot(app_, id);
        if (!rec) {
            throw std::logic_error("lot '" + id + "' missing from ledger history");
        }
        return *rec;
    }

    static bool is_zero_origin(const LotRecord& rec)
    {
        return rec.lot.origin == LotOrigin::Grant || rec.lot.origin == LotOrigin::ItemSale;
    }

    std::string earned_description(const LotRecord& rec) const
    {
        const char* what = rec.lot.origin == LotOrigin::Grant ? "earned" : "resale proceeds";
        std::string d = std::string(what) + " — " + prefix_ + "0.00";
        if (!rec.note.empty()) {
            d += " (" + rec.note + ")";
        }
        return d;
    }

    static void push(TracePath& path, std::string description, std::string rate_text, Rational rate)
    {
        Rational running = path.steps.empty() ? rate : path.steps.back().running_product * rate;
        path.steps.push_back({std::move(description), std::move(rate_text), std::move(rate), std::move(running)});
    }

    static void finish(TracePath path, std::vector<TracePath>& out)
    {
        path.subtotal = path.steps.back().running_product;
        if (path.steps.size() == 1 && path.subtotal.is_zero()) {
            path.arithmetic = "earned";
        } else {
            for (const auto& s : path.steps) {
                if (!path.arithmetic.empty()) {
                    path.arithmetic += " × ";
                }
                path.arithmetic += s.rate_text;
            }
        }
        out.push_back(std::move(path));
    }

    const Ledger& ledger_;
    std::string app_;
    std::string prefix_;
};

} // namespace

Trace build_trace(const Ledger& ledger, const std::string& app_id, const std::string& attribution_id)
{
    const Attribution& a = attribute_item_purchase(ledger, app_id, attribution_id);
    Trace t;
    t.app_id = app_id;
    t.attribution_id = a.event_id;
    t.item_id = a.item_id;
    t.count = a.count;
    t.total_basis = a.total_basis;

    const TraceBuilder builder(ledger, app_id, currency_prefix(ledger.config().report_currency));
    for (const Consumption& c : a.consumptions) {
        builder.expand(c, t.paths);
    }
    return t;
}

} // namespace vctrack
