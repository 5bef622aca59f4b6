// vctrack: ingest virtual-currency event logs, report where real money went,
// explain individual attributions, and serve the HTTP API.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <pthread.h>
#include <unistd.h>

#include <CLI11.hpp>

#include "vctrack/casestudy.hpp"
#include "vctrack/error.hpp"
#include "vctrack/ingest.hpp"
#include "vctrack/render.hpp"
#include "vctrack/service.hpp"
#include "vctrack/store.hpp"
#include "vctrack/trace.hpp"

namespace fs = std::filesystem;
using namespace vctrack;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LedgerOptions {
    std::string strategy = "fifo";
    std::string currency = "USD";

    LedgerConfig config() const
    {
        try {
            LedgerConfig cfg{parse_strategy(strategy), currency};
            CurrencyId::real(currency).validate();
            return cfg;
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
};

void add_ledger_options(CLI::App* cmd, LedgerOptions& opts)
{
    cmd->add_option("--strategy", opts.strategy, "Lot consumption order: fifo or lifo")->capture_default_str();
    cmd->add_option("--currency", opts.currency, "Report currency (ISO code)")->capture_default_str();
}

/// A replayed state directory, locked for the duration of the command.
struct State {
    DirLock lock;
    EventStore store;
    Ledger ledger;

    State(const fs::path& dir, LedgerConfig cfg) : lock(dir), store(dir), ledger(std::move(cfg))
    {
        const auto lines = store.load();
        const IngestReport replay = ingest_log(lines, ledger);
        for (const auto& r : replay.rejected) {
            std::cerr << "warning: " << store.log_path().string() << ":" << r.line_no << ": "
                      << error_code_name(r.code) << ": " << r.message << "\n";
        }
    }
};

std::string rejection_summary(const IngestReport& report)
{
    std::map<std::string, std::size_t> by_code;
    for (const auto& r : report.rejected) {
        const auto name = r.code == ErrorCode::DuplicateEventId ? std::string("duplicate")
                                                                : std::string(error_code_name(r.code));
        ++by_code[name];
    }
    std::ostringstream os;
    os << "accepted " << report.accepted << ", rejected " << report.rejected.size();
    if (by_code.size() == 1) {
        os << " (" << by_code.begin()->first << ")";
    } else if (!by_code.empty()) {
        os << " (";
        bool first = true;
        for (const auto& [name, n] : by_code) {
            os << (first ? "" : ", ") << name << ": " << n;
            first = false;
        }
        os << ")";
    }
    return os.str();
}

std::vector<std::string> read_lines(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) {
        throw UsageError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return split_lines(buf.str());
}

IngestReport ingest_into(State& state, const std::vector<std::string>& lines)
{
    IngestReport report = ingest_log(lines, state.ledger);
    state.store.append(report.applied);
    return report;
}

int cmd_ingest(const fs::path& log_path, const fs::path& state_dir, const LedgerOptions& opts)
{
    const auto lines = read_lines(log_path);
    State state(state_dir, opts.config());
    const IngestReport report = ingest_into(state, lines);
    for (const auto& r : report.rejected) {
        std::cerr << log_path.string() << ":" << r.line_no << ": " << error_code_name(r.code) << ": " << r.message
                  << "\n";
    }
    std::cout << rejection_summary(report) << "\n";
    return report.rejected.empty() ? kOk : kDomainFailure;
}

std::string pick_app(const Ledger& ledger, const std::string& requested)
{
    if (!requested.empty()) {
        if (!ledger.has_app(requested)) {
            throw UsageError("no events for app '" + requested + "'");
        }
        return requested;
    }
    const auto apps = ledger.apps();
    if (apps.size() > 1) {
        std::string list;
        for (const auto& a : apps) {
            list += (list.empty() ? "" : ", ") + a;
        }
        throw UsageError("state holds several apps (" + list + "); pass --app");
    }
    return apps.front();
}

struct ReportFlags {
    std::string app;
    std::string from;
    std::string to;
    std::string group = "none";
    std::string tz = "+00:00";
    std::string format = "table";
};

ReportQuery make_query(const ReportFlags& flags, const std::string& app)
{
    ReportQuery q;
    q.app_id = app;
    try {
        if (!flags.from.empty()) {
            q.range.from = parse_date(flags.from);
        }
        if (!flags.to.empty()) {
            q.range.to = parse_date(flags.to);
        }
        q.tz = TzOffset::parse(flags.tz);
        q.range.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const LedgerError& e) {
        throw UsageError(e.what());
    }
    if (flags.group == "day") {
        q.grouping = Grouping::Day;
    } else if (flags.group == "month") {
        q.grouping = Grouping::Month;
    }
    return q;
}

void print_report(const Ledger& ledger, const ReportQuery& query, const std::string& format)
{
    const auto doc = report_document(ledger, query);
    if (format == "json") {
        std::cout << to_text(doc);
    } else if (format == "csv") {
        std::cout << render_report_csv(doc);
    } else {
        std::cout << render_report_table(doc);
    }
}

int cmd_report(const fs::path& state_dir, const ReportFlags& flags, const LedgerOptions& opts)
{
    State state(state_dir, opts.config());
    if (state.ledger.events().empty()) {
        make_query(flags, "");
        std::cout << "no events\n";
        return kOk;
    }
    const std::string app = pick_app(state.ledger, flags.app);
    print_report(state.ledger, make_query(flags, app), flags.format);
    return kOk;
}

void print_trace(const Ledger& ledger, const std::string& app, const std::string& id, const std::string& format)
{
    const Trace trace = build_trace(ledger, app, id);
    if (format == "json") {
        std::cout << to_text(trace_document(trace));
    } else {
        std::cout << render_trace_table(trace, ledger.config().report_currency);
    }
}

int cmd_trace(const fs::path& state_dir, const std::string& id, const std::string& app_flag,
              const std::string& format, const LedgerOptions& opts)
{
    State state(state_dir, opts.config());
    std::string app = app_flag;
    if (app.empty()) {
        for (const auto& candidate : state.ledger.apps()) {
            if (state.ledger.find_attribution(candidate, id)) {
                if (!app.empty()) {
                    throw UsageError("attribution '" + id + "' exists in several apps; pass --app");
                }
                app = candidate;
            }
        }
    }
    if (app.empty() || !state.ledger.find_attribution(app, id)) {
        std::cerr << "error: unknown attribution '" << id << "'\n";
        return kDomainFailure;
    }
    print_trace(state.ledger, app, id, format);
    return kOk;
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::string tmpl = (fs::temp_directory_path() / "vctrack-casestudy-XXXXXX").string();
        if (!::mkdtemp(tmpl.data())) {
            throw std::runtime_error("cannot create a temporary directory");
        }
        path = tmpl;
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int cmd_casestudy(const LedgerOptions& opts, unsigned scale)
{
    if (scale == 0) {
        throw UsageError("--scale must be positive");
    }
    TempDir tmp;
    const fs::path log_path = tmp.path / "casestudy.jsonl";
    {
        std::ofstream out(log_path);
        for (const auto& line : casestudy::log_lines(scale)) {
            out << line << "\n";
        }
    }

    State state(tmp.path / "state", opts.config());
    const IngestReport report = ingest_into(state, read_lines(log_path));
    std::cout << "case study (" << strategy_name(state.ledger.config().strategy) << ", scale " << scale << "): "
              << rejection_summary(report) << "\n\n";

    ReportQuery query;
    query.app_id = casestudy::kApp;
    query.grouping = Grouping::Day;
    print_report(state.ledger, query, "table");

    bool ok = report.rejected.empty();
    auto check = [&](const char* label, const char* id, const Rational& golden) {
        const Attribution* a = state.ledger.find_attribution(casestudy::kApp, id);
        std::cout << "\n";
        if (a) {
            print_trace(state.ledger, casestudy::kApp, id, "table");
        }
        const bool match = a && a->total_basis.amount == golden;
        std::cout << (match ? "PASS " : "FAIL ") << label << ": " << (a ? a->total_basis.amount.to_fraction_string() : "missing")
                  << " (expected exactly " << golden.to_fraction_string() << " = " << golden.to_exact_string() << ")\n";
        ok = ok && match;
    };
    check("magic chest", casestudy::kChestId, casestudy::golden_chest());
    check("8 wizards", casestudy::kWizardsId, casestudy::golden_wizards());
    return ok ? kOk : kDomainFailure;
}

int cmd_serve(const fs::path& config_path)
{
    ServiceConfig config;
    try {
        config = ServiceConfig::load(config_path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }

    // Handle SIGINT/SIGTERM on a dedicated thread; block them everywhere else.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    std::unique_ptr<ReportService> service;
    int port = 0;
    try {
        service = std::make_unique<ReportService>(config);
        port = service->bind();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    std::cout << "listening on http://" << config.host << ":" << port << std::endl;

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service->stop();
    });
    service->run();
    // run() can also return on its own; wake the waiter so it can exit.
    ::kill(::getpid(), SIGTERM);
    waiter.join();
    std::cout << "stopped" << std::endl;
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vctrack: attribute real money to in-game purchases"};
    app.require_subcommand(1);

    LedgerOptions ledger_opts;

    std::string log_path;
    std::string state_dir;
    auto* ingest = app.add_subcommand("ingest", "Ingest a JSONL event log into a state directory");
    ingest->add_option("log", log_path, "Event log (JSONL)")->required();
    ingest->add_option("--state", state_dir, "State directory")->required();
    add_ledger_options(ingest, ledger_opts);

    ReportFlags report_flags;
    auto* report = app.add_subcommand("report", "Print spend per currency and per date");
    report->add_option("--state", state_dir, "State directory")->required();
    report->add_option("--app", report_flags.app, "App id (required when the state holds several)");
    report->add_option("--from", report_flags.from, "First local date, YYYY-MM-DD");
    report->add_option("--to", report_flags.to, "Last local date, YYYY-MM-DD");
    report->add_option("--group", report_flags.group, "none, day or month")
        ->check(CLI::IsMember({"none", "day", "month"}))
        ->capture_default_str();
    report->add_option("--tz", report_flags.tz, "UTC offset for dates, e.g. +02:00")->capture_default_str();
    report->add_option("--format", report_flags.format, "table, json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    add_ledger_options(report, ledger_opts);

    std::string trace_id;
    std::string trace_app;
    std::string trace_format = "table";
    auto* trace = app.add_subcommand("trace", "Explain how an item purchase was priced");
    trace->add_option("attribution_id", trace_id, "Event id of the item purchase")->required();
    trace->add_option("--state", state_dir, "State directory")->required();
    trace->add_option("--app", trace_app, "App id");
    trace->add_option("--format", trace_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    add_ledger_options(trace, ledger_opts);

    unsigned scale = 1;
    auto* cs = app.add_subcommand("casestudy", "Replay the gem/chest/gold/wizard scenario and check golden values");
    cs->add_option("--scale", scale, "Multiply every quantity by this factor")->capture_default_str();
    add_ledger_options(cs, ledger_opts);

    std::string config_path;
    auto* serve = app.add_subcommand("serve", "Run the HTTP report service");
    serve->add_option("config", config_path, "Service config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*ingest) {
            return cmd_ingest(log_path, state_dir, ledger_opts);
        }
        if (*report) {
            return cmd_report(state_dir, report_flags, ledger_opts);
        }
        if (*trace) {
            return cmd_trace(state_dir, trace_id, trace_app, trace_format, ledger_opts);
        }
        if (*cs) {
            return cmd_casestudy(ledger_opts, scale);
        }
        if (*serve) {
            return cmd_serve(config_path);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const LedgerError& e) {
        std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
        return kDomainFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
