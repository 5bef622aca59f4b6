#include "vctrack/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include <httplib.h>

#include "vctrack/error.hpp"
#include "vctrack/ingest.hpp"
#include "vctrack/render.hpp"

namespace vctrack {

using nlohmann::json;

struct ReportService::App {
    App(std::string id_, AppConfig cfg_, const std::filesystem::path& dir)
        : id(std::move(id_)), cfg(std::move(cfg_)), lock(dir), store(dir)
    {
    }

    std::shared_ptr<const Ledger> current() const
    {
        std::lock_guard guard(snapshot_mu);
        return snapshot;
    }

    void publish(std::shared_ptr<const Ledger> next)
    {
        std::lock_guard guard(snapshot_mu);
        snapshot = std::move(next);
    }

    std::string id;
    AppConfig cfg;
    DirLock lock;
    EventStore store;
    std::optional<Catalog> catalog;
    std::mutex write_mu;
    mutable std::mutex snapshot_mu;
    std::shared_ptr<const Ledger> snapshot;
};

std::string api_error_body(const std::string& code, const std::string& message, const json& detail)
{
    json err{{"code", code}, {"message", message}};
    if (!detail.is_null()) {
        err["detail"] = detail;
    }
    return to_text(json{{"error", std::move(err)}});
}

namespace {

ApiResponse error_response(int status, const std::string& code, const std::string& message,
                           const json& detail = nullptr)
{
    return {status, api_error_body(code, message, detail)};
}

ApiResponse ledger_error_response(const LedgerError& e)
{
    json detail = json::object();
    for (const auto& [k, v] : e.detail()) {
        detail[k] = v;
    }
    int status = 400;
    if (e.code() == ErrorCode::UnknownAttribution) {
        status = 404;
    } else if (e.code() == ErrorCode::InsufficientBalance || e.code() == ErrorCode::DuplicateEventId) {
        status = 409;
    }
    return error_response(status, std::string(error_code_name(e.code())), e.what(),
                          detail.empty() ? json(nullptr) : detail);
}

ApiResponse unknown_app(const std::string& app_id)
{
    return error_response(404, "unknown_app", "no app '" + app_id + "' is configured");
}

std::string param(const std::map<std::string, std::string>& params, const char* name)
{
    const auto it = params.find(name);
    return it == params.end() ? std::string{} : it->second;
}

} // namespace

ServiceConfig ServiceConfig::from_json(const json& doc, const std::filesystem::path& base_dir)
{
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    ServiceConfig cfg;
    try {
        if (doc.contains("listen")) {
            cfg.set_listen(doc.at("listen").get<std::string>());
        }
        if (doc.contains("data_dir")) {
            cfg.data_dir = resolve(doc.at("data_dir").get<std::string>());
        } else {
            cfg.data_dir = base_dir / cfg.data_dir;
        }
        if (doc.contains("max_body_bytes")) {
            cfg.max_body_bytes = doc.at("max_body_bytes").get<std::size_t>();
        }
        for (const auto& [id, a] : doc.at("apps").items()) {
            if (id.empty() || id.find('/') != std::string::npos || id == "." || id == "..") {
                throw std::runtime_error("bad app id '" + id + "'");
            }
            AppConfig app;
            app.report_currency = a.value("report_currency", std::string("USD"));
            if (!is_iso_currency_code(app.report_currency)) {
                throw std::runtime_error("app " + id + ": report_currency must be an ISO code");
            }
            app.strategy = parse_strategy(a.value("strategy", std::string("fifo")));
            if (a.contains("catalog_path")) {
                app.catalog_path = resolve(a.at("catalog_path").get<std::string>());
            }
            app.cors_origin = a.value("cors_origin", std::string{});
            cfg.apps.emplace(id, std::move(app));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("bad config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("bad config: ") + e.what());
    }
    return cfg;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config " + path.string() + " is not valid JSON: " + e.what());
    }
    ServiceConfig cfg = from_json(doc, std::filesystem::absolute(path).parent_path());
    cfg.apply_env_overrides();
    return cfg;
}

void ServiceConfig::set_listen(const std::string& host_port)
{
    const auto colon = host_port.rfind(':');
    if (colon == std::string::npos || colon == 0) {
        throw std::runtime_error("listen address must be host:port, got '" + host_port + "'");
    }
    try {
        std::size_t used = 0;
        const int p = std::stoi(host_port.substr(colon + 1), &used);
        if (used != host_port.size() - colon - 1 || p < 0 || p > 65535) {
            throw std::invalid_argument("port");
        }
        port = p;
    } catch (const std::logic_error&) {
        throw std::runtime_error("bad port in listen address '" + host_port + "'");
    }
    host = host_port.substr(0, colon);
}

void ServiceConfig::apply_env_overrides()
{
    if (const char* listen = std::getenv("VCTRACK_LISTEN"); listen && *listen) {
        set_listen(listen);
    }
    if (const char* dir = std::getenv("VCTRACK_DATA_DIR"); dir && *dir) {
        data_dir = dir;
    }
}

ReportService::ReportService(ServiceConfig config) : config_(std::move(config))
{
    for (const auto& [id, cfg] : config_.apps) {
        auto app = std::make_unique<App>(id, cfg, config_.data_dir / id);
        if (cfg.catalog_path) {
            app->catalog = Catalog::load(*cfg.catalog_path);
        }
        auto ledger = std::make_shared<Ledger>(LedgerConfig{cfg.strategy, cfg.report_currency});
        const auto lines = app->store.load();
        const IngestReport replay = ingest_log(lines, *ledger, {id});
        for (const auto& r : replay.rejected) {
            std::cerr << "warning: " << app->store.log_path().string() << ":" << r.line_no << ": "
                      << error_code_name(r.code) << ": " << r.message << "\n";
        }
        app->publish(std::move(ledger));
        apps_.emplace(id, std::move(app));
    }
}

ReportService::~ReportService() = default;

ReportService::App* ReportService::find(const std::string& app_id) const
{
    const auto it = apps_.find(app_id);
    return it == apps_.end() ? nullptr : it->second.get();
}

std::shared_ptr<const Ledger> ReportService::snapshot(const std::string& app_id) const
{
    const App* app = find(app_id);
    return app ? app->current() : nullptr;
}

ApiResponse ReportService::post_events(const std::string& app_id, const std::string& body)
{
    App* app = find(app_id);
    if (!app) {
        return unknown_app(app_id);
    }
    if (body.size() > config_.max_body_bytes) {
        return error_response(413, "payload_too_large",
                              "body exceeds " + std::to_string(config_.max_body_bytes) + " bytes");
    }

    std::vector<std::string> lines;
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && body[first] == '[') {
        json arr;
        try {
            arr = json::parse(body);
        } catch (const json::parse_error& e) {
            return error_response(400, "malformed_body", std::string("body is not a JSON array: ") + e.what());
        }
        for (const json& item : arr) {
            lines.push_back(item.dump());
        }
    } else {
        lines = split_lines(body);
    }

    std::lock_guard writer(app->write_mu);
    auto next = std::make_shared<Ledger>(*app->current());
    const IngestReport report = ingest_log(lines, *next, {app_id});
    json doc = ingest_report_document(report);

    const bool wholly_malformed =
        report.accepted == 0 && !report.rejected.empty() &&
        std::all_of(report.rejected.begin(), report.rejected.end(),
                    [](const IngestRejection& r) { return r.code == ErrorCode::MalformedJson; });
    if (wholly_malformed) {
        return error_response(400, "malformed_body", "no line of the body is valid JSON", doc);
    }

    try {
        app->store.append(report.applied);
    } catch (const std::exception& e) {
        std::cerr << "error: persisting events for " << app_id << ": " << e.what() << "\n";
        return error_response(500, "internal", "internal error");
    }
    if (report.accepted > 0) {
        app->publish(std::move(next));
    }

    if (report.all_duplicates()) {
        doc["error"] = {{"code", "duplicate_event_id"}, {"message", "every event in the batch was already ingested"}};
        return {409, to_text(doc)};
    }
    return {200, to_text(doc)};
}

ApiResponse ReportService::get_report(const std::string& app_id,
                                      const std::map<std::string, std::string>& params) const
{
    const App* app = find(app_id);
    if (!app) {
        return unknown_app(app_id);
    }
    ReportQuery query;
    query.app_id = app_id;
    try {
        if (const auto from = param(params, "from"); !from.empty()) {
            query.range.from = parse_date(from);
        }
        if (const auto to = param(params, "to"); !to.empty()) {
            query.range.to = parse_date(to);
        }
        if (auto tz = param(params, "tz"); !tz.empty()) {
            // An unescaped '+' in a query string decodes to a space.
            if (tz.front() == ' ') {
                tz.front() = '+';
            }
            query.tz = TzOffset::parse(tz);
        }
        const auto group = param(params, "group");
        if (group == "day") {
            query.grouping = Grouping::Day;
        } else if (group == "month") {
            query.grouping = Grouping::Month;
        } else if (!group.empty() && group != "none") {
            throw std::invalid_argument("group must be none, day or month");
        }
    } catch (const std::invalid_argument& e) {
        return error_response(400, "bad_request", e.what());
    }

    try {
        return {200, to_text(report_document(*app->current(), query))};
    } catch (const LedgerError& e) {
        return ledger_error_response(e);
    }
}

ApiResponse ReportService::get_trace(const std::string& app_id, const std::string& attribution_id) const
{
    const App* app = find(app_id);
    if (!app) {
        return unknown_app(app_id);
    }
    try {
        return {200, to_text(trace_document(build_trace(*app->current(), app_id, attribution_id)))};
    } catch (const LedgerError& e) {
        return ledger_error_response(e);
    }
}

ApiResponse ReportService::get_catalog(const std::string& app_id) const
{
    const App* app = find(app_id);
    if (!app) {
        return unknown_app(app_id);
    }
    if (!app->catalog) {
        return error_response(404, "no_catalog", "app '" + app_id + "' has no catalog");
    }
    return {200, app->catalog->canonical()};
}

void ReportService::install_routes()
{
    auto& srv = *server_;
    auto send = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };

    srv.set_payload_max_length(config_.max_body_bytes);
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
        } catch (...) {
        }
        res.status = 500;
        res.set_content(api_error_body("internal", "internal error"), "application/json");
    });

    std::set<std::string> origins;
    for (const auto& [_, cfg] : config_.apps) {
        if (!cfg.cors_origin.empty()) {
            origins.insert(cfg.cors_origin);
        }
    }
    srv.set_post_routing_handler([origins](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (origins.contains(origin) || origins.contains("*")) {
            res.set_header("Access-Control-Allow-Origin", origins.contains("*") ? "*" : origin);
            res.set_header("Vary", "Origin");
        }
    });
    srv.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });

    srv.Post(R"(/v1/apps/([^/]+)/events)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, post_events(req.matches[1], req.body));
    });
    srv.Get(R"(/v1/apps/([^/]+)/report)", [this, send](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> params;
        for (const auto& [k, v] : req.params) {
            params[k] = v;
        }
        send(res, get_report(req.matches[1], params));
    });
    srv.Get(R"(/v1/apps/([^/]+)/attributions/([^/]+)/trace)",
            [this, send](const httplib::Request& req, httplib::Response& res) {
                send(res, get_trace(req.matches[1], req.matches[2]));
            });
    srv.Get(R"(/v1/apps/([^/]+)/catalog)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, get_catalog(req.matches[1]));
    });
    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            const std::string code = res.status == 404 ? "not_found" : "http_" + std::to_string(res.status);
            res.set_content(api_error_body(code, httplib::status_message(res.status)), "application/json");
        }
    });
}

int ReportService::bind()
{
    server_ = std::make_unique<httplib::Server>();
    server_->set_socket_options([](auto sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    install_routes();
    int port = 0;
    if (config_.port == 0) {
        port = server_->bind_to_any_port(config_.host);
    } else if (server_->bind_to_port(config_.host, config_.port)) {
        port = config_.port;
    } else {
        port = -1;
    }
    if (port <= 0) {
        throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    return port;
}

void ReportService::run()
{
    if (!server_) {
        throw std::logic_error("ReportService::run before bind");
    }
    server_->listen_after_bind();
}

void ReportService::stop()
{
    if (server_) {
        server_->stop();
    }
}

} // namespace vctrack
