#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vctrack/catalog.hpp"
#include "vctrack/ledger.hpp"
#include "vctrack/store.hpp"

namespace httplib {
class Server;
}

namespace vctrack {

struct AppConfig {
    std::string report_currency = "USD";
    Strategy strategy = Strategy::Fifo;
    std::optional<std::filesystem::path> catalog_path;
    std::string cors_origin;
};

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "data";
    std::size_t max_body_bytes = 1 << 20;
    std::map<std::string, AppConfig> apps;

    /// Reads a JSON config file; relative paths resolve against the file's
    /// directory. VCTRACK_LISTEN and VCTRACK_DATA_DIR override the file.
    /// Throws std::runtime_error.
    static ServiceConfig load(const std::filesystem::path& path);
    static ServiceConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
    void apply_env_overrides();
    void set_listen(const std::string& host_port);
};

struct ApiResponse {
    int status = 200;
    std::string body;
};

/// Ledger-backed HTTP API. Each configured app owns `<data_dir>/<app>/`,
/// whose event log is replayed on construction. Writers are serialized per
/// app; readers work from immutable ledger snapshots.
class ReportService {
public:
    explicit ReportService(ServiceConfig config);
    ~ReportService();
    ReportService(const ReportService&) = delete;
    ReportService& operator=(const ReportService&) = delete;

    ApiResponse post_events(const std::string& app_id, const std::string& body);
    ApiResponse get_report(const std::string& app_id, const std::map<std::string, std::string>& params) const;
    ApiResponse get_trace(const std::string& app_id, const std::string& attribution_id) const;
    ApiResponse get_catalog(const std::string& app_id) const;

    /// Latest snapshot of an app's ledger, or nullptr for unknown apps.
    std::shared_ptr<const Ledger> snapshot(const std::string& app_id) const;

    /// Binds the listening socket; returns the bound port. Throws
    /// std::runtime_error when the address is unavailable.
    int bind();
    /// Serves until stop(). Requires bind().
    void run();
    void stop();

    const ServiceConfig& config() const { return config_; }

private:
    struct App;
    App* find(const std::string& app_id) const;
    void install_routes();

    ServiceConfig config_;
    std::map<std::string, std::unique_ptr<App>> apps_;
    std::unique_ptr<httplib::Server> server_;
};

/// {"error": {"code", "message", "detail"?}}
std::string api_error_body(const std::string& code, const std::string& message,
                           const nlohmann::json& detail = nullptr);

} // namespace vctrack
