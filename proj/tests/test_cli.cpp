#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "support/process.hpp"
#include "support/temp_dir.hpp"
#include "vctrack/casestudy.hpp"

using namespace vctrack;
using namespace vctrack::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = VCTRACK_CLI_PATH;
const fs::path kCaseStudyLog = fs::path(VCTRACK_SOURCE_DIR) / "data/casestudy.jsonl";

RunResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), kCli);
    return run(args);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("shipped case-study log matches the built-in scenario")
{
    std::string expected;
    for (const auto& line : casestudy::log_lines()) {
        expected += line + "\n";
    }
    CHECK(slurp(kCaseStudyLog) == expected);
}

TEST_CASE("ingest is idempotent")
{
    TempDir tmp;
    const std::string state = (tmp.path / "state").string();

    const RunResult first = cli({"ingest", kCaseStudyLog.string(), "--state", state});
    CHECK(first.exit_code == 0);
    CHECK(first.out == "accepted 6, rejected 0\n");

    const std::string log_before = slurp(tmp.path / "state" / "events.jsonl");
    const RunResult again = cli({"ingest", kCaseStudyLog.string(), "--state", state});
    CHECK(again.exit_code == 1);
    CHECK(again.out == "accepted 0, rejected 6 (duplicate)\n");
    CHECK(contains(again.err, "duplicate_event_id"));
    CHECK(slurp(tmp.path / "state" / "events.jsonl") == log_before);
}

TEST_CASE("ingest input problems")
{
    TempDir tmp;
    const std::string state = (tmp.path / "state").string();
    CHECK(cli({"ingest", (tmp.path / "missing.jsonl").string(), "--state", state}).exit_code == 2);

    const fs::path bad = tmp.path / "bad.jsonl";
    {
        std::ofstream out(bad);
        out << casestudy::log_lines()[0] << "\n{\"schema_version\": 1}\n";
    }
    const RunResult r = cli({"ingest", bad.string(), "--state", state});
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "accepted 1, rejected 1"));
    CHECK(contains(r.err, ":2: missing_field"));
}

TEST_CASE("report formats")
{
    TempDir tmp;
    const std::string state = (tmp.path / "state").string();

    const RunResult empty = cli({"report", "--state", state});
    CHECK(empty.exit_code == 0);
    CHECK(empty.out == "no events\n");

    REQUIRE(cli({"ingest", kCaseStudyLog.string(), "--state", state}).exit_code == 0);

    const RunResult table = cli({"report", "--state", state});
    CHECK(table.exit_code == 0);
    CHECK(contains(table.out, "$19.99"));
    CHECK(contains(table.out, "$1.99"));
    CHECK(contains(table.out, "$0.38"));
    CHECK(contains(table.out, "8× wizard"));

    const RunResult csv = cli({"report", "--state", state, "--format", "csv", "--group", "day"});
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.starts_with("section,bucket,currency,item_id,count,attribution_id,real_spend,virtual_bought,cost\n"));
    CHECK(contains(csv.out, "cs-2,,,1.99\n"));

    const RunResult js = cli({"report", "--state", state, "--format", "json"});
    CHECK(js.exit_code == 0);
    const json doc = json::parse(js.out);
    CHECK(doc["totals"]["real_spend"]["display"] == "19.99");

    CHECK(cli({"report", "--state", state, "--from", "2024-03-20", "--to", "2024-03-01"}).exit_code == 2);
    CHECK(cli({"report", "--state", state, "--group", "week"}).exit_code == 2);
    CHECK(cli({"report", "--state", state, "--app", "other"}).exit_code == 2);
}

TEST_CASE("trace output")
{
    TempDir tmp;
    const std::string state = (tmp.path / "state").string();
    REQUIRE(cli({"ingest", kCaseStudyLog.string(), "--state", state}).exit_code == 0);

    const RunResult chest = cli({"trace", casestudy::kChestId, "--state", state});
    CHECK(chest.exit_code == 0);
    CHECK(contains(chest.out, "× 19.99 = $1.99"));

    const RunResult wizards = cli({"trace", casestudy::kWizardsId, "--state", state});
    CHECK(contains(wizards.out, "800/1000 × 60 × 19.99/2500 = $0.38"));

    const RunResult js = cli({"trace", casestudy::kWizardsId, "--state", state, "--format", "json"});
    CHECK(json::parse(js.out)["total"]["exact"] == "5997/15625");

    const RunResult unknown = cli({"trace", "nope", "--state", state});
    CHECK(unknown.exit_code == 1);
    CHECK(contains(unknown.err, "nope"));
}

TEST_CASE("casestudy command")
{
    const RunResult plain = cli({"casestudy"});
    CHECK(plain.exit_code == 0);
    CHECK(contains(plain.out, "PASS"));
    CHECK_FALSE(contains(plain.out, "FAIL"));

    CHECK(cli({"casestudy", "--strategy", "lifo"}).exit_code == 0);
    CHECK(cli({"casestudy", "--scale", "7"}).exit_code == 0);
    CHECK(cli({"casestudy", "--scale", "0"}).exit_code == 2);
}

TEST_CASE("usage errors")
{
    CHECK(cli({}).exit_code == 2);
    CHECK(cli({"frobnicate"}).exit_code == 2);
    CHECK(cli({"report"}).exit_code == 2);
    CHECK(cli({"casestudy", "--strategy", "random"}).exit_code == 2);
    CHECK(cli({"--help"}).exit_code == 0);
}

TEST_CASE("serve matches the CLI byte for byte")
{
    TempDir tmp;
    const fs::path config = tmp.path / "config.json";
    {
        std::ofstream out(config);
        out << R"({"listen": "127.0.0.1:0", "data_dir": "svc", "apps": {"clashroyale": {}}})";
    }
    Child server({kCli, "serve", config.string()});
    const std::string banner = server.read_line();
    REQUIRE(banner.starts_with("listening on http://127.0.0.1:"));
    const int port = std::stoi(banner.substr(banner.rfind(':') + 1));

    httplib::Client http("127.0.0.1", port);
    auto post = http.Post("/v1/apps/clashroyale/events", slurp(kCaseStudyLog), "application/x-ndjson");
    REQUIRE(post);
    REQUIRE(post->status == 200);
    auto report = http.Get("/v1/apps/clashroyale/report?group=day");
    REQUIRE(report);
    auto trace = http.Get("/v1/apps/clashroyale/attributions/cs-4/trace");
    REQUIRE(trace);

    const std::string state = (tmp.path / "state").string();
    REQUIRE(cli({"ingest", kCaseStudyLog.string(), "--state", state}).exit_code == 0);
    CHECK(cli({"report", "--state", state, "--format", "json", "--group", "day"}).out == report->body);
    CHECK(cli({"trace", "cs-4", "--state", state, "--format", "json"}).out == trace->body);

    SUBCASE("a second server on the same data directory refuses to start")
    {
        const RunResult clash = cli({"serve", config.string()});
        CHECK(clash.exit_code == 2);
    }
    server.kill(SIGTERM);
    CHECK(server.wait() == 0);
}

TEST_CASE("serve with a bad config")
{
    TempDir tmp;
    CHECK(cli({"serve", (tmp.path / "missing.json").string()}).exit_code == 2);
    const fs::path config = tmp.path / "config.json";
    httplib::Server blocker;
    const int busy = blocker.bind_to_any_port("127.0.0.1");
    REQUIRE(busy > 0);
    {
        std::ofstream out(config);
        out << R"({"listen": "127.0.0.1:)" << busy << R"(", "data_dir": "d", "apps": {}})";
    }
    CHECK(cli({"serve", config.string()}).exit_code == 2);
}
