#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "funnel/scenarios/config.hpp"
#include "funnel/scenarios/registry.hpp"
#include "funnel/scenarios/report.hpp"
#include "funnel/scenarios/scenarios.hpp"

namespace sc = funnel::scenarios;

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kContract = 2;

int run(const std::string& id, const std::string& config_file, const std::vector<std::string>& overrides,
        std::string out_dir)
{
    const std::optional<std::string> file = config_file.empty() ? std::nullopt : std::optional(config_file);
    const sc::ScenarioConfig config = sc::make_config(id, file, overrides);
    if (out_dir.empty()) {
        out_dir = "out/" + id;
    }
    const sc::Report report = sc::run_scenario(config, {out_dir});
    std::size_t failed = 0;
    for (const auto& c : report.checks()) {
        if (!c.passed) {
            ++failed;
            std::cout << "FAIL  " << c.name << ": " << c.contract << "\n";
        }
    }
    std::cout << id << ": " << report.checks().size() - failed << "/" << report.checks().size()
              << " checks passed; report in " << out_dir << "/report.json\n";
    return report.passed() ? kPass : kContract;
}

int verify(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return kUsage;
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: " << path << ": " << e.what() << "\n";
        return kUsage;
    }
    const sc::VerifyResult r = sc::verify_report(doc);
    for (const auto& m : r.mismatches) {
        std::cout << "MISMATCH  " << m << "\n";
    }
    std::cout << path << ": " << r.checked << " exact values replayed, " << r.mismatches.size() << " mismatches\n";
    return r.ok() ? kPass : kContract;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"funnel: certified evoluted-set experiments"};
    app.require_subcommand(1);

    std::string id;
    std::string config_file;
    std::vector<std::string> overrides;
    std::string out_dir;
    auto* run_cmd = app.add_subcommand("run", "run a registered scenario");
    run_cmd->add_option("scenario", id, "scenario id (see `funnel list`)")->required();
    run_cmd->add_option("--config", config_file, "JSON config merged over the defaults");
    run_cmd->add_option("--set", overrides, "override a dotted key, e.g. --set grid.h=1/64")->allow_extra_args(false);
    run_cmd->add_option("--out", out_dir, "output directory (default out/<scenario>)");

    auto* list_cmd = app.add_subcommand("list", "list the registered scenarios");

    std::string report_path;
    auto* verify_cmd = app.add_subcommand("verify", "replay every exact value in a report");
    verify_cmd->add_option("report", report_path, "path to report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*run_cmd) {
            return run(id, config_file, overrides, out_dir);
        }
        if (*list_cmd) {
            for (const auto& s : sc::registry()) {
                std::cout << s.id << "  " << s.description << "\n";
            }
            return kPass;
        }
        if (*verify_cmd) {
            return verify(report_path);
        }
    } catch (const sc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
