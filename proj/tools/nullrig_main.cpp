#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <nullrig/runner.hpp>

namespace {

void print_summary(const nullrig::RunReport& rep, std::ostream& os) {
    for (const auto& suite : rep.suites) {
        for (const auto& c : suite.checks) {
            const char* state = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
            os << "[" << state << "] " << suite.name << "/" << c.id;
            if (c.skipped)
                os << " (" << c.reason << ")";
            else
                os << " max=" << c.max_residual << " tol=" << c.tol;
            os << "\n";
        }
    }
    os << (rep.all_pass ? "all evaluated checks passed" : "some checks FAILED") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"residual checks for rigged null graphs in flat semi-Euclidean space"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "sample surface points and evaluate check suites");
    std::string config_path;
    std::string suite;
    std::string out_path;
    std::string csv_path;
    int points = 0;
    std::int64_t seed = -1;
    double tol_scale = 0.0;
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--suite", suite, "all, structure, coincidence or curvature");
    run->add_option("--points", points, "override the sample count");
    run->add_option("--seed", seed, "override the sampler seed");
    run->add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");
    run->add_option("--out", out_path, "write the JSON report to this file");
    run->add_option("--csv", csv_path, "write one row per point and check to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        if (!in) throw nullrig::ConfigError("cannot open config file '" + config_path + "'");
        nullrig::json raw = nullrig::json::parse(in);
        nullrig::RunConfig cfg = nullrig::parse_run_config(raw);

        if (!suite.empty()) {
            if (suite == "all")
                cfg.suites = {"structure", "coincidence", "curvature"};
            else if (suite == "structure" || suite == "coincidence" || suite == "curvature")
                cfg.suites = {suite};
            else
                throw nullrig::ConfigError("unknown suite '" + suite + "'");
        }
        if (points != 0) {
            if (points < 1) throw nullrig::ConfigError("points must be positive");
            cfg.points = points;
        }
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (tol_scale != 0.0) {
            if (!(tol_scale > 0.0)) throw nullrig::ConfigError("tol_scale must be positive");
            cfg.tol_scale = tol_scale;
        }

        nullrig::Runner runner(std::move(cfg));
        nullrig::RunReport rep = runner.run();

        std::string dump = nullrig::report_to_json(rep).dump(2);
        dump += "\n";
        if (out_path.empty()) {
            std::cout << dump;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw nullrig::ConfigError("cannot write report to '" + out_path + "'");
            out << dump;
        }
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path, std::ios::binary);
            if (!csv) throw nullrig::ConfigError("cannot write csv to '" + csv_path + "'");
            csv << nullrig::report_to_csv(rep);
        }
        print_summary(rep, std::cerr);
        return rep.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
