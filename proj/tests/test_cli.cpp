#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "plapmix/config.hpp"
#include "plapmix/runner.hpp"

using namespace plapmix;
namespace fs = std::filesystem;

namespace {

ordered_json base_config() {
    return ordered_json{
        {"domain", {{"kind", "interval"}, {"a", -2.0}, {"b", 2.0}}},
        {"kernel", {{"profile", "tent"}, {"r_j", 1.0}}},
        {"solver", {{"p_list", {2.0}}, {"alpha", 1.0}, {"beta", 1.0}, {"h", 0.0625}}},
        {"tasks", {"solve", "verify-formulas", "viscosity-check"}},
        {"output", {{"dir", "out"}, {"plotdata", true}}},
    };
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

fs::path fresh_dir(const std::string& leaf) {
    fs::path d = fs::temp_directory_path() / "plapmix_cli_tests" / leaf;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("config echo reparses byte-identically") {
    RunConfig c = parse_config(base_config());
    ordered_json echo1 = config_json(c);
    RunConfig c2 = parse_config(echo1);
    ordered_json echo2 = config_json(c2);
    CHECK(echo1.dump() == echo2.dump());

    CHECK(c.domain.kind == ShapeKind::Interval);
    CHECK(c.r_j == 1.0);
    CHECK(c.p_list == std::vector<double>{2.0});
    CHECK(c.task_solve);
    CHECK(c.task_verify_formulas);
    CHECK(c.task_viscosity);
    CHECK_FALSE(c.task_sweep);
    CHECK(c.spacing() == 0.0625);
}

TEST_CASE("nodes-based spacing divides the longest bounding-box side") {
    ordered_json j = base_config();
    j["solver"].erase("h");
    j["solver"]["nodes"] = 64;
    RunConfig c = parse_config(j);
    CHECK(c.spacing() == 4.0 / 64);
}

TEST_CASE("config validation rejects malformed inputs") {
    auto reject = [](ordered_json j) { CHECK_THROWS_AS(parse_config(j), invalid_input); };

    ordered_json j = base_config();
    j.erase("domain");
    reject(j);

    j = base_config();
    j["domain"]["kind"] = "hexagon";
    reject(j);

    j = base_config();
    j["kernel"]["profile"] = "gaussian";
    reject(j);

    j = base_config();
    j["kernel"]["r_j"] = -1.0;
    reject(j);

    j = base_config();
    j["solver"]["p_list"] = {1.5};
    reject(j);

    j = base_config();
    j["solver"]["p_list"] = ordered_json::array();
    reject(j);

    j = base_config();
    j["solver"].erase("h");
    reject(j);

    j = base_config();
    j["solver"]["alpha"] = 0.0;
    j["solver"]["beta"] = 0.0;
    reject(j);

    j = base_config();
    j["solver"]["init"] = "random";
    reject(j);

    j = base_config();
    j["tasks"] = ordered_json::array();
    reject(j);

    j = base_config();
    j["tasks"] = {"solve", "meditate"};
    reject(j);
}

TEST_CASE("load_config reports unreadable and unparsable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), invalid_input);
    fs::path dir = fresh_dir("badjson");
    fs::path p = dir / "broken.json";
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_AS(load_config(p.string()), invalid_input);
}

TEST_CASE("identical configs produce bit-identical reports and artifacts") {
    RunConfig c = parse_config(base_config());
    fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    RunOutcome o1 = run_config(c, d1.string());
    RunOutcome o2 = run_config(c, d2.string());
    CHECK(o1.exit_code() == 0);
    CHECK(o2.exit_code() == 0);
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
    CHECK(slurp(d1 / "eigenfield.csv") == slurp(d2 / "eigenfield.csv"));
    CHECK(slurp(d1 / "residual.csv") == slurp(d2 / "residual.csv"));
}

TEST_CASE("report carries the full schema") {
    RunConfig c = parse_config(base_config());
    fs::path d = fresh_dir("schema");
    RunOutcome o = run_config(c, d.string());
    const ordered_json& r = o.report;

    CHECK(r.at("schema") == "plapmix-report-v1");
    CHECK(r.contains("config"));
    CHECK_NOTHROW(parse_config(r.at("config")));

    const auto& geo = r.at("geometry");
    CHECK(geo.at("r_omega") == 2.0);
    CHECK(geo.at("k_omega") == 2);
    CHECK(geo.at("b") == 0.0);
    CHECK(geo.at("lambda") == 0.5);
    CHECK(geo.at("case") == "b-zero");

    const auto& grid = r.at("grid");
    CHECK(grid.at("h") == 0.0625);
    CHECK(grid.at("interior_nodes") == 63);
    CHECK(grid.at("raw_weight_sum") == 1.0);

    const auto& solve = r.at("results").at("solve");
    CHECK(solve.at("p") == 2.0);
    CHECK(solve.at("converged") == true);
    CHECK(solve.at("lambda1").get<double>() > 0.0);

    const auto& vf = r.at("results").at("verify_formulas");
    CHECK(vf.at("pass") == true);
    REQUIRE(vf.at("checks").is_array());
    CHECK(vf.at("checks").size() == 1);  // b = 0: cone only
    CHECK(vf.at("checks")[0].at("field") == "cone");
    CHECK(vf.at("checks")[0].at("pass") == true);

    const auto& vc = r.at("results").at("viscosity_check");
    CHECK(vc.at("field_source") == "solve");
    CHECK(vc.at("robust_nodes").get<int>() > 0);
    CHECK(r.at("ok") == true);
}

TEST_CASE("artifacts: headers, row counts, and the plotdata switch") {
    ordered_json j = base_config();
    j["domain"] = {{"kind", "interval"}, {"a", -1.0}, {"b", 1.0}};
    j["kernel"]["r_j"] = 0.5;
    j["solver"]["p_list"] = {2.0, 4.0};
    j["tasks"] = {"sweep"};
    j["verify"] = {{"sweep_gap_tol", 10.0}};
    RunConfig c = parse_config(j);

    fs::path d = fresh_dir("artifacts");
    RunOutcome o = run_config(c, d.string());
    CHECK(o.exit_code() == 0);

    std::string sweep = slurp(d / "sweep.csv");
    CHECK(sweep.rfind("p,lambda_root,Lambda\n", 0) == 0);
    CHECK(count_lines(sweep) == 3);  // header + one row per p

    std::string field = slurp(d / "eigenfield.csv");
    CHECK(field.rfind("x,value\n", 0) == 0);
    CHECK(count_lines(field) == 1 + o.report.at("grid").at("interior_nodes").get<int>());

    const auto& sj = o.report.at("results").at("sweep");
    CHECK(sj.at("entries").size() == 2);
    CHECK(sj.at("pass") == true);
    CHECK(sj.at("final_gap").get<double>() < 10.0);

    // Same run without plot data: no CSV side files.
    j["output"]["plotdata"] = false;
    fs::path d2 = fresh_dir("artifacts2");
    run_config(parse_config(j), d2.string());
    CHECK_FALSE(fs::exists(d2 / "sweep.csv"));
}

TEST_CASE("failed verification drops the exit code to one") {
    ordered_json j = base_config();
    j["tasks"] = {"solve", "viscosity-check"};
    j["verify"] = {{"viscosity_threshold", 1e-30}};
    RunConfig c = parse_config(j);
    fs::path d = fresh_dir("viscfail");
    RunOutcome o = run_config(c, d.string());
    CHECK(o.solver_ok);
    CHECK_FALSE(o.verifications_ok);
    CHECK(o.exit_code() == 1);
    CHECK(o.report.at("ok") == false);
    CHECK(o.report.at("results").at("viscosity_check").at("pass") == false);
}

TEST_CASE("exit codes rank parse, solver, and verification failures") {
    RunOutcome o;
    CHECK(o.exit_code() == 0);
    o.verifications_ok = false;
    CHECK(o.exit_code() == 1);
    o.solver_ok = false;
    CHECK(o.exit_code() == 3);  // solver failure outranks verification
    o.parse_ok = false;
    CHECK(o.exit_code() == 2);
}
