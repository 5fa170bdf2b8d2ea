#include "pulsefringe/cli/commands.hpp"
#include "pulsefringe/cli/config.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path source_dir = PF_SOURCE_DIR;

const fs::path scratch_root = fs::temp_directory_path() / ("pulsefringe_test_" + std::to_string(::getpid()));

struct Cleanup {
    ~Cleanup()
    {
        std::error_code ec;
        fs::remove_all(scratch_root, ec);
    }
} cleanup;

fs::path scratch(const std::string& name)
{
    auto p = scratch_root / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "pulsefringe");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    std::ostringstream out, err;
    int code = pf::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    auto p = dir / "scenario.cfg";
    std::ofstream(p) << text;
    return p;
}

json read_json(const fs::path& p)
{
    std::ifstream in(p);
    return json::parse(in);
}

std::string read_text(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name)
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    FAIL("missing column " << name);
    return 0;
}

} // namespace

TEST_CASE("config errors are listed exhaustively with exit code 2")
{
    auto dir = scratch("config_errors");
    auto cfg = write_config(dir, "radius_nm = -5\nfrobnicate = 1\ntau1_ms = abc\nphi2_pi = 0.3\n");
    auto r = run({"case-study", "--config", cfg.string(), "--out", dir.string()});
    CHECK(r.code == pf::cli::exit_config);
    CHECK(r.err.find("radius_nm") != std::string::npos);
    CHECK(r.err.find("frobnicate") != std::string::npos);
    CHECK(r.err.find("tau1_ms") != std::string::npos);
    CHECK(r.err.find("phi2_pi") != std::string::npos);

    CHECK(run({"case-study"}).code == pf::cli::exit_config);
    CHECK(run({"case-study", "--config", (dir / "absent.cfg").string()}).code == pf::cli::exit_config);
}

TEST_CASE("config parsing converts units once")
{
    pf::KeyValue kv;
    kv.set("radius_nm", "40");
    kv.set("pressure_mbar", "2e-10");
    kv.set("omega0_khz", "100");
    kv.set("tau1_ms", "1.5");
    kv.set("tau2_us", "10");
    auto c = pf::cli::parse_config(kv, ".");
    CHECK(c.radius == doctest::Approx(40e-9));
    CHECK(c.pressure == doctest::Approx(2e-8));
    CHECK(c.params.omega0 == doctest::Approx(2 * 3.141592653589793 * 1e5));
    CHECK(c.params.tau1 == doctest::Approx(1.5e-3));
    CHECK(c.params.tau2 == doctest::Approx(1e-5));
}

TEST_CASE("case study: shipped config, determinism and black-body fallback")
{
    auto a = scratch("case_a"), b = scratch("case_b");
    auto cfg = (source_dir / "configs" / "case_study.cfg").string();
    REQUIRE(run({"case-study", "--config", cfg, "--out", a.string()}).code == 0);
    REQUIRE(run({"case-study", "--config", cfg, "--out", b.string()}).code == 0);

    auto ja = read_json(a / "case_study.json"), jb = read_json(b / "case_study.json");
    ja.erase("timestamp");
    jb.erase("timestamp");
    CHECK(ja.dump() == jb.dump());
    CHECK(read_text(a / "case_study_pattern.csv") == read_text(b / "case_study_pattern.csv"));

    double q = ja["metrics"]["quality"];
    CHECK(q == doctest::Approx(0.005).epsilon(0.1));

    auto flags = ja["conditional_flags"].dump();
    CHECK(flags.find("blackbody_excluded") != std::string::npos);
    CHECK(flags.find("lambda_bb_zero_fallback") != std::string::npos);
    const auto& pr = ja["pulse_readings"];
    CHECK(double(pr["used_omega2_rad_s"]) == doctest::Approx(2 * 3.141592653589793 * 2.5e3));
    CHECK(double(pr["entered_omega2_as_omega_p"]["omega_p_rad_s"]) == doctest::Approx(2 * 3.141592653589793 * 2.5e3));
    CHECK(double(pr["mapping_limit_omega2_rad_s"]) < double(pr["used_omega2_rad_s"]));
    CHECK(ja["tool"] == "pulsefringe");
    CHECK(ja.contains("version"));

    auto head = read_text(a / "case_study_pattern.csv").substr(0, 200);
    CHECK(head.find("# pulsefringe") == 0);
    CHECK(head.find("[m]") != std::string::npos);
}

TEST_CASE("case study with the placeholder table is flagged")
{
    auto dir = scratch("case_bb");
    auto cfg = (source_dir / "configs" / "case_study.cfg").string();
    auto table = (source_dir / "data" / "blackbody_placeholder.csv").string();
    REQUIRE(run({"case-study", "--config", cfg, "--out", dir.string(), "--bb-table", table}).code == 0);
    auto j = read_json(dir / "case_study.json");
    auto flags = j["conditional_flags"].dump();
    CHECK(flags.find("blackbody_placeholder") != std::string::npos);
    CHECK(flags.find("lambda_bb_zero_fallback") == std::string::npos);
}

TEST_CASE("sweeps keep the expected orderings")
{
    for (const char* name : {"sweep_radius.cfg", "sweep_temperature.cfg"}) {
        auto dir = scratch(name);
        auto r = run({"sweep", "--config", (source_dir / "configs" / name).string(), "--out", dir.string()});
        REQUIRE(r.code == 0);
        auto rows = csv_rows(dir / "sweep.csv");
        REQUIRE(rows.size() == 4);
        auto obj = column(rows[0], "x_c_star_nm");
        auto feas = column(rows[0], "feasible");
        CAPTURE(name);
        for (std::size_t i = 1; i < rows.size(); ++i)
            REQUIRE(rows[i][feas] == "1");
        for (std::size_t i = 2; i < rows.size(); ++i)
            CHECK(std::stod(rows[i][obj]) <= std::stod(rows[i - 1][obj]));
    }
}

TEST_CASE("empty sweep range gives an empty table")
{
    auto dir = scratch("sweep_empty");
    auto cfg = write_config(dir, "radius_nm = 50\nsweep_radius_nm =\n");
    auto r = run({"sweep", "--config", cfg.string(), "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(csv_rows(dir / "sweep.csv").size() == 1);
}

TEST_CASE("pressure requirement")
{
    auto dir = scratch("pressure");
    auto r = run({"pressure-requirement", "--config", (source_dir / "configs" / "pressure.cfg").string(), "--out",
                  dir.string()});
    REQUIRE(r.code == 0);
    auto j = read_json(dir / "pressure_requirement.json");
    double p = j["pressure_mbar"];
    CHECK(p == doctest::Approx(1.4e-10).epsilon(0.05));
}

TEST_CASE("thermal needs a black-body table")
{
    auto dir = scratch("thermal");
    auto cfg = (source_dir / "configs" / "case_study.cfg").string();
    CHECK(run({"thermal", "--config", cfg, "--out", dir.string()}).code == pf::cli::exit_config);
}

TEST_CASE("oracle validation: corrupted fringe scale and grid budget")
{
    auto dir = scratch("oracle");
    auto cfg = write_config(dir, "radius_nm = 50\noracle_protocols = 1\noracle_seed = 1\n");
    auto bad = run({"oracle-validate", "--config", cfg.string(), "--out", dir.string(), "--debug-delta-x-scale", "1.1"});
    CHECK(bad.code == pf::cli::exit_validation);
    CHECK(bad.out.find("FAIL") != std::string::npos);
    CHECK(bad.out.find("protocol_1_l1") != std::string::npos);

    auto small = run({"oracle-validate", "--config", cfg.string(), "--out", dir.string(), "--max-grid-points", "2048"});
    CHECK(small.code == pf::cli::exit_infeasible);
    CHECK(small.err.find("grid insufficient") != std::string::npos);
}
