#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qspai/matrix_market.hpp"
#include "qspai/poisson.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QSPAI_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("run produces a full artifact set and a parseable report") {
    const auto dir = fresh_dir("qspai_cli_run");
    const int rc = run_cli("run --gx 20 --gy 15 --out " + dir.string());
    CHECK(rc == 0);

    for (const char* name : {"report.json", "cg_trace.csv", "pcg_trace.csv",
                             "spai_stats.json", "solution_field.csv"})
        CHECK(fs::exists(dir / name));
    CHECK_FALSE(fs::exists(dir / "system.mtx"));

    const auto j = json::parse(slurp(dir / "report.json"));
    CHECK(j["config"]["gx"] == 20);
    CHECK(j["config"]["gy"] == 15);
    CHECK(j["config"]["eps_box"] == 1e-6);
    CHECK(j["config"]["box_length"] == 1.0);
    CHECK(j["config"]["backend"] == "exact");
    CHECK(j["config"]["cache"] == true);
    CHECK(j["config"]["material"]["type"] == "uniform");
    CHECK(j["config"]["material"]["k"] == 1.0);
    CHECK_FALSE(j["config"].contains("sa_seed"));

    CHECK(j["cg"]["converged"] == true);
    CHECK(j["pcg"]["converged"] == true);
    CHECK(j["pcg"]["status"] == "converged");
    CHECK(j["spai"]["unique_families"] == 6);
    CHECK_FALSE(j.contains("wall_seconds"));

    const double want_speedup =
        double(j["cg"]["iterations"].get<int>()) / double(j["pcg"]["iterations"].get<int>());
    CHECK(j["speedup"].get<double>() == doctest::Approx(want_speedup).epsilon(1e-15));
    CHECK(j["pcg"]["iterations"].get<int>() < j["cg"]["iterations"].get<int>());
    fs::remove_all(dir);
}

TEST_CASE("identical invocations emit identical bytes") {
    const auto a = fresh_dir("qspai_cli_rerun_a");
    const auto b = fresh_dir("qspai_cli_rerun_b");
    const std::string flags = "run --gx 16 --gy 12 --eps-box 1e-4 --out ";
    REQUIRE(run_cli(flags + a.string()) == 0);
    REQUIRE(run_cli(flags + b.string()) == 0);
    for (const char* name : {"report.json", "cg_trace.csv", "pcg_trace.csv",
                             "spai_stats.json", "solution_field.csv"})
        CHECK(slurp(a / name) == slurp(b / name));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("unconverged runs exit with code 2 and a null speedup") {
    const auto dir = fresh_dir("qspai_cli_unconverged");
    const int rc = run_cli("run --gx 20 --gy 15 --max-cg-iters 5 --out " + dir.string());
    CHECK(rc == 2);
    const auto j = json::parse(slurp(dir / "report.json"));
    CHECK(j["cg"]["converged"] == false);
    CHECK(j["pcg"]["status"] == "max_iterations");
    CHECK(j["speedup"].is_null());
    fs::remove_all(dir);
}

TEST_CASE("bad arguments exit nonzero without output") {
    const auto dir = fresh_dir("qspai_cli_bad");
    CHECK(run_cli("run --backend bogus --out " + dir.string()) != 0);
    CHECK(run_cli("run --no-such-flag") != 0);
    CHECK(run_cli("") != 0);  // a subcommand is required
    CHECK_FALSE(fs::exists(dir));
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("run --help") == 0);
}

TEST_CASE("two-material with equal conductivities matches the uniform run") {
    const auto u = fresh_dir("qspai_cli_uni");
    const auto t = fresh_dir("qspai_cli_two");
    REQUIRE(run_cli("run --gx 12 --gy 9 --k 2.5 --out " + u.string()) == 0);
    REQUIRE(run_cli("two-material --gx 12 --gy 9 --k1 2.5 --k2 2.5 --out " + t.string()) == 0);
    CHECK(slurp(u / "cg_trace.csv") == slurp(t / "cg_trace.csv"));
    CHECK(slurp(u / "pcg_trace.csv") == slurp(t / "pcg_trace.csv"));
    CHECK(slurp(u / "solution_field.csv") == slurp(t / "solution_field.csv"));

    const auto j = json::parse(slurp(t / "report.json"));
    CHECK(j["config"]["material"]["type"] == "vertical_split");
    CHECK(j["config"]["material"]["k1"] == 2.5);
    fs::remove_all(u);
    fs::remove_all(t);
}

TEST_CASE("matrix exports round trip through the matrix market reader") {
    const auto dir = fresh_dir("qspai_cli_export");
    REQUIRE(run_cli("run --gx 8 --gy 6 --export-k --export-m --out " + dir.string()) == 0);

    const auto K = qspai::read_matrix_market((dir / "system.mtx").string());
    qspai::GridSpec g{8, 6, 1.0};
    CHECK(K == qspai::assemble(g, qspai::material_uniform(g, 1.0)));

    const auto M = qspai::read_matrix_market((dir / "preconditioner.mtx").string());
    CHECK(M.same_pattern(K));

    const auto j = json::parse(slurp(dir / "report.json"));
    const auto& artifacts = j["artifacts"];
    CHECK(std::find(artifacts.begin(), artifacts.end(), "system.mtx") != artifacts.end());
    CHECK(std::find(artifacts.begin(), artifacts.end(), "preconditioner.mtx") != artifacts.end());
    fs::remove_all(dir);
}

TEST_CASE("sweeps lay out one subdirectory per parameter value") {
    const auto dir = fresh_dir("qspai_cli_sweep");
    REQUIRE(run_cli("sweep-eps --gx 12 --gy 9 --eps 1e-2 1e-4 --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "eps_0.01" / "report.json"));
    CHECK(fs::exists(dir / "eps_0.0001" / "report.json"));
    const auto j = json::parse(slurp(dir / "eps_0.01" / "report.json"));
    CHECK(j["config"]["eps_box"] == 1e-2);
    fs::remove_all(dir);

    const auto ldir = fresh_dir("qspai_cli_sweep_len");
    REQUIRE(run_cli("sweep-length --gx 12 --gy 9 --lengths 1 0.5 --out " + ldir.string()) == 0);
    CHECK(fs::exists(ldir / "L_1" / "report.json"));
    CHECK(fs::exists(ldir / "L_0.5" / "report.json"));
    const auto lj = json::parse(slurp(ldir / "L_0.5" / "report.json"));
    CHECK(lj["config"]["box_length"] == 0.5);
    fs::remove_all(ldir);
}

TEST_CASE("sa backend is selectable and seeded") {
    const auto a = fresh_dir("qspai_cli_sa_a");
    const auto b = fresh_dir("qspai_cli_sa_b");
    const std::string flags =
        "run --gx 10 --gy 8 --backend sa --seed 7 --samples 40 --sweeps 500 --out ";
    REQUIRE(run_cli(flags + a.string()) == 0);
    REQUIRE(run_cli(flags + b.string()) == 0);
    CHECK(slurp(a / "spai_stats.json") == slurp(b / "spai_stats.json"));
    CHECK(slurp(a / "pcg_trace.csv") == slurp(b / "pcg_trace.csv"));
    const auto j = json::parse(slurp(a / "report.json"));
    CHECK(j["config"]["backend"] == "sa");
    CHECK(j["config"]["sa_seed"] == 7);
    CHECK(j["config"]["sa_samples"] == 40);
    fs::remove_all(a);
    fs::remove_all(b);
}
