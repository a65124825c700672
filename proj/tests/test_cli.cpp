#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef CDD_CLI_PATH
#error "CDD_CLI_PATH must point at the built cdd binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr combined
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CDD_CLI_PATH) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) {
        res.output.append(buf, got);
    }
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() /
               ("cdd_cli_" + std::to_string(::getpid()) + "_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_data_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') ++n;
    }
    return n;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("version flag prints the library version", "[cli]") {
    const auto res = run_cli("--version");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("1.0.0") != std::string::npos);
}

TEST_CASE("gen writes the cloud, the crop, and a manifest", "[cli]") {
    TempDir dir("gen");
    const std::string out = dir.file("cloud.xyz");
    const auto res = run_cli("gen --shape sphere --n 512 --seed 42 --out " + out +
                             " --crop-dir 1,0,0 --keep 0.5");
    INFO(res.output);
    REQUIRE(res.exit_code == 0);
    CHECK(count_data_lines(out) == 512);
    CHECK(count_data_lines(dir.file("cloud_partial.xyz")) == 256);
    const std::string manifest = read_file(out + ".manifest.json");
    CHECK(manifest.find("\"command\": \"gen\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 42") != std::string::npos);
    CHECK(manifest.find("cloud_partial.xyz") != std::string::npos);
}

TEST_CASE("gen rejects a zero point count and a partial crop spec", "[cli]") {
    TempDir dir("genbad");
    CHECK(run_cli("gen --shape sphere --n 0 --seed 1 --out " + dir.file("c.xyz")).exit_code != 0);
    const auto res =
        run_cli("gen --shape sphere --n 8 --seed 1 --out " + dir.file("c.xyz") + " --keep 0.5");
    CHECK(res.exit_code != 0);
    CHECK(res.output.find("--crop-dir and --keep") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.file("c.xyz")));
}

TEST_CASE("eval prints l1cd,l2cd,f1", "[cli]") {
    TempDir dir("eval");
    {
        std::ofstream a(dir.file("a.xyz"));
        a << "0 0 0\n";
        std::ofstream b(dir.file("b.xyz"));
        b << "1 0 0\n";
    }
    auto res = run_cli("eval --pred " + dir.file("a.xyz") + " --gt " + dir.file("a.xyz"));
    CHECK(res.exit_code == 0);
    CHECK(res.output == "0,0,1\n");
    res = run_cli("eval --pred " + dir.file("a.xyz") + " --gt " + dir.file("b.xyz"));
    CHECK(res.exit_code == 0);
    CHECK(res.output == "2,2,0\n");
}

TEST_CASE("eval reports a missing file by path", "[cli]") {
    const auto res = run_cli("eval --pred /nonexistent/p.xyz --gt /nonexistent/g.xyz");
    CHECK(res.exit_code != 0);
    CHECK(res.output.find("/nonexistent/p.xyz") != std::string::npos);
}

TEST_CASE("curves prints one column per distribution", "[cli]") {
    const auto res = run_cli("curves --dist landau,normal:sigma=1.4 --rescale");
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    REQUIRE(lines.size() == 52);
    CHECK(lines[0] == "d,z_ref,z_landau,z_normal");
    CHECK(lines[1].rfind("0,1,1,1", 0) == 0);  // every rescaled curve peaks at d = 0
}

TEST_CASE("curves without rescale starts at sqrt(2)", "[cli]") {
    const auto res = run_cli("curves --dist landau");
    REQUIRE(res.exit_code == 0);
    const auto lines = split_lines(res.output);
    REQUIRE(lines.size() == 52);
    CHECK(lines[1].rfind("0,1.4142135623730951,", 0) == 0);
}

TEST_CASE("distill writes summary and curve files with the oracle objective", "[cli]") {
    TempDir dir("distill");
    const auto res =
        run_cli("distill --dist landau --ref uniform --out " + dir.file("fit"));
    INFO(res.output);
    REQUIRE(res.exit_code == 0);
    const auto summary = split_lines(read_file(dir.file("fit/summary.csv")));
    REQUIRE(summary.size() == 2);
    CHECK(summary[0] == "kind,param_names,param_values,objective");
    REQUIRE(summary[1].rfind("landau,,,", 0) == 0);
    const double objective = std::stod(summary[1].substr(9));
    CHECK(objective == Catch::Approx(2.1078040169957018e-8).margin(1e-12));
    CHECK(split_lines(read_file(dir.file("fit/curves.csv"))).size() == 52);
    CHECK(read_file(dir.file("fit/manifest.json")).find("\"command\": \"distill\"") !=
          std::string::npos);
}

TEST_CASE("distill rejects an unknown distribution kind", "[cli]") {
    TempDir dir("distillbad");
    const auto res = run_cli("distill --dist bogus --out " + dir.file("fit"));
    CHECK(res.exit_code != 0);
    CHECK(res.output.find("log_logistic") != std::string::npos);  // lists the valid kinds
}

TEST_CASE("distill accepts a custom grid file", "[cli]") {
    TempDir dir("distillgrid");
    {
        std::ofstream g(dir.file("grid.csv"));
        g << "sigma,1,1.4,2\n";
    }
    const auto res = run_cli("distill --dist normal --grid file:" + dir.file("grid.csv") +
                             " --out " + dir.file("fit"));
    INFO(res.output);
    REQUIRE(res.exit_code == 0);
    const auto summary = split_lines(read_file(dir.file("fit/summary.csv")));
    REQUIRE(summary.size() == 2);
    CHECK(summary[1].rfind("normal,sigma,", 0) == 0);
}

TEST_CASE("train is bitwise reproducible across runs", "[cli]") {
    TempDir dir("train");
    const std::string out = dir.file("cloud.xyz");
    REQUIRE(run_cli("gen --shape sphere --n 64 --seed 1 --out " + out +
                    " --crop-dir 0,0,1 --keep 0.5")
                .exit_code == 0);
    // identical flags both times, including --out, so every output byte
    // (manifest paths included) must reproduce; the first run's files are
    // stashed aside before the rerun overwrites them
    const std::string train_cmd = "train --gt " + out + " --partial " +
                                  dir.file("cloud_partial.xyz") +
                                  " --loss cd_l1 --iters 20 --seed 3 --snapshots 10" +
                                  " --eval-every 10 --out " + dir.file("runA");
    const auto ra = run_cli(train_cmd);
    INFO(ra.output);
    REQUIRE(ra.exit_code == 0);

    const std::vector<std::string> files = {"final.xyz",  "train_log.csv", "manifest.json",
                                            "snap_0.xyz", "snap_10.xyz",   "snap_20.xyz"};
    fs::create_directories(dir.file("keep"));
    fs::create_directories(dir.file("runB"));
    for (const auto& name : files) {
        fs::copy_file(dir.file("runA/" + name), dir.file("keep/" + name));
        if (name.rfind("snap_", 0) == 0) {
            fs::copy_file(dir.file("runA/" + name), dir.file("runB/" + name));
        }
    }

    REQUIRE(run_cli(train_cmd).exit_code == 0);
    for (const auto& name : files) {
        INFO(name);
        CHECK(read_file(dir.file("runA/" + name)) == read_file(dir.file("keep/" + name)));
    }
    const auto log = split_lines(read_file(dir.file("runA/train_log.csv")));
    REQUIRE(log.size() >= 2);
    CHECK(log[0] == "iter,loss,grad_norm,l1cd,l2cd,f1,elapsed_ms");

    const auto cmp = run_cli("compare --run-a " + dir.file("runA") + " --run-b " + dir.file("runB"));
    REQUIRE(cmp.exit_code == 0);
    const auto lines = split_lines(cmp.output);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "iter,distance");
    CHECK(lines[1] == "0,0");
    CHECK(lines[2] == "10,0");
    CHECK(lines[3] == "20,0");
}

TEST_CASE("train records the weighted loss configuration in the manifest", "[cli]") {
    TempDir dir("trainw");
    const std::string out = dir.file("cloud.xyz");
    REQUIRE(run_cli("gen --shape sphere --n 32 --seed 2 --out " + out +
                    " --crop-dir 1,0,0 --keep 0.5")
                .exit_code == 0);
    const auto res = run_cli("train --gt " + out + " --partial " + dir.file("cloud_partial.xyz") +
                             " --loss weighted:gamma:k=2,theta=2.5 --iters 5 --seed 1 --out " +
                             dir.file("run"));
    INFO(res.output);
    REQUIRE(res.exit_code == 0);
    const std::string manifest = read_file(dir.file("run/manifest.json"));
    CHECK(manifest.find("\"kind\": \"weighted_cd\"") != std::string::npos);
    CHECK(manifest.find("\"weighting\": \"gamma\"") != std::string::npos);
    CHECK(manifest.find("\"theta\": 2.5") != std::string::npos);
}

TEST_CASE("a diverging run exits nonzero and leaves no outputs", "[cli]") {
    TempDir dir("traindiv");
    const std::string out = dir.file("cloud.xyz");
    REQUIRE(run_cli("gen --shape sphere --n 16 --seed 4 --out " + out +
                    " --crop-dir 1,0,0 --keep 0.5")
                .exit_code == 0);
    const auto res = run_cli("train --gt " + out + " --partial " + dir.file("cloud_partial.xyz") +
                             " --loss cd_l2 --optimizer sgd --lr 1e30 --iters 50 --seed 1" +
                             " --snapshots 10 --out " + dir.file("run"));
    CHECK(res.exit_code != 0);
    CHECK(res.output.find("diverged") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.file("run/final.xyz")));
    CHECK_FALSE(fs::exists(dir.file("run/train_log.csv")));
    CHECK_FALSE(fs::exists(dir.file("run/snap_0.xyz")));
}

TEST_CASE("unknown loss and malformed flags are rejected", "[cli]") {
    TempDir dir("badloss");
    const std::string out = dir.file("cloud.xyz");
    REQUIRE(run_cli("gen --shape sphere --n 16 --seed 4 --out " + out +
                    " --crop-dir 1,0,0 --keep 0.5")
                .exit_code == 0);
    const std::string base = "train --gt " + out + " --partial " + dir.file("cloud_partial.xyz") +
                             " --iters 5 --seed 1 --out " + dir.file("run") + " --loss ";
    CHECK(run_cli(base + "nope").exit_code != 0);
    CHECK(run_cli(base + "weighted").exit_code != 0);
    CHECK(run_cli(base + "hypercd:beta=2").exit_code != 0);
    CHECK(run_cli(base + "weighted:gamma:radius=2").exit_code != 0);
}
