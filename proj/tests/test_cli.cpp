#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cache.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run zvdl_run(std::vector<std::string> args) {
    args.insert(args.begin(), "zvdl");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = zvdl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Fresh working directory and cache for one test case.
struct Sandbox {
    fs::path dir;
    fs::path old;
    Sandbox() {
        dir = fs::temp_directory_path() / ("zvdl_cli_" + std::to_string(std::rand()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        old = fs::current_path();
        fs::current_path(dir);
        ::setenv("ZVDL_CACHE", (dir / "cache").c_str(), 1);
    }
    ~Sandbox() {
        fs::current_path(old);
        fs::remove_all(dir);
        ::unsetenv("ZVDL_CACHE");
    }
    std::string read(const std::string& name) const { return zvdl::cli::read_file(dir / name).value_or(""); }
};

}  // namespace

TEST_CASE("eval") {
    CHECK(zvdl_run({"eval", "--s", "2"}).out == "zeta(s) = 1.64493406684823\n");
    CHECK(zvdl_run({"eval", "--s", "0"}).out == "zeta(s) = -0.5\n");
    CHECK(zvdl_run({"eval", "--s", "1"}).code == zvdl::cli::kDomain);
    CHECK(zvdl_run({"eval", "--s", "abc"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({"eval"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({}).code == zvdl::cli::kUsage);
    const Run v = zvdl_run({"eval", "--s", "2", "--z", "1,0"});
    CHECK(v.out.find("V_z(s) = 12.154") != std::string::npos);
}

TEST_CASE("sha256 of a known string") {
    CHECK(zvdl::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("trace writes outputs and cached reruns are byte-identical") {
    Sandbox sb;
    const Run a = zvdl_run({"trace", "--zero", "1", "--u", "1,0", "--dx", "1", "--count", "300", "--out", "a"});
    REQUIRE(a.code == 0);
    const auto report = nlohmann::json::parse(sb.read("a.json"));
    CHECK(report["converged"] == true);
    CHECK(report["partial"] == false);
    CHECK(fs::exists(sb.dir / "a_stats.csv"));
    std::size_t cached = 0;
    for (const auto& e : fs::directory_iterator(sb.dir / "cache")) cached += e.path().extension() == ".csv";
    CHECK(cached == 1);

    const Run b = zvdl_run({"trace", "--zero", "1", "--count", "300", "--out", "b"});
    REQUIRE(b.code == 0);
    const Run c = zvdl_run({"trace", "--zero", "1", "--count", "300", "--out", "c", "--no-cache"});
    REQUIRE(c.code == 0);
    for (const char* suffix : {".csv", "_stats.csv", ".json"}) {
        CHECK(sb.read(std::string("a") + suffix) == sb.read(std::string("b") + suffix));
        CHECK(sb.read(std::string("a") + suffix) == sb.read(std::string("c") + suffix));
    }
}

TEST_CASE("trace of rho70 over 1500 members populates the anomaly metrics") {
    Sandbox sb;
    REQUIRE(zvdl_run({"trace", "--zero", "70", "--count", "1500", "--out", "r70"}).code == 0);
    const auto report = nlohmann::json::parse(sb.read("r70.json"));
    CHECK(report["winding_points"].is_number());
    CHECK(report["delta_limit"].is_number());
}

TEST_CASE("trace usage and domain errors") {
    Sandbox sb;
    CHECK(zvdl_run({"trace", "--zero", "0"}).code == zvdl::cli::kDomain);
    CHECK(zvdl_run({"trace", "--zero", "1", "--u", "2,0"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({"trace", "--zero", "1", "--dx", "-1"}).code == zvdl::cli::kUsage);
}

TEST_CASE("config file with flags overriding") {
    Sandbox sb;
    std::ofstream(sb.dir / "run.ini") << "[trace]\nzero = 2\ncount = 40\nout = \"cfg\"\n";
    REQUIRE(zvdl_run({"--config", "run.ini", "trace", "--count", "60"}).code == 0);
    const std::string csv = sb.read("cfg.csv");
    CHECK(csv.find("# zero=2\n") != std::string::npos);
    CHECK(csv.find("# count=60\n") != std::string::npos);
}

TEST_CASE("coarsen") {
    Sandbox sb;
    REQUIRE(zvdl_run({"trace", "--zero", "1", "--dx", "0.01", "--count", "10001", "--out", "t"}).code == 0);
    REQUIRE(zvdl_run({"coarsen", "t.csv", "--filters", "512,128,64,16", "--out", "four.csv"}).code == 0);
    auto rows = [&](const std::string& name) {
        std::istringstream is(sb.read(name));
        std::vector<std::string> out;
        std::string line;
        while (std::getline(is, line)) {
            if (!line.empty() && line[0] != '#') out.push_back(line);
        }
        return out;
    };
    CHECK(rows("four.csv").size() == 5);
    REQUIRE(zvdl_run({"coarsen", "t.csv", "--filters", "2^0..2^10", "--out", "pw.csv"}).code == 0);
    const auto pw = rows("pw.csv");
    REQUIRE(pw.size() == 12);
    CHECK(pw.back().back() != ',');
    CHECK(zvdl_run({"coarsen", "missing.csv", "--filters", "1"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({"coarsen", "t.csv", "--filters", "0"}).code == zvdl::cli::kUsage);
}

TEST_CASE("render") {
    Sandbox sb;
    REQUIRE(zvdl_run({"render", "quadrant", "--function", "rational-demo", "--out", "f1.ppm"}).code == 0);
    REQUIRE(zvdl_run({"render", "quadrant", "--function", "rational-demo", "--out", "f1b.ppm"}).code == 0);
    CHECK(sb.read("f1.ppm") == sb.read("f1b.ppm"));
    CHECK(sb.read("f1.ppm").size() == 15 + 400 * 400 * 3);
    CHECK(zvdl_run({"render", "basin", "--mode", "a-phi", "--center", "-2,0", "--width", "8", "--height", "8", "--px",
                    "40", "--py", "40", "--out", "b.ppm"})
              .code == 0);
    CHECK(zvdl_run({"render", "quadrant", "--width", "0", "--out", "z.ppm"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({"render", "hexagon", "--out", "z.ppm"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({"render", "quadrant", "--function", "nope", "--out", "z.ppm"}).code == zvdl::cli::kUsage);
}

TEST_CASE("verify") {
    Sandbox sb;
    const Run c2 = zvdl_run({"verify", "conjecture2", "--zeros", "1..10"});
    CHECK(c2.code == 0);
    std::istringstream is(c2.out);
    std::string line;
    std::vector<nlohmann::json> lines;
    while (std::getline(is, line)) lines.push_back(nlohmann::json::parse(line));
    REQUIRE(lines.size() == 11);
    for (int k = 0; k < 10; ++k) CHECK(lines[k]["converged"] == true);
    CHECK(lines.back()["all_ok"] == true);

    const Run q1 = zvdl_run({"verify", "question1", "--zeros", "1..20"});
    CHECK(q1.code == 0);
    CHECK(zvdl_run({"verify", "corollary", "--zeros", "5..1"}).code == zvdl::cli::kUsage);
    CHECK(zvdl_run({"verify", "lemma9", "--zeros", "1"}).code == zvdl::cli::kUsage);
    // a loose sigma bound nothing can meet turns into a verdict failure
    CHECK(zvdl_run({"verify", "question1", "--zeros", "1", "--sigma-tol", "0"}).code == zvdl::cli::kVerdictFailure);
}
