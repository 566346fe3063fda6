// End-to-end tests that spawn the CLI binary (path injected by CMake).

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("foamswell_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static inline int counter = 0;
};

int run_cli(const std::string& args, const fs::path& out_dir) {
    const std::string cmd = "FOAMSWELL_OUT=" + out_dir.string() + " " + FOAMSWELL_BIN + " " +
                            args + " > " + (out_dir / "stdout.txt").string() + " 2> " +
                            (out_dir / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kEquilibriumConfig = R"(
# quiescent configuration: defaults put (u = x, p = 1) in balance
[discretization]
n_beam = 64
n_pore = 64
dt = 1e-3
t_final = 0.05
[initial]
u0.family = linear
u0.alpha = 0
p0.family = constant
p0.value = 1.0
[material]
nu.ref = 1.0
phi.ref = 1.0
[output]
snapshot_stride = 10
)";

} // namespace

TEST_CASE("run: equilibrium config exits 0 and writes the full output set") {
    TempDir tmp;
    write_file(tmp.path / "eq.cfg", kEquilibriumConfig);
    const int rc = run_cli("run " + (tmp.path / "eq.cfg").string(), tmp.path);
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "timeseries.csv"));
    CHECK(fs::exists(tmp.path / "report.json"));
    CHECK(fs::exists(tmp.path / "snapshots" / "0000.csv"));

    const std::string ts = read_file(tmp.path / "timeseries.csv");
    CHECK(ts.rfind("t,s,s_dot,mass,energy,min_strain,strain_bound,picard_iters,"
                   "newton_iters_beam,newton_iters_pore\n", 0) == 0);
    // 51 rows + header
    CHECK(std::count(ts.begin(), ts.end(), '\n') == 52);

    const std::string snap = read_file(tmp.path / "snapshots" / "0000.csv");
    CHECK(snap.rfind("x,u,v,p_bar,p_hat\n", 0) == 0);
}

TEST_CASE("run: byte-identical outputs across repeated runs") {
    TempDir a, b;
    write_file(a.path / "eq.cfg", kEquilibriumConfig);
    write_file(b.path / "eq.cfg", kEquilibriumConfig);
    REQUIRE(run_cli("run " + (a.path / "eq.cfg").string(), a.path) == 0);
    REQUIRE(run_cli("run " + (b.path / "eq.cfg").string(), b.path) == 0);
    CHECK(read_file(a.path / "timeseries.csv") == read_file(b.path / "timeseries.csv"));
    CHECK(read_file(a.path / "snapshots" / "0000.csv") ==
          read_file(b.path / "snapshots" / "0000.csv"));
}

TEST_CASE("run: config errors exit 2") {
    TempDir tmp;
    write_file(tmp.path / "bad.cfg", "[material]\nk = -1\n");
    CHECK(run_cli("run " + (tmp.path / "bad.cfg").string(), tmp.path) == 2);
    CHECK(run_cli("run " + (tmp.path / "missing.cfg").string(), tmp.path) == 2);
}

TEST_CASE("run: a hopeless dt exits 3 with the error recorded") {
    TempDir tmp;
    // dt located by bisection against this Picard budget: the run below
    // completes at dt = 1e-3 and exhausts the coupling loop from dt = 1e-2 up
    write_file(tmp.path / "huge_dt.cfg", R"(
[discretization]
n_beam = 48
n_pore = 48
dt = 0.5
t_final = 1.0
[boundary]
h0.table = 0:-30, 0.5:-30, 0.6:0
[coupling]
max_iter = 3
[material]
nu.c = 0.4
nu.ref = 1.0
phi.ref = 1.0
)");
    const int rc = run_cli("run " + (tmp.path / "huge_dt.cfg").string(), tmp.path);
    CHECK(rc == 3);
    const std::string rep = read_file(tmp.path / "report.json");
    CHECK(rep.find("\"completed\": false") != std::string::npos);
    CHECK(rep.find("Picard") != std::string::npos);

    // the same physics at a sane dt completes
    std::string fine = read_file(tmp.path / "huge_dt.cfg");
    fine.replace(fine.find("dt = 0.5"), 8, "dt = 1e-3");
    write_file(tmp.path / "fine_dt.cfg", fine);
    CHECK(run_cli("run " + (tmp.path / "fine_dt.cfg").string(), tmp.path) == 0);
}

TEST_CASE("run: tampered check strictness exits 4") {
    TempDir tmp;
    std::string cfg = kEquilibriumConfig;
    cfg += "[checks]\nslack_factor = -1e6\n";
    write_file(tmp.path / "tampered.cfg", cfg);
    CHECK(run_cli("run " + (tmp.path / "tampered.cfg").string(), tmp.path) == 4);
}

TEST_CASE("--version and usage errors") {
    TempDir tmp;
    CHECK(run_cli("--version", tmp.path) == 0);
    CHECK(read_file(tmp.path / "stdout.txt").find("foamswell") != std::string::npos);
    CHECK(run_cli("", tmp.path) != 0);  // a subcommand is required
}

TEST_CASE("check-config validates without running") {
    TempDir tmp;
    write_file(tmp.path / "eq.cfg", kEquilibriumConfig);
    CHECK(run_cli("check-config " + (tmp.path / "eq.cfg").string(), tmp.path) == 0);
    CHECK_FALSE(fs::exists(tmp.path / "timeseries.csv"));

    write_file(tmp.path / "bad.cfg", "[initial]\nu0.alpha = 0.9\n");
    CHECK(run_cli("check-config " + (tmp.path / "bad.cfg").string(), tmp.path) == 2);
}

TEST_CASE("shipped scenario configs validate and the swelling one runs") {
    const fs::path configs = fs::path(FOAMSWELL_BIN).parent_path() / ".." / "configs";
    TempDir tmp;
    int n_seen = 0;
    for (const auto& entry : fs::directory_iterator(configs)) {
        if (entry.path().extension() != ".cfg") continue;
        ++n_seen;
        CHECK(run_cli("check-config " + entry.path().string(), tmp.path) == 0);
    }
    CHECK(n_seen == 4);

    REQUIRE(run_cli("run " + (configs / "swelling.cfg").string(), tmp.path) == 0);
    // s rises from 1 and plateaus after the pulse
    const std::string ts = read_file(tmp.path / "timeseries.csv");
    std::istringstream lines(ts);
    std::string line;
    std::getline(lines, line);  // header
    double s_last = 0.0, s_max = 0.0;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        s_last = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        s_max = std::max(s_max, s_last);
    }
    CHECK(s_max > 1.0 + 1e-4);
    CHECK(s_last > 1.0);
    CHECK(s_max - s_last < 5e-3);
}

TEST_CASE("verify: lemmas suite passes and writes orders.csv") {
    TempDir tmp;
    CHECK(run_cli("verify lemmas", tmp.path) == 0);
    const std::string orders = read_file(tmp.path / "orders.csv");
    CHECK(orders.rfind("suite,case,metric,param,value\n", 0) == 0);
    CHECK(orders.find("lemmas") != std::string::npos);
    CHECK(run_cli("verify no-such-suite", tmp.path) == 2);
}
