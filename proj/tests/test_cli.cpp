// End-to-end tests of the vbftrl command-line tool: exit codes, artifacts,
// byte-identical reruns and CSV round trips.

#include "doctest.h"

#include "vbftrl/io.hpp"
#include "vbftrl/replay.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace vbftrl;

namespace {

const fs::path kWork = fs::path(VBFTRL_CLI_WORKDIR);

struct Result {
  int code = -1;
  std::string output;  // stdout and stderr
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Runs the tool with `args` (and optional "VAR=value " prefix) inside the work directory.
Result cli(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWork);
  const fs::path log = kWork / "last_output.txt";
  const std::string cmd = "cd '" + kWork.string() + "' && env " + (env.empty() ? "" : env + " ") + "'" +
                          std::string(VBFTRL_CLI_PATH) + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(log);
  return r;
}

int data_rows(const std::string& csv) {
  int n = 0;
  for (char c : csv) n += c == '\n';
  return n - 1;
}

}  // namespace

TEST_CASE("run: minimal config writes the artifacts") {
  spit(kWork / "min.cfg", "d = 2\nT = 5\n");
  const Result r = cli("run --config min.cfg --out run1");
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("lambda=300 mu=10") != std::string::npos);

  const std::string csv = slurp(kWork / "run1/trace.csv");
  CHECK(csv.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  CHECK(data_rows(csv) == 5);
  std::istringstream in(csv);
  const auto rows = parse_trace_csv(in);
  REQUIRE(rows.size() == 5);
  double cum = 0.0;
  for (const auto& row : rows) {
    cum += row.loss;
    CHECK(row.cumloss == cum);
    CHECK(std::isnan(row.solve_seconds));
  }
  std::ostringstream rewritten;
  write_trace_csv(rewritten, rows);
  CHECK(rewritten.str() == csv);

  const auto summary = nlohmann::json::parse(slurp(kWork / "run1/summary.json"));
  CHECK(summary["lambda"] == 300.0);
  CHECK(summary["mu"] == 10.0);
  CHECK(summary["violations"]["total"] == 0);
  CHECK(summary["regret"].is_number());
  CHECK(summary["hindsight_value"].get<double>() <= summary["cum_loss"].get<double>());

  std::ifstream rho_file(kWork / "run1/rho_final.txt");
  const ReplayFile rho = parse_replay(rho_file);
  REQUIRE(rho.observables.size() == 1);
  CHECK(std::abs(rho.observables[0].herm().trace() - 1.0) < 1e-12);
}

TEST_CASE("run: reruns are byte-identical") {
  spit(kWork / "det.cfg", "d = 2\nT = 8\nseed = 42\nreality = psd\n");
  REQUIRE(cli("run --config det.cfg --out det1").code == 0);
  REQUIRE(cli("run --config det.cfg --out det2").code == 0);
  for (const char* f : {"trace.csv", "rho_final.txt", "summary.json"}) {
    CAPTURE(f);
    CHECK(slurp(kWork / "det1" / f) == slurp(kWork / "det2" / f));
  }
  // --seed changes the game
  REQUIRE(cli("run --config det.cfg --out det3 --seed 43").code == 0);
  CHECK(slurp(kWork / "det1/trace.csv") != slurp(kWork / "det3/trace.csv"));
}

TEST_CASE("run: invalid input exits 2 and names the key") {
  spit(kWork / "typo.cfg", "d = 2\nsolver.value_tolerance = 1e-9\n");
  Result r = cli("run --config typo.cfg --out typo");
  CHECK(r.code == 2);
  CHECK(r.output.find("solver.value_tolerance") != std::string::npos);

  spit(kWork / "neg.cfg", "lambda = -1\n");
  r = cli("run --config neg.cfg --out neg");
  CHECK(r.code == 2);
  CHECK(r.output.find("lambda") != std::string::npos);

  r = cli("run --config min.cfg --out env", "VBFTRL_LAMDA=1");
  CHECK(r.code == 2);
  CHECK(r.output.find("VBFTRL_LAMDA") != std::string::npos);

  spit(kWork / "big.cfg", "d = 5\n");
  CHECK(cli("run --config big.cfg --out big").code == 2);

  CHECK(cli("run --config does-not-exist.cfg").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE("run: environment overrides the file") {
  const Result r = cli("run --config min.cfg --out envT", "VBFTRL_T=3");
  REQUIRE(r.code == 0);
  CHECK(data_rows(slurp(kWork / "envT/trace.csv")) == 3);
}

TEST_CASE("run: solver failure exits 3 and keeps the partial trace") {
  spit(kWork / "fail.cfg", "d = 2\nT = 4\nsolver.tol_psd_cut = 0.9\n");
  const Result r = cli("run --config fail.cfg --out fail");
  CHECK(r.code == 3);
  CHECK(fs::exists(kWork / "fail/trace.csv"));
  const auto summary = nlohmann::json::parse(slurp(kWork / "fail/summary.json"));
  CHECK(summary["aborted"] == true);
  CHECK(summary["regret"].is_null());
}

TEST_CASE("run: replay reality") {
  spit(kWork / "replay/obs.txt", "d=2\n\n1 0\n0 0\n\n0.5 0.5\n0.5 0.5\n\n0 0\n0 1\n");
  spit(kWork / "replay/run.cfg", "d = 2\nT = 3\nreality = replay\nreplay_file = obs.txt\n");
  const Result r = cli("run --config replay/run.cfg --out replay/out");
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  CHECK(data_rows(slurp(kWork / "replay/out/trace.csv")) == 3);
  spit(kWork / "replay/long.cfg", "d = 2\nT = 4\nreality = replay\nreplay_file = obs.txt\n");
  CHECK(cli("run --config replay/long.cfg --out replay/out2").code == 2);
}

TEST_CASE("verify") {
  Result r = cli("verify --suite vbc --instances 10");
  CAPTURE(r.output);
  CHECK(r.code == 0);
  const auto line_start = r.output.find("neglog.equality");
  REQUIRE(line_start != std::string::npos);
  const std::string line = r.output.substr(line_start, r.output.find('\n', line_start) - line_start);
  CHECK(line.find("gap=0.000e+00") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);

  r = cli("verify --suite kron --out verify_out");
  CHECK(r.code == 0);
  CHECK(fs::exists(kWork / "verify_out/verify_report.txt"));
  CHECK(cli("verify --suite everything").code == 2);
}

TEST_CASE("sweep: 2 x 2 grid with 2 seeds") {
  spit(kWork / "sweep.cfg", "sweep.d = 2,3\nsweep.T = 3,6\nsweep.seeds = 1..2\n");
  const Result r = cli("sweep --config sweep.cfg --out sweep --workers 2");
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  const std::string csv = slurp(kWork / "sweep/sweep.csv");
  CHECK(data_rows(csv) == 8);
  std::istringstream in(csv);
  const auto rows = parse_sweep_csv(in);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    CHECK(std::isfinite(row.fitted_constant));
    CHECK(row.fitted_constant > 0.0);
    CHECK(row.wall_seconds > 0.0);
    CHECK(row.violations == 0);
  }
  std::ostringstream rewritten;
  write_sweep_csv(rewritten, rows);
  CHECK(rewritten.str() == csv);

  // the regret columns do not depend on the worker count
  REQUIRE(cli("sweep --config sweep.cfg --out sweep1 --workers 1").code == 0);
  std::istringstream in1(slurp(kWork / "sweep1/sweep.csv"));
  const auto rows1 = parse_sweep_csv(in1);
  REQUIRE(rows1.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows1[i].regret == rows[i].regret);

  CHECK(cli("sweep --config sweep.cfg --workers -1").code == 2);
}

TEST_CASE("hindsight") {
  spit(kWork / "h/boundary.txt", "d=2\n\n1 0\n0 0\n");
  Result r = cli("hindsight h/boundary.txt");
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  const auto pos = r.output.find("value ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.output.substr(pos + 6)) <= 1e-3);
  CHECK(r.output.find("rho") != std::string::npos);

  spit(kWork / "h/empty.txt", "");
  CHECK(cli("hindsight h/empty.txt").code == 2);

  spit(kWork / "h/bad.txt", "d=2\n\n1 0\n0 0\n\n1 2:1\n0 1\n");
  r = cli("hindsight h/bad.txt");
  CHECK(r.code == 2);
  CHECK(r.output.find("line 6") != std::string::npos);

  CHECK(cli("hindsight h/missing.txt").code == 2);
}
