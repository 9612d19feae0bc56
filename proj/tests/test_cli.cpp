#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Scratch directory, fresh per test case.
struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("plsgeom_cli_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

RunResult run_cli(const Scratch& s, const std::string& args) {
  const std::string out_file = s.path("stdout.txt");
  const std::string err_file = s.path("stderr.txt");
  std::string cmd = std::string(PLSGEOM_CLI_PATH) + " " + args + " > " +
                    out_file + " 2> " + err_file;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = (status >= 0) ? ((status >> 8) & 0xff) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream f(p, std::ios::binary);
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(cell));
        cell.clear();
      } else {
        cell += c;
      }
    }
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string kLambda =
    "3.1851963159166412,0.98184490902530774,0.4109300132971207,"
    "0.24114083382637416,0.18088792793455968";

}  // namespace

TEST_CASE("shrink writes the factor table and a manifest") {
  Scratch s;
  auto r = run_cli(s, "shrink --lambda " + kLambda +
                          " --y 1,0,0,1,1 --n 3 --out " + s.path("shrink.csv"));
  REQUIRE(r.exit_code == 0);

  auto rows = read_csv(s.path("shrink.csv"));
  REQUIRE(rows.size() == 1 + 5 + 5 + 3);  // header + omega + z + alpha
  CHECK(rows[0] == std::vector<std::string>({"quantity", "index", "value"}));
  CHECK(rows[1][0] == "omega");
  CHECK(std::stod(rows[2][2]) == doctest::Approx(-8.41).epsilon(1e-3));
  CHECK(std::stod(rows[1][2]) == doctest::Approx(1.0).epsilon(1e-6));

  auto manifest = nlohmann::json::parse(slurp(s.path("shrink.csv.manifest.json")));
  CHECK(manifest["command"] == "shrink");
  CHECK(manifest["inputs"]["n"] == "3");
  CHECK(manifest["tool_version"] == "plsgeom 0.1.0");
  CHECK(manifest.contains("timestamp"));
}

TEST_CASE("shrink both-route cross check reports the deviation") {
  Scratch s;
  auto r = run_cli(s, "shrink --lambda " + kLambda +
                          " --psi 1,1,1,1,1 --n 2 --method both --out " +
                          s.path("b.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("route deviation") == 0);
  CHECK(fs::exists(s.path("b.csv.weights.csv")));
  auto wrows = read_csv(s.path("b.csv.weights.csv"));
  REQUIRE(wrows.size() == 11);  // header + C(5,2)
  CHECK(wrows[0] == std::vector<std::string>({"tau", "p"}));
  CHECK(wrows[1][0] == "1;2");
  double total = 0.0;
  for (std::size_t i = 1; i < wrows.size(); ++i) total += std::stod(wrows[i][1]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shrink rejects thin support with the numerical exit code") {
  Scratch s;
  auto r = run_cli(s, "shrink --lambda " + kLambda +
                          " --y 1,0,0,0,0 --n 2 --out " + s.path("x.csv"));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("support below direction count") != std::string::npos);
}

TEST_CASE("shrink validates its argument combinations") {
  Scratch s;
  CHECK(run_cli(s, "shrink --lambda " + kLambda + " --n 2 --out " +
                       s.path("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(s, "shrink --lambda " + kLambda +
                       " --y 1,1,1,1,1 --psi 1,1,1,1,1 --n 2 --out " +
                       s.path("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(s, "shrink --y 1,1,1,1,1 --n 2 --out " + s.path("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(s, "shrink --unknown-flag 1").exit_code == 2);
}

TEST_CASE("corners emits every subset with the closed-form dof columns") {
  Scratch s;
  auto r = run_cli(s, "corners --lambda " + kLambda + " --n-range 2..3 --out " +
                          s.path("c.csv"));
  REQUIRE(r.exit_code == 0);
  auto rows = read_csv(s.path("c.csv"));
  REQUIRE(rows.size() == 1 + 10 + 10);
  CHECK(rows[0][0] == "n");
  CHECK(rows[0][1] == "tau");
  CHECK(rows[0][7] == "gdof");
  CHECK(rows[0][8] == "gdof_dp");
  CHECK(rows[1][1] == "1;2");
  // row {3,4,5}: published values 1369.96, 19.9, gdof 1392.86, gdof_dp -1.87e6
  bool found = false;
  for (auto& row : rows) {
    if (row.size() > 8 && row[1] == "3;4;5") {
      found = true;
      CHECK(std::stod(row[2]) == doctest::Approx(1369.96).epsilon(5e-4));
      CHECK(std::stod(row[3]) == doctest::Approx(19.9).epsilon(3e-3));
      CHECK(std::stod(row[7]) == doctest::Approx(1392.86).epsilon(5e-4));
      CHECK(std::stod(row[8]) == doctest::Approx(-1.87e6).epsilon(5e-3));
    }
  }
  CHECK(found);

  CHECK(run_cli(s, "corners --lambda " + kLambda + " --n-range 2..5 --out " +
                       s.path("bad.csv"))
            .exit_code == 2);
  CHECK(run_cli(s, "--enum-cap 5 corners --lambda " + kLambda +
                       " --n-range 2..3 --out " + s.path("cap.csv"))
            .exit_code == 4);
}

TEST_CASE("signatures enumeration, simplex vertices and expansion") {
  Scratch s;
  auto r = run_cli(s, "signatures --m 6 --n 3 --out " + s.path("sig.csv"));
  REQUIRE(r.exit_code == 0);
  auto rows = read_csv(s.path("sig.csv"));
  REQUIRE(rows.size() == 11);
  CHECK(rows[1][0] == "+-+---");
  CHECK(rows[1][1] == "1;2;3");
  CHECK(rows[10][0] == "+++-+-");

  auto rv = run_cli(s, "signatures --m 12 --simplex 2,5,7,8,10 --out " +
                           s.path("v.csv"));
  REQUIRE(rv.exit_code == 0);
  auto vrows = read_csv(s.path("v.csv"));
  REQUIRE(vrows.size() == 7);  // header + 5 vertices + interior
  CHECK(vrows[1][0] == "z_(5,7,8,10)");
  CHECK(vrows[1][1] == "++++0-00-0++");
  CHECK(vrows[5][0] == "z_(2,5,7,8)");
  CHECK(vrows[5][1] == "+0--0+00++++");
  CHECK(vrows[6][0] == "interior");
  CHECK(vrows[6][1] == "++xx-x+-x+++");

  auto re = run_cli(s, "signatures --m 12 --simplex 2,5,7,8,10 --expand --out " +
                           s.path("e.csv"));
  REQUIRE(re.exit_code == 0);
  auto erows = read_csv(s.path("e.csv"));
  REQUIRE(erows.size() == 13);
  CHECK(erows[1][0] == "++---++-++++");
  CHECK(erows[12][0] == "++++--+--+++");

  CHECK(run_cli(s, "signatures --m 12 --n 3 --simplex 2,5,7,8,10 --out " +
                       s.path("bad.csv"))
            .exit_code == 2);
}

TEST_CASE("rays from an explicit z and from psi") {
  Scratch s;
  auto g = run_cli(s, "exp-corr --m 6 --rate 0.33333333333333331 --out " +
                          s.path("gram.csv"));
  REQUIRE(g.exit_code == 0);
  // z from psi=(1,2,1.5,0.8,0,0) at n=3 has signature -+-+++ and three rays
  auto r = run_cli(s, "rays --gram " + s.path("gram.csv") +
                          " --n 3 --psi 1,2,1.5,0.8,0,0 --out " +
                          s.path("rays.csv"));
  REQUIRE(r.exit_code == 0);
  auto rows = read_csv(s.path("rays.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "1;2;3;4");
  CHECK(rows[2][0] == "1;2;3;5");
  CHECK(rows[3][0] == "1;2;3;6");
  auto summary = nlohmann::json::parse(slurp(s.path("rays.csv.summary.json")));
  CHECK(summary["k_z"] == 3);
  CHECK(summary["sections"] == nlohmann::json({1, 1, 1, 3}));
  REQUIRE(summary.contains("coefficients"));
  CHECK(summary["residual"].get<double>() < 1e-8);

  // explicit z with an inferred n
  auto rz = run_cli(s, "rays --lambda " + kLambda +
                           " --z=-0.5,2,-1,0.5,1 --out " + s.path("z.csv"));
  REQUIRE(rz.exit_code == 0);
  auto zsummary = nlohmann::json::parse(slurp(s.path("z.csv.summary.json")));
  CHECK(zsummary["k_z"] == 2);
  CHECK_FALSE(zsummary.contains("coefficients"));

  CHECK(run_cli(s, "rays --lambda " + kLambda + " --z=1,0,1,1,1 --out " +
                       s.path("bad.csv"))
            .exit_code == 2);
  CHECK(run_cli(s, "rays --lambda " + kLambda + " --psi 1,1,1,1,1 --out " +
                       s.path("bad2.csv"))
            .exit_code == 2);
}

TEST_CASE("dof prints the estimators and optionally the jacobian") {
  Scratch s;
  auto r = run_cli(s, "dof --lambda " + kLambda + " --y 1,0,0,1,1 --n 3");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["gdof_hat"].get<double>() == doctest::Approx(-5.18843).epsilon(1e-5));
  CHECK(j["fd_error"].get<double>() < 1e-4);

  auto rj = run_cli(s, "dof --lambda " + kLambda +
                           " --y 1,0,0,1,1 --n 3 --out " + s.path("jac.csv"));
  REQUIRE(rj.exit_code == 0);
  auto rows = read_csv(s.path("jac.csv"));
  REQUIRE(rows.size() == 5);
  REQUIRE(rows[0].size() == 5);
  double trace = 0.0;
  for (int i = 0; i < 5; ++i) trace += std::stod(rows[i][i]);
  CHECK(trace == doctest::Approx(-5.18843).epsilon(1e-5));
  CHECK(fs::exists(s.path("jac.csv.summary.json")));
  CHECK(fs::exists(s.path("jac.csv.manifest.json")));
}

TEST_CASE("mc writes replicate tables, cdf tables and a summary") {
  Scratch s;
  auto r = run_cli(s, "mc --lambda " + kLambda +
                          " --beta 0.10,0.01,0.01,5.00,5.00 --sigma 0.02 --n 3 "
                          "--reps 50 --seed 42 --out-dir " +
                          s.path("mc"));
  REQUIRE(r.exit_code == 0);
  auto rows = read_csv(s.path("mc") + "/replicates.csv");
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] ==
        std::vector<std::string>({"replicate", "gdof_hat", "gdof_dp_hat"}));
  auto summary =
      nlohmann::json::parse(slurp(s.path("mc") + "/summary.json"));
  CHECK(summary["seed"] == 42);
  CHECK(summary["excluded_count"] == 0);
  CHECK(summary["se"].is_number());
  auto cdf = read_csv(s.path("mc") + "/cdf_gdof.csv");
  REQUIRE(cdf.size() == 51);
  double prev = -1e300;
  for (std::size_t i = 1; i < cdf.size(); ++i) {
    double v = std::stod(cdf[i][0]);
    CHECK(v >= prev);
    prev = v;
  }
  auto manifest = nlohmann::json::parse(slurp(s.path("mc") + "/manifest.json"));
  CHECK(manifest["seed"] == 42);
  CHECK(manifest["command"] == "mc");

  // identical seeds give identical replicate tables
  auto r2 = run_cli(s, "mc --lambda " + kLambda +
                           " --beta 0.10,0.01,0.01,5.00,5.00 --sigma 0.02 --n 3 "
                           "--reps 50 --seed 42 --out-dir " +
                           s.path("mc2"));
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(s.path("mc") + "/replicates.csv") ==
        slurp(s.path("mc2") + "/replicates.csv"));

  // a single replicate has no standard error
  auto r1 = run_cli(s, "mc --lambda " + kLambda +
                           " --beta 1,1,1,1,1 --sigma 0.1 --n 2 --reps 1 "
                           "--seed 7 --out-dir " +
                           s.path("mc1"));
  REQUIRE(r1.exit_code == 0);
  auto s1 = nlohmann::json::parse(slurp(s.path("mc1") + "/summary.json"));
  CHECK(s1["se"].is_null());
}

TEST_CASE("spectrum round-trips through exp-corr") {
  Scratch s;
  REQUIRE(run_cli(s, "exp-corr --m 5 --rate 0.33333333333333331 --out " +
                         s.path("g.csv"))
              .exit_code == 0);
  auto r = run_cli(s, "spectrum --gram " + s.path("g.csv"));
  REQUIRE(r.exit_code == 0);
  std::istringstream out(r.out);
  std::vector<double> ev;
  std::string line;
  while (std::getline(out, line))
    if (!line.empty()) ev.push_back(std::stod(line));
  REQUIRE(ev.size() == 5);
  CHECK(ev[0] == doctest::Approx(3.1851963159166412).epsilon(1e-12));
  CHECK(ev[4] == doctest::Approx(0.18088792793455968).epsilon(1e-12));

  // a repeated eigenvalue is a validation failure
  std::ofstream ident(s.path("ident.csv"), std::ios::binary);
  ident << "1,0\n0,1\n";
  ident.close();
  CHECK(run_cli(s, "spectrum --gram " + s.path("ident.csv")).exit_code == 2);
}
