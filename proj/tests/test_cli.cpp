#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "orthoroots_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(ORTHO_CLI) + " " + args + " >" + (kDir / "stdout").string() + " 2>" +
                          (kDir / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Fresh {
  Fresh() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fresh, "simulate writes a row and a sidecar that reproduces it") {
  const auto out = (kDir / "g.csv").string();
  REQUIRE(run("simulate --weight jacobi --beta 0 --gamma 0 --dist gaussian --n 60 --trials 50 --interval -1.1,1.1 "
              "--interval 0,0.5 --seed 42 --out " + out) == 0);
  const auto csv = slurp(out);
  CHECK(csv.find("global,jacobi,0,0,gaussian,60,50,") != std::string::npos);
  CHECK(fs::exists(out + ".json"));
  CHECK(slurp(kDir / "stderr").find("\"config\"") != std::string::npos);

  const auto out2 = (kDir / "g2.csv").string();
  REQUIRE(run("simulate --config " + out + ".json --workers 3 --out " + out2) == 0);
  CHECK(slurp(out2) == csv);
}

TEST_CASE_FIXTURE(Fresh, "exit codes") {
  CHECK(run("simulate --n -5") == 1);
  CHECK(slurp(kDir / "stderr").find("--n") != std::string::npos);
  CHECK(run("simulate --bogus 3") == 1);
  CHECK(run("trig --dist gaussian --n 3") == 1);
  CHECK(run("simulate --n 20 --trials 10 --max-points 8") == 2);
  CHECK(run("simulate --config /nonexistent.json") == 1);
  CHECK(run("") == 1);
}

TEST_CASE_FIXTURE(Fresh, "environment worker override is accepted and validated") {
  CHECK(run("simulate --n 10 --trials 5") == 0);
  CHECK(std::system((std::string("ORTHO_WORKERS=abc ") + ORTHO_CLI + " simulate --n 10 --trials 5 2>/dev/null >/dev/null").c_str()) != 0);
}

TEST_CASE_FIXTURE(Fresh, "density curve is symmetric") {
  const auto out = (kDir / "rho.csv").string();
  REQUIRE(run("density --weight jacobi --beta 0 --gamma 0 --n 200 --grid 1000 --out " + out) == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,rho,rho_over_n,limit_density");
  std::vector<double> x, rho;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    double a, b;
    char comma;
    row >> a >> comma >> b;
    x.push_back(a);
    rho.push_back(b);
  }
  REQUIRE(x.size() == 1000);
  for (std::size_t i = 0; i < 500; ++i) {
    CHECK(x[i] == -x[999 - i]);
    CHECK(rho[i] == doctest::Approx(rho[999 - i]).epsilon(1e-12));
  }
}

TEST_CASE_FIXTURE(Fresh, "other subcommands run") {
  CHECK(run("basis --n 5") == 0);
  CHECK(slurp(kDir / "stdout").rfind("k,a,b,p0\n0,0,", 0) == 0);
  CHECK(run("basis --n 3 --at 0.5 --at -0.25") == 0);
  CHECK(run("trig --n 1 --trials 20") == 0);
  CHECK(slurp(kDir / "stdout").find("trig,trig,,,gaussian,1,20,") != std::string::npos);
  CHECK(run("edge --n 40 --trials 20 --eps 0.2 --eps 0.1") == 0);
  CHECK(run("paircorr --n 40 --trials 20 --x0 0 --c 1") == 0);
  CHECK(run("anticonc --n 40 --trials 20 --x0 0 --c 1") == 0);
  CHECK(run("universality --n 30 --trials 30 --dist gaussian --dist-b rademacher") == 0);
  CHECK(run("universality --n 30 --trials 30") == 1);
  CHECK(run("checkweight --weight jacobi --beta 0.25") == 0);
  CHECK(slurp(kDir / "stdout").find("circle_finite") != std::string::npos);
}
