#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("stein_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + STEIN_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path write(const std::string& name, const std::string& body) {
  const auto p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("estimate produces the documented JSON") {
  const auto x = write("x.csv", "1.0\n-0.5\n0.3\n2.0\n0.1\n");
  const auto r = run("estimate --p 5 --n 5 --x " + x.string() + " --s 3.0 --confidence c0,c2,c1-star");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["estimate"].size() == 5);
  CHECK(j["w"].get<double>() == doctest::Approx((1 + 0.25 + 0.09 + 4 + 0.01) / 3.0));
  CHECK(j["confidence"].size() == 3);
  CHECK(j.contains("mse"));
  CHECK(j.contains("matrix"));
  CHECK(j.contains("constants"));
}

TEST_CASE("canonicalize feeds estimate") {
  const auto a = write("a.csv",
                       "1,0,0\n0,1,0\n0,0,1\n1,1,0\n0,1,1\n1,0,1\n1,1,1\n2,0,1\n");
  const auto y = write("y.csv", "1\n2\n3\n3.1\n4.9\n4.2\n6.1\n5\n");
  const auto c = run("canonicalize --design " + a.string() + " --response " + y.string());
  REQUIRE(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j["p"] == 3);
  CHECK(j["n"] == 5);
  const auto canon = write("canon.json", c.out);
  const auto e = run("estimate --input " + canon.string() + " --family js");
  REQUIRE(e.code == 0);
  const auto je = nlohmann::json::parse(e.out);
  CHECK(je["estimate"].size() == 3);
}

TEST_CASE("usage and domain errors exit with 2") {
  const auto x = write("x2.csv", "1.0\n2.0\n");
  CHECK(run("estimate --p 2 --n 5 --x " + x.string() + " --s 1").code == 2);
  CHECK(run("estimate --p 5 --n 5 --s 1").code == 2);
  CHECK(run("risk-curve --reps 10").code == 2);
  CHECK(run("constants --method mc").code == 2);
  CHECK(run("nonsense").code == 2);
  const auto bad = write("bad.csv", "1.0\nabc\n");
  CHECK(run("estimate --p 2 --n 5 --x " + bad.string() + " --s 1").code == 2);
}

TEST_CASE("constants by quadrature") {
  const auto dir = scratch() / "tables";
  const auto r = run("constants --method quadrature --dims 5x5 --j-max 20 --out " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "beta2.csv"));
  CHECK(fs::exists(dir / "plot.py"));
  std::ifstream in(dir / "w_pn.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("0.630") != std::string::npos);
}

TEST_CASE("risk-curve runs and is reproducible") {
  const std::string args = "risk-curve --seed 3 --reps 50 --lambda 0,5 --constants-method quadrature --j-max 20";
  const auto a = run(args + " --threads 1");
  const auto b = run(args + " --threads 2");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("p,n,family", 0) == 0);
}
