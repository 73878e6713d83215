#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "nrnet_test_cli";

struct Run {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  fs::create_directories(kScratch);
  const auto out = kScratch / "stdout.txt";
  const std::string cmd = std::string("\"") + NRNET_CLI + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          (kScratch / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

void write(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("scatter prints the matrix") {
  const auto r = run("scatter --n 3 --gamma 0.5 --kappa 0.25 --Gamma 1 --zeta inf");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["entries"].size() == 3);
  const double re = j["entries"][1][0][0];
  const double im = j["entries"][1][0][1];
  CHECK(std::hypot(re, im) == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("parameter file and overrides") {
  const auto file = kScratch / "params.json";
  write(file, R"({"n": 20, "gamma_pump": 0.5, "kappa": 0.25, "Gamma": 1, "zeta": "inf"})");
  auto r = run("scatter --method analytic --params \"" + file.string() + "\"");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["prefactor"].get<double>() == doctest::Approx(16.0 / 15.0));

  r = run("winding --params \"" + file.string() + "\" --gamma 1.0 --zeta 1 --n 40");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["nu"] == -1);

  write(file, R"({"n": 20, "gamma_pump": 0.5, "kappa": 0.25, "Gamma": 1, "zeta": 1, "pump": 3})");
  CHECK(run("scatter --params \"" + file.string() + "\"").code == 2);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("scatter --n 1").code == 2);
  CHECK(run("scatter --kappa -1").code == 2);
  CHECK(run("scatter --format svg").code == 2);
  CHECK(run("scatter --n 10 --gamma 1.25 --kappa 0.25 --Gamma 1").code == 3);
  CHECK(run("winding --n 10 --gamma 0.25 --kappa 0.25 --Gamma 0").code == 3);
  CHECK(run("dynamics --n 5 --gamma 1.5").code == 2);
  CHECK(run("scatter --params /nonexistent/params.json").code == 4);
  write(kScratch / "blocker", "x");
  CHECK(run("scatter --n 3 --out \"" + (kScratch / "blocker" / "sub").string() + "\"").code == 4);
  CHECK(run("--help").code == 0);
}

TEST_CASE("verify is deterministic in the seed") {
  const auto a = run("verify --draws 20 --seed 5");
  const auto b = run("verify --draws 20 --seed 5");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["pass"] == true);
  CHECK(j["draws"] == 20);
  CHECK(run("verify --draws 5 --seed 5 --tolerance 0").code == 3);
}

TEST_CASE("sweep writes every requested format") {
  const auto dir = kScratch / "sweep";
  fs::remove_all(dir);
  const auto r = run("sweep --n 10 --axis1 gamma_pump:0:1:4 --axis2 zeta:1:10:3:log --quantities gain,winding "
                     "--format csv,json,svg --name grid --out \"" + dir.string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "grid.csv"));
  CHECK(fs::exists(dir / "grid.json"));
  CHECK(fs::exists(dir / "grid.svg"));
  CHECK(slurp(dir / "grid.csv").rfind("gamma_pump,zeta,phase,gain,winding\n", 0) == 0);
  CHECK(run("sweep --axis1 gamma_pump:0:1 --out \"" + dir.string() + "\"").code == 2);
}

TEST_CASE("edge, dynamics and bandwidth subcommands") {
  auto r = run("edge --n 40 --gamma 0.5 --zeta 1e9 --analytic");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["zero_mode"] == true);
  CHECK(j["analytic"]["xi_prime"].get<double>() == doctest::Approx(1.0 / std::log(5.0 / 3.0)).epsilon(1e-6));

  r = run("dynamics --n 5 --gamma 0.5 --zeta inf --dt 0.01");
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["gain_abs"].get<double>() == doctest::Approx(8.2304526).epsilon(1e-6));

  r = run("scatter --n 20 --gamma 0.5 --bandwidth-out 20 --bandwidth-in 1 --detuning-max 1 --detuning-count 401");
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["fwhm"].is_number());
  CHECK(j["peak_gain"].get<double>() == doctest::Approx(3.06e8).epsilon(5e-3));
}
