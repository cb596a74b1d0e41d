#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SADJ_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool has_line(const std::string& s, const std::string& want) {
  for (const auto& l : lines(s))
    if (l == want) return true;
  return false;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(std::stod(f));
  return v;
}

}  // namespace

TEST_CASE("momdist") {
  const auto r = run("momdist --bc neumann --l 7 --L 1 --nmin -10 --nmax 10");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls.front() == "n,k,probability");
  CHECK(has_line(r.out, "7,21.9911485751,0.25"));
  CHECK(ls.back().rfind("# sum=", 0) == 0);
  CHECK(ls.size() == 23);
  int prev = -100;
  for (std::size_t j = 1; j + 1 < ls.size(); ++j) {
    const int n = static_cast<int>(fields(ls[j])[0]);
    CHECK(n > prev);
    prev = n;
  }
  CHECK(has_line(run("momdist --bc neumann --l 0").out, "0,0,0.5"));
  CHECK(run("momdist --bc dirichlet --l 0").code == 2);
  CHECK(run("momdist --bc periodic --l 1").code == 2);
  CHECK(run("momdist --bc neumann").code == 2);
  CHECK(run("momdist --bc neumann --l 1 --nmin 3 --nmax 1").code == 2);
}

TEST_CASE("spectrum") {
  auto r = run("spectrum --mode interval --L 1 --theta 0 --count 3");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "index,value");
  for (int n = 1; n <= 3; ++n) CHECK(fields(ls[n])[1] == doctest::Approx(n * M_PI).epsilon(1e-11));

  r = run("spectrum --mode circle --theta 3.141592653589793 --count 2");
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "0,0.5"));

  r = run("spectrum --mode lattice --N 3 --L 3");
  REQUIRE(r.code == 0);
  ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(fields(ls[1])[1] == doctest::Approx(-0.70710678).epsilon(1e-8));
  CHECK(std::abs(fields(ls[2])[1]) < 1e-12);
  CHECK(fields(ls[3])[1] == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(run("spectrum --mode lattice --N 3 --a 1").out == r.out);
  CHECK(run("spectrum --mode sphere").code == 2);
  CHECK(run("spectrum --mode lattice --N 1").code == 2);
}

TEST_CASE("converge") {
  auto r = run("converge --levels 2 --sizes 65,129,257");
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  CHECK(ls[0] == "level,target,slope,intercept,final_error");
  int rows = 0;
  for (const auto& l : ls)
    if (!l.empty() && l[0] != '#' && l != ls[0]) {
      CHECK(fields(l).size() == 5);
      ++rows;
    }
  CHECK(rows == 2);
  CHECK(run("converge --sizes 64").code == 2);
  CHECK(run("converge --sizes 64,x").code == 2);
}

TEST_CASE("sample") {
  const std::string args = "sample --bc neumann --l 7 --nmin -100 --nmax 100 --shots 100000 --seed 42";
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto ls = lines(a.out);
  CHECK(ls[0] == "n,count,frequency,probability");
  CHECK(ls.back().rfind("# shots=100000", 0) == 0);
  for (const auto& l : ls) {
    if (l.empty() || l[0] == '#' || l == ls[0]) continue;
    const auto f = fields(l);
    const double p = f[3];
    CHECK(std::abs(f[2] - p) <= 5.0 * std::sqrt(p * (1 - p) / 1e5) + 1e-12);
  }
  CHECK(run("sample --bc neumann --l 7 --shots 0").code == 2);
  CHECK(run("sample --bc neumann --l 7 --shots -5").code == 2);
}

TEST_CASE("halfline") {
  auto r = run("halfline --gamma -1 --bound --kmax 2 --dk 0.5");
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "0,0.318309886184"));
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 10);
  for (std::size_t j = 1; j <= 4; ++j) CHECK(fields(ls[j])[1] == fields(ls[10 - j])[1]);
  CHECK(run("halfline --gamma 1 --bound").code == 2);

  r = run("halfline --gamma -1 --kmax 1 --dk 1");
  REQUIRE(r.code == 0);
  const auto q = lines(r.out);
  CHECK(fields(q[2])[1] == doctest::Approx(1.0 / M_PI).epsilon(1e-6));
}

TEST_CASE("weylcheck") {
  auto r = run("weylcheck --mode halfline --a 0.3 --q 2.0 --samples 64");
  CHECK(r.code == 0);
  CHECK(r.out.find(",PASS") != std::string::npos);
  const auto f = lines(r.out)[1];
  CHECK(std::stod(f.substr(f.find(',', f.find(',') + 1) + 1)) <= 1e-10);
  CHECK(run("weylcheck --mode interval --a 0.3").code == 0);
  CHECK(run("weylcheck --mode circle --a 0.3").code == 0);

  r = run("weylcheck --mode halfline --a 0.3 --q 2.0 --tol 1e-30");
  CHECK(r.code == 1);
  CHECK(r.out.find(",FAIL") != std::string::npos);

  r = run("weylcheck --mode halfline --a 0 --q 2.0");
  CHECK(r.code == 0);
  CHECK(r.out.find("halfline,64,0,") != std::string::npos);
  CHECK(run("weylcheck --mode torus").code == 2);
}

TEST_CASE("output to a file") {
  const auto path = std::filesystem::temp_directory_path() / "sadj_cli_test.csv";
  std::filesystem::remove(path);
  const auto r = run("momdist --bc dirichlet --l 2 --out " + path.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run("momdist --bc dirichlet --l 2 --out -").out);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}
