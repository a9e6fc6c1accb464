#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cpt/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cpt::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("darkstates reports the two Lambda dark states of lin||lin via F_e=1") {
  const Result r = run({"darkstates"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("dark_states 2\n") != std::string::npos);
  CHECK(r.out.find("trap_states 0\n") != std::string::npos);
  const Result s = run({"--scheme", "sigma_sigma", "--excited-F", "2", "darkstates"});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("trap_states 1\n") != std::string::npos);
}

TEST_CASE("darkstates pair selection") {
  CHECK(run({"--pair", "all", "darkstates"}).code == 0);
  CHECK(run({"--pair", "auto", "darkstates"}).code == 0);
  const Result one = run({"--pair", "-1:1", "darkstates"});
  REQUIRE(one.code == 0);
  CHECK(one.out.find("dark_states 1\n") != std::string::npos);
  CHECK(run({"--pair", "5:1", "darkstates"}).code == 2);
  CHECK(run({"--pair", "nonsense", "darkstates"}).code == 2);
}

TEST_CASE("scan commands need an explicit detuning range") {
  for (const char* cmd : {"scan", "bscan", "compare"}) {
    const Result r = run({cmd});
    CHECK(r.code == 2);
    CHECK(r.err.find("delta-start-hz") != std::string::npos);
  }
}

TEST_CASE("scan writes a two-column CSV") {
  const Result r = run({"scan", "--delta-start-hz", "-2000", "--delta-stop-hz", "2000", "--delta-step-hz", "100"});
  REQUIRE(r.code == 0);
  CHECK(first_line(r.out) == "delta_R_hz,absorption");
  CHECK(count_lines(r.out) == 42);
  const Result again = run({"scan", "--delta-start-hz", "-2000", "--delta-stop-hz", "2000", "--delta-step-hz", "100"});
  CHECK(again.out == r.out);
}

TEST_CASE("bscan header and field list") {
  const Result r = run({"bscan", "--b-list", "0.1,0.2", "--delta-start-hz", "-1000", "--delta-stop-hz", "1000",
                        "--delta-step-hz", "100"});
  REQUIRE(r.code == 0);
  CHECK(first_line(r.out) == "B_gauss,delta_R_hz,absorption");
  CHECK(count_lines(r.out) == 1 + 2 * 21);
}

TEST_CASE("compare output") {
  const Result r = run({"compare", "--compare-rabi-hz", "1e6", "--delta-start-hz", "-5000", "--delta-stop-hz", "5000",
                        "--delta-step-hz", "500"});
  REQUIRE(r.code == 0);
  CHECK(first_line(r.out) ==
        "scheme,excited_F,rabi_hz,amplitude,fwhm_hz,contrast,amp_to_width,center_hz,n_peaks,background");
  CHECK(count_lines(r.out) == 4);
  CHECK(run({"compare", "--compare-schemes", "lin_par_lin:1", "--delta-start-hz", "-5000", "--delta-stop-hz", "5000"})
            .code == 2);
}

TEST_CASE("comments echo the configuration") {
  const Result r = run({"scan", "--comments", "--delta-start-hz", "-1000", "--delta-stop-hz", "1000"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# ", 0) == 0);
  CHECK(r.out.find("delta_R_hz,absorption") != std::string::npos);
}

TEST_CASE("configuration files") {
  const auto good = temp_file("cptsim_good.ini",
                              "# field list for the family scan\n"
                              "b-list = 0.1,0.3\n"
                              "delta-start-hz = -1000\n"
                              "delta-stop-hz = 1000\n"
                              "delta-step-hz = 100\n");
  const Result r = run({"--config", good.string(), "bscan"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 1 + 2 * 21);

  const auto bad = temp_file("cptsim_bad.ini", "b-gauss = 0.2\nbogus-key = 3\n");
  const Result e = run({"--config", bad.string(), "levels"});
  CHECK(e.code == 2);
  CHECK(e.err.find("bogus-key") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"levels", "--no-such-option"}).code == 2);
  CHECK(run({"--atom", "k39", "levels"}).code == 2);
  CHECK(run({"--rabi1-hz", "-5", "scan", "--delta-start-hz", "0", "--delta-stop-hz", "100"}).code == 2);
  const Result singular = run({"--gamma-ground-hz", "0", "--b-gauss", "0", "scan", "--delta-start-hz", "-100",
                               "--delta-stop-hz", "100", "--delta-step-hz", "50"});
  CHECK(singular.code == 3);
  CHECK(singular.err.find("delta_R") != std::string::npos);
}

TEST_CASE("levels and --out") {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "cptsim_levels.csv";
  std::filesystem::remove(p);
  const Result r = run({"--atom", "cs133", "--excited-F", "3", "levels", "--out", p.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(p);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(first_line(text.str()) == "manifold,F,m,energy_hz");
  CHECK(count_lines(text.str()) == 1 + 16 + 7);
}

TEST_CASE("the installed executable behaves like the library entry point") {
  const char* exe = std::getenv("CPTSIM");
  if (exe == nullptr) return;
  const std::string cmd = std::string(exe) + " darkstates 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 256> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  CHECK(status == 0);
  CHECK(out == run({"darkstates"}).out);
}
