#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const char* bin = std::getenv("ARRIVAL_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> r;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) r.push_back(l);
  return r;
}

const std::string beam = "--set mode=beam --set navg=inf ";

}  // namespace

TEST_CASE("usage and exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("intensity --set bogus=1").code == 2);
  CHECK(run("intensity --set a=-1").code == 2);
  CHECK(run("intensity --config /nonexistent/scenario.cfg").code == 2);
  CHECK(run("fisher -n 0 " + beam + "--r0 1").code == 2);
  CHECK(run("fisher --family fock -n 2 " + beam + "--r0 1").code == 2);
  CHECK(run("no-such-command").code != 0);
}

TEST_CASE("CSV layouts") {
  const auto in = lines(run("intensity " + beam + "--set r0=1 --out-dt 5 --t-max 20").out);
  REQUIRE(in.size() == 6);
  CHECK(in[0] == "trace,t,omega,Omega,domega_dp0");
  CHECK(in[1].rfind("beam r0=1,0,0.1,0,", 0) == 0);

  const auto de = lines(run("density --family coherent --r0 1 --out-dt 10 --t-max 30 " + beam).out);
  REQUIRE(de.size() == 5);
  CHECK(de[0] == "family,r0,t,p1");
  CHECK(de[1] == "coherent,1,0,0.1");

  const auto fi = lines(run("fisher --family coherent -n 1:3 --r0 0.01 " + beam).out);
  REQUIRE(fi.size() == 4);
  CHECK(fi[0] == "n,r0,I_n,I_n_cond,p_n_tot,noevent_part");
  CHECK(fi[1].rfind("1,0.01,0.2136", 0) == 0);

  const auto sw = lines(run("sweep-density --family quasi-free -n 1 --r0 0 " + beam).out);
  REQUIRE(sw.size() == 2);
  CHECK(sw[0] == "family,n,r0,I_n");
  CHECK(sw[1].rfind("quasi-free,1,0,0.0030234", 0) == 0);
}

TEST_CASE("sampling is reproducible") {
  const std::string args = "sample --family coherent -n 3 --count 50 " + beam + "--set r0=1 ";
  const Run a = run(args + "--seed 5");
  const Run b = run(args + "--seed 5 --threads 3");
  const Run c = run(args + "--seed 6");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  const auto l = lines(a.out);
  REQUIRE(l.size() == 52);
  CHECK(l[0] == "# family=coherent n=3 count=50 seed=5");
  CHECK(l[2].rfind("3,", 0) == 0);
}

TEST_CASE("switched-off detector never clicks") {
  const auto l = lines(run("intensity --set a=0 --out-dt 10 --t-max 30").out);
  REQUIRE(l.size() == 5);
  for (std::size_t i = 1; i < l.size(); ++i) {
    // Columns after trace and t: omega, Omega, domega_dp0.
    const std::string tail = l[i].substr(l[i].find(',', l[i].find(',') + 1));
    CHECK(tail == ",0,0,0");
  }
}
