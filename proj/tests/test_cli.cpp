#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "liftlab/cli.hpp"

using liftlab::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("documented invocations") {
  auto lift = run({"lift", "--q", "3", "--x", "1:0:0", "--y", "0:1:0", "--tmax", "3"});
  REQUIRE(lift.code == 0);
  auto l = lines(lift.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "q,space,source,target,found,norm,gamma,candidates_scanned");
  CHECK(l[1].rfind("3,proj,1:0:0,0:1:0,true,1,", 0) == 0);

  auto sl2 = run({"count-sl2", "--q", "2", "--t", "2", "--no-timing"});
  REQUIRE(sl2.code == 0);
  CHECK(lines(sl2.out) == std::vector<std::string>{"q,gauge,T,space,value,wall_seconds", "2,inf,2,none,10,0"});

  auto vol = run({"haar-volume", "--gauge", "H2", "--t", "1"});
  REQUIRE(vol.code == 0);
  CHECK(lines(vol.out)[1] == "H2,1,0");
}

TEST_CASE("exit codes") {
  auto unknown = run({"lift", "--q", "3", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({"nope"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"count-sl2", "--q", "0", "--t", "2"}).code == 2);
  CHECK(run({"enumerate", "--t", "41", "--count-only"}).code == 3);
  CHECK(run({"count-sl2", "--q", "3", "--t", "2000000"}).code == 3);
  CHECK(run({"enumerate", "--t", "1", "--gzip"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config precedence and determinism") {
  const std::string path = "test_cli_config.txt";
  {
    std::ofstream f(path);
    f << "# sweep\nq = 3,5\nt=10\nno-timing = true\n";
  }
  auto a = run({"count-sl2", "--config", path});
  REQUIRE(a.code == 0);
  CHECK(lines(a.out).size() == 3);
  auto b = run({"count-sl2", "--config", path, "--t", "20"});
  REQUIRE(b.code == 0);
  CHECK(lines(b.out)[1].find(",20,") != std::string::npos);
  {
    std::ofstream f(path);
    f << "qq = 3\n";
  }
  CHECK(run({"count-sl2", "--config", path, "--t", "1", "--q", "1"}).code == 2);
  std::remove(path.c_str());

  const std::vector<std::string> xi{"xi", "--n", "8192", "--seed", "5"};
  auto x1 = run(xi);
  auto x2 = xi;
  x2.insert(x2.end(), {"--threads", "3"});
  CHECK(x1.out == run(x2).out);

  auto e1 = run({"exponent-experiment", "--q", "11", "--eps", "0.1", "--pairs", "30", "--seed", "2", "--format", "json",
                 "--no-timing"});
  auto e2 = run({"exponent-experiment", "--q", "11", "--eps", "0.1", "--pairs", "30", "--seed", "2", "--format", "json",
                 "--no-timing", "--threads", "2"});
  REQUIRE(e1.code == 0);
  CHECK(e1.out.find("\"seed\": 2") != std::string::npos);
  CHECK(e1.out.find("\"thresholds\"") != std::string::npos);
  CHECK(e1.out.substr(e1.out.find("\"rows\"")) == e2.out.substr(e2.out.find("\"rows\"")));

  auto gen = run({"xi", "--n", "1000"});
  REQUIRE(gen.code == 0);
  CHECK(lines(gen.out)[0] == "estimate,stderr,n_samples,seed");
  auto cov = run({"coverage", "--q", "7", "--t", "1,2"});
  REQUIRE(cov.code == 0);
  CHECK(lines(cov.out)[0].rfind("# seed=", 0) == 0);
}

TEST_CASE("enumerate listings") {
  auto plain = run({"enumerate", "--t", "1"});
  REQUIRE(plain.code == 0);
  CHECK(lines(plain.out).size() == 3480);
  auto oracle = run({"enumerate", "--t", "1", "--oracle", "--count-only", "--no-timing"});
  CHECK(lines(oracle.out)[1] == "1,inf,1,none,3480,0");
  auto filtered = run({"enumerate", "--gauge", "delta", "--t", "5", "--filter", "point", "--q", "5", "--count-only"});
  REQUIRE(filtered.code == 0);
  CHECK(lines(filtered.out)[1].rfind("5,delta,5,proj,", 0) == 0);

  const std::string gz = "test_cli_listing.gz";
  REQUIRE(run({"enumerate", "--group", "sl2", "--t", "3", "--gzip", "--output", gz}).code == 0);
  std::ifstream f(gz, std::ios::binary);
  unsigned char magic[2] = {0, 0};
  f.read(reinterpret_cast<char*>(magic), 2);
  CHECK(magic[0] == 0x1f);
  CHECK(magic[1] == 0x8b);
  std::remove(gz.c_str());
}

TEST_CASE("fit reads count tables") {
  const std::string path = "test_cli_fit.csv";
  {
    std::ofstream f(path);
    f << "q,gauge,T,space,value,wall_seconds\n1,inf,1,none,1,0\n1,inf,2,none,64,0\n";
  }
  auto r = run({"fit", "--input", path});
  REQUIRE(r.code == 0);
  CHECK(std::stod(lines(r.out)[1]) == doctest::Approx(6.0));
  std::remove(path.c_str());
}
