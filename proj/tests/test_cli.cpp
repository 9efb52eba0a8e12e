#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "holomap/cli.hpp"

using namespace holomap;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, std::string_view part) { return s.find(part) != std::string::npos; }

const std::string counterexample = "h2prop(zeta=1,xi=1,kp=3,l=3,b=3,pp=2,qp=3,B=[0.5])";

/// Runs the built binary through the shell; returns exit status and stdout.
Result run_binary(const std::string& args) {
  std::string cmd = std::string("'") + HOLOMAP_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

}  // namespace

TEST_CASE("exists", "[cli]") {
  auto r = run({"exists", "E(4,6)", "E(2,3)"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"witness\":{\"sigma\":[1,2]}}\n");
  CHECK(r.err.empty());

  r = run({"exists", "F(1;0+1*s2)", "F(1;1)"});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("{\"non_existence\":{\"reason\":", 0) == 0);

  r = run({"exists", "F(2;3)", "F(2;5)"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"witness\":{\"k\":1,\"l\":1}}\n");

  r = run({"exists", "F(2;2,4)", "F(1;1,2)"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"witness\":{\"k\":2,\"sigma\":[1,2]}}\n");

  r = run({"exists", "E(1,2)", "F(1;1)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "\"code\":\"UnsupportedDimension\""));

  r = run({"exists", "E(1,2)", "E(1,2,3)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "DimensionMismatch"));
}

TEST_CASE("synth", "[cli]") {
  auto r = run({"synth", "--auto", "E(4,6)", "E(2,3)"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"map\":\"compose(pow(1,1),eaut(p=[2,3],sigma=[1,2],H=ballaut(a=[],U=[]),zeta=[1,1]),pow(2,2),"
                 "perm(1,2))\"}\n");

  r = run({"synth", "--auto", "F(2;3)", "F(2;5)", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out == "h2prop(zeta=1,xi=1,kp=1,l=1,b=1,pp=2,qp=3,B=[])\n");

  r = run({"synth", "F(2;3)", "F(2;5)", "--k=3", "--l=3", "--blaschke=[0.5]", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out == counterexample + "\n");

  r = run({"synth", "--auto", "F(2;2,4)", "F(1;1,2)", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("hfps(zeta=1,k=2,h=compose(", 0) == 0);

  r = run({"synth", "E(4,6)", "E(2,3)", "--sigma=1,2", "--r=1,1", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("compose(pow(2,2),", 0) == 0);

  r = run({"synth", "--auto", "F(1;0+1*s2)", "F(1;1)"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "non_existence"));

  r = run({"synth", "--auto", "--k=2", "F(2;3)", "F(2;5)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "UsageError"));

  r = run({"synth", "F(2;3)", "F(2;5)", "--k=1", "--l=2"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "CongruenceViolated"));

  r = run({"synth", "E(4,6)", "E(2,3)", "--sigma=1,x"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "\"column\":3"));
}

TEST_CASE("eval", "[cli]") {
  auto r = run({"eval", counterexample, "[0.5,0.9]"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"value\":[[-0.017274524006622521,0],[0.72900000000000009,0]]}\n");
  r = run({"eval", "pow(2,2)", "[0.5,0+0.5i]", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out == "[0.25,-0.25]\n");
  r = run({"eval", counterexample, "[0,0]"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "DomainViolation"));
  r = run({"eval", "pow(2,2)", "[0.5]"});
  CHECK(r.code == 2);
  r = run({"eval", "pow(2,2)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "UsageError"));
}

TEST_CASE("verify", "[cli]") {
  auto r = run({"verify", "--kind=proper", "--map=" + counterexample, "F(2;3)", "F(2;5)", "--n=1000", "--seed=7"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("{\"kind\":\"proper\",\"passed\":true,\"samples\":13000,\"seed\":7,\"tolerances\":{", 0) == 0);
  CHECK(contains(r.out, "\"levels\":[{\"eps\":0.0625,\"max_target_gap\":"));

  r = run({"verify", "--map=" + counterexample, "F(2;3)", "F(2;5)", "--n=500"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"kind\":\"into\""));
  CHECK(contains(r.out, "\"levels\":null"));

  r = run({"verify", "--kind", "into", "--map", "pow(1,1)", "E(1,1)", "E(1/2,1/2)"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "\"passed\":false"));

  r = run({"verify", "--kind=aut", "--map=h2aut(xi=1,s=2,theta=0.3,alpha=0.4)", "F(1;2)", "--n=300"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"kind\":\"aut\""));

  r = run({"verify", "--kind=aut", "--map=pow(2,2)", "E(1,1)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "NotInvertible"));

  r = run({"verify", "--kind=strata", "--map=hfps(zeta=1,k=2,h=pow(1,1))", "F(2;1,1)", "F(1;1,1)", "--n=50"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "\"kind\":\"strata\""));

  r = run({"verify", "--kind=strata", "--map=compose()", "F(1;1)", "F(1;1)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "UnsupportedDimension"));

  r = run({"verify", "--kind=bogus", "--map=pow(1)", "E(1)"});
  CHECK(r.code == 2);
  r = run({"verify", "E(1,1)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "needs --map"));
  r = run({"verify", "--map=pow(1,1)", "E(1,1)", "--n=0"});
  CHECK(r.code == 2);
  r = run({"verify", "--map=pow(1,1)", "E(1,1)", "--n=many"});
  CHECK(r.code == 2);
}

TEST_CASE("aut, compose and print", "[cli]") {
  auto r = run({"aut", "E(1,1,2)", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out == "eaut(p=[1,1,2],sigma=[1,2,3],H=ballaut(a=[0,0],U=[[1,0],[0,1]]),zeta=[1])\n");

  auto a = run({"aut", "E(1,1,2)", "--random", "--seed=5"});
  auto b = run({"aut", "E(1,1,2)", "--random", "--seed=5"});
  auto c = run({"aut", "E(1,1,2)", "--random", "--seed=6"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  r = run({"aut", "F(1;2)", "--random", "--seed=1", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("h2aut(", 0) == 0);

  r = run({"compose", "pow(2,2)", "compose(perm(2,1))", "--no-json"});
  CHECK(r.code == 0);
  CHECK(r.out == "compose(pow(2,2),perm(2,1))\n");
  r = run({"compose", "pow(2,2)", "pow(1)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "DimensionMismatch"));

  r = run({"print", " compose( pow(2, 2) ) "});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"map\":\"compose(pow(2,2))\"}\n");
}

TEST_CASE("usage and parse errors", "[cli]") {
  auto r = run({"print", "pow(2,"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err == "{\"error\":{\"code\":\"ParseError\",\"message\":\"ParseError: line 1, column 7: expected digit, "
                 "found end of input\",\"line\":1,\"column\":7,\"expected\":\"digit\",\"found\":\"end of input\"}}\n");

  r = run({"exists", "E(2,2)"});
  CHECK(r.code == 2);
  r = run({});
  CHECK(r.code == 2);
  r = run({"frobnicate"});
  CHECK(r.code == 2);
  r = run({"exists", "--bogus", "E(1,1)", "E(1,1)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "unknown option --bogus"));
  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "exists"));

  // a leading minus followed by a digit is a positional, not an option
  r = run({"eval", "pow(1)", "[-0.5]"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"value\":[[-0.5,0]]}\n");
}

TEST_CASE("repeated invocations are byte-identical", "[cli]") {
  const std::vector<std::vector<std::string>> cases = {
      {"verify", "--kind=proper", "--map=" + counterexample, "F(2;3)", "F(2;5)", "--n=200", "--seed=3"},
      {"verify", "--kind=aut", "--map=h2aut(xi=1,s=2,theta=0.3,alpha=0.4)", "F(1;2)", "--seed=4"},
      {"aut", "F(3/2;1,1,2)", "--random", "--seed=11"},
      {"synth", "--auto", "E(2,2)", "E(1/2,1/2)"},
      {"eval", counterexample, "[0.1+0.2i,0.5-0.3i]"},
  };
  for (const auto& args : cases) {
    auto first = run(args);
    auto second = run(args);
    CHECK(first.code == second.code);
    CHECK(first.out == second.out);
    CHECK(first.err == second.err);
  }
}

TEST_CASE("binary exit codes", "[cli]") {
  auto r = run_binary("exists 'E(4,6)' 'E(2,3)'");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"witness\":{\"sigma\":[1,2]}}\n");
  CHECK(run_binary("exists 'F(1;0+1*s2)' 'F(1;1)'").code == 1);
  CHECK(run_binary("print 'pow(2,'").code == 2);
  auto v1 = run_binary("verify --kind=proper '--map=" + counterexample + "' 'F(2;3)' 'F(2;5)' --n=1000 --seed=7");
  auto v2 = run_binary("verify --kind=proper '--map=" + counterexample + "' 'F(2;3)' 'F(2;5)' --n=1000 --seed=7");
  CHECK(v1.code == 0);
  CHECK(v1.out == v2.out);
  CHECK(v1.out == run({"verify", "--kind=proper", "--map=" + counterexample, "F(2;3)", "F(2;5)", "--n=1000",
                       "--seed=7"}).out);
}
