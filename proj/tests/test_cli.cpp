#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

// Drives the installed binary through a shell; the path arrives in the
// OPINT_CLI environment variable set by ctest.

namespace {

struct RunResult {
  int status;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("OPINT_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "OPINT_CLI must point at the opint binary");
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), p)) out += buf.data();
  int rc = pclose(p);
  return {WEXITSTATUS(rc), out};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("integrate over the real line reports pi with an oracle delta") {
  auto r = run_cli("integrate --domain real --route delta \"sin(x)/x\" --oracle --format json");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "3.14159265358979"));
  CHECK(contains(r.out, "\"route\": \"delta-exact\""));
  CHECK(contains(r.out, "\"verified\": true"));
  // oracle delta below 1e-8: the printed delta starts with small exponent
  CHECK(contains(r.out, "\"delta\""));
}

TEST_CASE("inverse Laplace prints the exponential in expression syntax") {
  auto r = run_cli("invlaplace \"1/(x-2)\"");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "exp(2*x)"));
}

TEST_CASE("empty interval integrates to zero with exit status 0") {
  auto r = run_cli("integrate --domain finite --from 0 --to 0 \"exp(x)\"");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "value     0"));
}

TEST_CASE("json report schema") {
  auto r = run_cli("integrate --domain real \"sin(x)^2/x^2\" --format json");
  CHECK(r.status == 0);
  for (const char* key : {"\"value\"", "\"re\"", "\"im\"", "\"route\"", "\"diagnostics\"",
                          "\"oracle\"", "\"verified\""})
    CHECK(contains(r.out, key));
}

TEST_CASE("csv convergence table has the documented columns") {
  auto r = run_cli(
      "integrate --domain real \"sin(x)/x\" --numeric --reg gaussian --format csv --tol 1e-6");
  CHECK(contains(r.out, "step,parameter,estimate,delta_prev,bound"));
}

TEST_CASE("ambiguous pole integral: symbolic errors, prescriptions shift") {
  auto sym = run_cli("integrate --domain finite --from -1 --to 1 \"1/x\" --constant symbolic");
  CHECK(sym.status != 0);
  CHECK(contains(sym.out, "pole prescription"));

  auto a = run_cli(
      "integrate --domain finite --from -1 --to 1 \"1/x\" --constant value=2 --format json");
  auto b = run_cli(
      "integrate --domain finite --from -1 --to 1 \"1/x\" --constant value=5 --format json");
  CHECK(a.status == 0);
  CHECK(b.status == 0);
  CHECK(contains(a.out, "\"re\": \"2\""));
  CHECK(contains(b.out, "\"re\": \"5\""));
}

TEST_CASE("parameters are substituted exactly") {
  auto r = run_cli(
      "integrate --domain real \"(1-cos(t*x))/x^2\" --param t=0.5 --format json");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "1.570796326794"));  // pi * |0.5|
}

TEST_CASE("unknown flags and bad routes are rejected") {
  CHECK(run_cli("integrate --domain real \"sin(x)/x\" --frobnicate").status != 0);
  CHECK(run_cli("integrate --domain lattice \"sin(x)/x\"").status != 0);
}

TEST_CASE("engine errors surface with nonzero status") {
  auto r = run_cli("integrate --domain real --route delta \"1\" --numeric");
  CHECK(r.status != 0);
  CHECK(contains(r.out, "diverge"));
}

TEST_CASE("fourier and spectrum commands") {
  auto f = run_cli("fourier \"exp(-x^2/2)\" --at 0.5");
  CHECK(f.status == 0);
  CHECK(contains(f.out, "0.8824969"));  // e^{-0.125}

  auto s = run_cli("spectrum \"exp(-t)+exp(-2*t)\" --format json");
  CHECK(s.status == 0);
  CHECK(contains(s.out, "\"rate\": \"1\""));
  CHECK(contains(s.out, "\"rate\": \"2\""));
}

TEST_CASE("ftc-check validates the calculus identity") {
  auto r = run_cli("ftc-check \"x^3-2*x\" --from -1 --to 2 --format json");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "\"exact\": true"));
}
