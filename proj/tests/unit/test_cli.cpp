#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "stoprule/cli.hpp"
#include "stoprule/types.hpp"

using nlohmann::json;
namespace cli = stoprule::cli;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_req(const cli::RunRequest& req) {
  std::ostringstream out, err;
  Outcome result;
  result.code = cli::run(req, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

cli::RunRequest request(cli::Command command, const std::string& variant = "",
                        stoprule::Index n = 0, cli::Format format = cli::Format::json) {
  cli::RunRequest req;
  req.command = command;
  req.variant = variant;
  req.n = n;
  req.format = format;
  return req;
}

std::string fifteen_digits(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

}  // namespace

TEST_CASE("solve emits the documented json fields") {
  const auto res = run_req(request(cli::Command::solve, "classical", 2));
  REQUIRE(res.code == 0);
  CHECK(res.err.empty());
  const json doc = json::parse(res.out);
  CHECK(doc.at("command") == "solve");
  CHECK(doc.at("variant") == "classical");
  CHECK(doc.at("n") == 2);
  CHECK(doc.at("payoff") == 0.5);
  CHECK((doc.at("kappa") == 0 || doc.at("kappa") == 1));
  CHECK(doc.at("certified_by").is_string());
  CHECK(doc.at("no_crossing").is_boolean());
}

TEST_CASE("numbers are serialized with fifteen significant digits") {
  auto req = request(cli::Command::solve, "penalty", 10000);
  req.params = {{"b", "2"}};
  const auto res = run_req(req);
  REQUIRE(res.code == 0);
  const json doc = json::parse(res.out);
  const double payoff = doc.at("payoff").get<double>();
  CHECK(res.out.find("\"payoff\":" + fifteen_digits(payoff)) != std::string::npos);
}

TEST_CASE("reruns are byte identical and thread count does not matter") {
  auto req = request(cli::Command::sweep, "duration");
  req.n_list = {50, 200, 100, 400};
  req.format = cli::Format::csv;
  const auto first = run_req(req);
  REQUIRE(first.code == 0);

  setenv("STOPRULE_THREADS", "2", 1);
  const auto threaded = run_req(req);
  setenv("STOPRULE_THREADS", "1", 1);
  const auto serial = run_req(req);
  unsetenv("STOPRULE_THREADS");
  CHECK(first.out == threaded.out);
  CHECK(first.out == serial.out);

  // Rows follow the order the sizes were requested in.
  std::istringstream lines(first.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,kappa_over_n,payoff");
  std::getline(lines, line);
  CHECK(line.substr(0, 3) == "50,");
  std::getline(lines, line);
  CHECK(line.substr(0, 4) == "200,");
}

TEST_CASE("verify reports hypothesis and gap rows per requested size") {
  auto req = request(cli::Command::verify, "classical");
  req.n_list = {10, 40};
  const auto res = run_req(req);
  REQUIRE(res.code == 0);
  const json doc = json::parse(res.out);
  const auto& rows = doc.at("rows");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("n") == 10);
  CHECK(rows[1].at("n") == 40);
  for (const char* key : {"max_abs_H", "terminal_drift", "v_sum", "m_sum",
                          "boundary_drift", "sup_gap", "interior_gap"}) {
    CHECK(rows[0].contains(key));
  }
  CHECK(rows[1].at("sup_gap").get<double>() < rows[0].at("sup_gap").get<double>());
}

TEST_CASE("asymptotic honors the method parameter") {
  auto req = request(cli::Command::asymptotic, "wildcard", 0);
  const auto closed = run_req(req);
  REQUIRE(closed.code == 0);
  const json cdoc = json::parse(closed.out);
  CHECK(cdoc.at("source") == "closed-form");

  req.params = {{"method", "ode-numeric"}};
  const auto numeric = run_req(req);
  REQUIRE(numeric.code == 0);
  const json ndoc = json::parse(numeric.out);
  CHECK(ndoc.at("source") == "ode-numeric");
  CHECK(std::abs(cdoc.at("theta").get<double>() - ndoc.at("theta").get<double>()) <= 1e-6);

  req.params = {{"method", "guesswork"}};
  CHECK(run_req(req).code == 1);
}

TEST_CASE("oracle compares the recurrence against exact play and simulation") {
  auto req = request(cli::Command::oracle, "wildcard", 6);
  const auto exact = run_req(req);
  REQUIRE(exact.code == 0);
  const json edoc = json::parse(exact.out);
  CHECK(edoc.at("exact_delta").get<double>() <= 1e-12);
  CHECK(edoc.at("threshold").is_number());

  req.trials = 20000;
  req.seed = 11;
  const auto sim = run_req(req);
  REQUIRE(sim.code == 0);
  const json sdoc = json::parse(sim.out);
  CHECK(sdoc.at("trials") == 20000);
  CHECK(sdoc.at("mc_std_error").get<double>() > 0.0);
  CHECK(std::abs(sdoc.at("mc_estimate").get<double>() - edoc.at("dp_value").get<double>()) <=
        6.0 * sdoc.at("mc_std_error").get<double>());

  // Beyond the exact-enumeration range a simulation is mandatory.
  auto big = request(cli::Command::oracle, "classical", 100);
  CHECK(run_req(big).code == 1);
  big.trials = 10000;
  CHECK(run_req(big).code == 0);

  // Explicit threshold overrides the solver's choice.
  auto pinned = request(cli::Command::oracle, "classical", 6);
  pinned.params = {{"threshold", "2"}};
  const auto pdoc = json::parse(run_req(pinned).out);
  CHECK(pdoc.at("threshold") == 2);
}

TEST_CASE("conjecture emits long-format csv dumps") {
  auto req = request(cli::Command::conjecture, "exmu");
  req.n_list = {100};
  req.format = cli::Format::csv;
  const auto res = run_req(req);
  REQUIRE(res.code == 0);
  std::istringstream lines(res.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "example,mu,n,k,x,f_n,f_ref");
  std::string row;
  std::getline(lines, row);
  CHECK(row.substr(0, 10) == "exmu,3,100");

  // mu rides as a parameter.
  req.params = {{"mu", "2.5"}};
  const auto shifted = run_req(req);
  REQUIRE(shifted.code == 0);
  std::istringstream slines(shifted.out);
  std::getline(slines, header);
  std::getline(slines, row);
  CHECK(row.substr(0, 9) == "exmu,2.5,");
}

TEST_CASE("two-threshold reports cutoffs with their limits") {
  const auto res = run_req(request(cli::Command::two_threshold, "", 100));
  REQUIRE(res.code == 0);
  const json doc = json::parse(res.out);
  CHECK(doc.at("r") == 34);
  CHECK(doc.at("s") == 66);
  CHECK(doc.at("payoff").get<double>() > 0.57);
  CHECK(doc.at("r_limit").get<double>() ==
        doctest::Approx(0.346981609707580).epsilon(1e-12));
}

TEST_CASE("validation failures precede computation and name the offender") {
  const auto unknown = run_req(request(cli::Command::solve, "bogus", 5));
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("error: validation:") == 0);
  CHECK(unknown.err.find("bogus") != std::string::npos);

  auto bad_key = request(cli::Command::solve, "classical", 5);
  bad_key.params = {{"zeta", "1"}};
  const auto key_res = run_req(bad_key);
  CHECK(key_res.code == 1);
  CHECK(key_res.err.find("zeta") != std::string::npos);

  auto bad_value = request(cli::Command::solve, "penalty", 5);
  bad_value.params = {{"b", "two"}};
  CHECK(run_req(bad_value).code == 1);

  auto no_n = request(cli::Command::solve, "classical", 0);
  CHECK(run_req(no_n).code == 1);

  auto small = request(cli::Command::two_threshold, "", 4);
  CHECK(run_req(small).code == 1);

  // Lottery profiles are named; unknown names are rejected.
  auto prize = request(cli::Command::solve, "lottery", 100);
  prize.params = {{"Y", "cubic"}};
  CHECK(run_req(prize).code == 1);
  prize.params = {{"Y", "sqrt"}};
  CHECK(run_req(prize).code == 0);
}

TEST_CASE("reports can be redirected to a file") {
  auto req = request(cli::Command::solve, "classical", 50);
  const auto direct = run_req(req);
  REQUIRE(direct.code == 0);

  const std::string path = "cli_out_test.json";
  req.out = path;
  const auto redirected = run_req(req);
  REQUIRE(redirected.code == 0);
  CHECK(redirected.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == direct.out);
  std::remove(path.c_str());

  req.out = "no/such/directory/file.json";
  CHECK(run_req(req).code == 1);
}

#ifdef STOPRULE_CLI_PATH
TEST_CASE("installed binary mirrors the library exit codes") {
  const std::string exe = STOPRULE_CLI_PATH;
  const auto exit_code = [&exe](const std::string& args) {
    const std::string cmd = exe + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(exit_code("solve --variant classical --n 2 --format json") == 0);
  CHECK(exit_code("solve --variant bogus --n 2") == 1);
  CHECK(exit_code("asymptotic --variant classical") == 0);
  CHECK(exit_code("solve --variant classical") == 1);  // n is required
}
#endif
