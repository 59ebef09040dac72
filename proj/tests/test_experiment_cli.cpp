#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "gegen/experiment.hpp"
#include "gegen/report.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GEGEN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("gegen_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("config defaults and validation", "[cli]") {
  auto fig2 = gegen::default_config(gegen::Command::Fig2);
  CHECK(fig2.fig2_grid.size() == 4);
  CHECK(fig2.n_list.front() == 1000);
  CHECK(fig2.n_list.back() == 10000);
  CHECK(fig2.n_list.size() == 20);
  CHECK_NOTHROW(gegen::validate(fig2, gegen::Command::Fig2));
  fig2.fig2_grid.emplace_back(1.0, 1.5);
  CHECK_THROWS_WITH(gegen::validate(fig2, gegen::Command::Fig2), ContainsSubstring("degenerate normalization"));

  auto cfg = gegen::default_config(gegen::Command::Fig3);
  CHECK(cfg.rho_scan.count == 2000);
  CHECK(cfg.functions().size() == 2);
  cfg.n_list = {8, 4};
  CHECK_THROWS_AS(gegen::validate(cfg, gegen::Command::Fig3), gegen::ConfigError);
  cfg.n_list = {};
  CHECK_THROWS_AS(gegen::validate(cfg, gegen::Command::Fig3), gegen::ConfigError);
  cfg = gegen::default_config(gegen::Command::Fig3);
  cfg.lambda_list = {-0.5};
  CHECK_THROWS_AS(gegen::validate(cfg, gegen::Command::Fig3), gegen::ConfigError);
  cfg = gegen::default_config(gegen::Command::Fig3);
  cfg.rho_scan.min = 0.9;
  CHECK_THROWS_AS(gegen::validate(cfg, gegen::Command::Fig3), gegen::ConfigError);

  auto j = nlohmann::json::parse(R"({"lambda_list":[0.5],"n_list":[4,8],"rho_scan":{"min":1.1,"max":2.0,"count":50},
                                     "function_id":"runge2","node_family":"gauss","format":"json"})");
  gegen::apply_json(cfg, j);
  CHECK(cfg.lambda_list == std::vector<double>{0.5});
  CHECK(cfg.rho_scan.count == 50);
  CHECK(cfg.function_id == gegen::FunctionId::Runge2);
  CHECK(cfg.format == gegen::OutputFormat::Json);
  CHECK_THROWS_AS(gegen::apply_json(cfg, nlohmann::json::parse(R"({"lamda_list":[0.5]})")), gegen::ConfigError);
}

TEST_CASE("line fits", "[cli]") {
  const std::vector<double> x{1, 2, 3, 4};
  const auto f = gegen::fit_line(x, {3, 5, 7, 9});
  CHECK_THAT(f.slope, WithinRel(2.0, 1e-14));
  CHECK_THAT(f.intercept, WithinRel(1.0, 1e-14));
  std::vector<double> n, y;
  for (int k = 10; k <= 60; k += 5) {
    n.push_back(k);
    y.push_back(0.5 - 0.8 * k + 1.5 * std::log(k));
  }
  const auto abc = gegen::fit_rate_with_power(n, y);
  CHECK_THAT(abc[1], WithinRel(-0.8, 1e-10));
  CHECK_THAT(abc[2], WithinRel(1.5, 1e-9));
}

TEST_CASE("nodes subcommand examples", "[cli]") {
  const auto g = run_cli("nodes --lambda 0.5 --n 1 --family gauss");
  CHECK(g.code == 0);
  CHECK(first_line(g.out) == "j,node,quad_weight,bary_weight");
  CHECK_THAT(g.out, ContainsSubstring("-0.57735026918962"));
  CHECK_THAT(g.out, ContainsSubstring(",0.57735026918962"));

  const auto l = run_cli("nodes --lambda 0.5 --n 2 --family lobatto --format json");
  CHECK(l.code == 0);
  const auto j = nlohmann::json::parse(l.out);
  const auto& t = j.at(0);
  CHECK(t.at("nodes").at(0).get<double>() == -1.0);
  CHECK(t.at("nodes").at(1).get<double>() == 0.0);
  CHECK_THAT(t.at("quad_weights").at(1).get<double>(), WithinRel(4.0 / 3, 1e-14));
  CHECK_THAT(t.at("quad_weights").at(0).get<double>(), WithinRel(1.0 / 3, 1e-14));

  const auto z = run_cli("nodes --lambda 1.5 --n 0 --family gauss --format json");
  const auto jz = nlohmann::json::parse(z.out);
  CHECK(jz.at(0).at("nodes").size() == 1);
  CHECK_THAT(jz.at(0).at("quad_weights").at(0).get<double>(), WithinRel(4.0 / 3, 1e-14));
}

TEST_CASE("bounds subcommand examples", "[cli]") {
  const auto a = run_cli("bounds --lambda 0.5 --n 10 --rho 2 --m-rho 1 --theorem diff-gauss");
  REQUIRE(a.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  CHECK(ja.at("flags") == nlohmann::json::array({"c set to 1"}));
  CHECK(std::isfinite(ja.at("total").get<double>()));

  const auto b = run_cli("bounds --lambda -0.3 --n 10 --rho 2 --m-rho 1 --theorem interp-gauss-negative");
  REQUIRE(b.code == 0);
  CHECK_THAT(b.out, ContainsSubstring("uses calibrated D_lambda"));

  CHECK(run_cli("bounds --lambda 0.5 --n 10 --rho 1.5 --theorem remainder-large-lambda --m 2").code == 2);
  CHECK(run_cli("bounds --lambda 3.2 --n 20 --rho 1.1 --theorem remainder-large-lambda --m 5").code == 2);
  const auto r = run_cli("bounds --lambda 3.2 --n 50 --rho 1.5 --theorem remainder-large-lambda --m 10");
  REQUIRE(r.code == 0);
  CHECK_THAT(nlohmann::json::parse(r.out).at("total").get<double>(), WithinRel(10.862132688871352774, 1e-12));
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(run_cli("fig2 --lambda 1 --n 1000").code == 2);
  CHECK(run_cli("nodes --lambda -0.6 --n 3").code == 2);
  CHECK(run_cli("nodes --lambda 0.5 --n 3 --format yaml").code == 2);
  CHECK(run_cli("bogus").code == 2);
  CHECK(run_cli("nodes --lambda 0.5 --n 3 --out /nonexistent/dir/out.csv").code == 4);
  const auto bad = temp_file("bad.json", R"({"lambda_list": [0.5], "n_list": "x"})");
  CHECK(run_cli("nodes --config " + bad.string()).code == 2);
  const auto unknown = temp_file("unknown.json", R"({"colour": 1})");
  CHECK(run_cli("nodes --config " + unknown.string()).code == 2);
  // a strict slack makes every record a violation
  const auto strict = temp_file("strict.json", R"({"dominance_slack": 1e-30, "n_list": [8, 12]})");
  CHECK(run_cli("fig3 --lambda 0.5 --family gauss --function runge1 --rho-count 50 --config " + strict.string()).code == 3);
}

TEST_CASE("CSV headers and byte-identical reruns", "[cli]") {
  const auto f2 = run_cli("fig2 --lambda 0.5 --rho 1.4 --n 1000,2000");
  CHECK(f2.code == 0);
  CHECK(first_line(f2.out) == "lambda,rho,n,E_n,n^-0.9,n^-1");
  CHECK(f2.out == run_cli("fig2 --lambda 0.5 --rho 1.4 --n 1000,2000").out);

  const auto f3 = run_cli("fig3 --lambda 0.5 --n 8,12,16 --family gauss --function runge1 --rho-count 100");
  CHECK(f3.code == 0);
  CHECK(first_line(f3.out) == "function,quantity,lambda,n,family,measured_error,bound_total,rho_star,flags");
  CHECK(f3.out == run_cli("fig3 --lambda 0.5 --n 8,12,16 --family gauss --function runge1 --rho-count 100").out);

  const auto ex = run_cli("expansion-decay --lambda 0.5 --n 8,12,16");
  CHECK(ex.code == 0);
  CHECK(first_line(ex.out) == "lambda,function,n,truncation_error,fitted_ratio");

  // 17 significant digits on every numeric field
  std::istringstream rows(f2.out);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  const auto e_field = line.substr(line.find(',', line.find(',', line.find(',') + 1) + 1) + 1);
  const auto e_text = e_field.substr(0, e_field.find(','));
  CHECK(gegen::format_real(std::stod(e_text)) == e_text);
}

TEST_CASE("expansion-decay controls", "[cli]") {
  auto cfg = gegen::default_config(gegen::Command::ExpansionDecay);
  cfg.lambda_list = {0.5};
  cfg.n_list = {5, 7, 9};
  cfg.function_id = gegen::FunctionId::Polynomial;
  for (const auto& row : gegen::run_expansion_decay(cfg)) CHECK(row.truncation_error <= 1e-10);
  cfg.function_id = gegen::FunctionId::Abs;
  cfg.n_list = {8, 16, 24, 32, 40};
  const auto rows = gegen::run_expansion_decay(cfg);
  CHECK(rows.back().fitted_ratio > 0.9);
}
