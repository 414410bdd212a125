#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracgreen/cli.hpp"

using namespace fracgreen;
namespace fs = std::filesystem;

namespace {

CampaignConfig fast_config(const fs::path& out) {
  CampaignConfig c;
  c.preset = Preset::frac_laplacian_drift;
  c.drift = {0.5};
  c.grid_n = {256, 512, 1024};
  c.bump_u = BumpSpec{0.3, 0.9};
  c.bump_uprime = BumpSpec{0.5, 1.2};
  c.bump_v = BumpSpec{0.4, 1.0};
  c.identities = {"zero_identity"};
  c.out_dir = out.string();
  return c;
}

fs::path write_config(const CampaignConfig& c, const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "fracgreen_cli_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << serialize_config(c);
  return p;
}

int run(std::initializer_list<const char*> args, std::ostream& log) {
  std::vector<const char*> argv(args);
  return run_cli(int(argv.size()), argv.data(), log);
}

}  // namespace

TEST_CASE("config serialization round-trips") {
  auto c = fast_config("out");
  c.identity_tol["zero_identity"] = 3e-3;
  c.mu_override = 0.25;
  std::string s1 = serialize_config(c);
  std::string s2 = serialize_config(parse_config(s1));
  CHECK(s1 == s2);
  auto back = parse_config(s1);
  CHECK(back.preset == Preset::frac_laplacian_drift);
  CHECK(back.grid_n == std::vector<int>{256, 512, 1024});
  CHECK(back.identity_tol.at("zero_identity") == doctest::Approx(3e-3));
  CHECK(back.mu_override.has_value());
}

TEST_CASE("symbol construction from config") {
  auto c = fast_config("out");
  auto sym = build_symbol(c);
  CHECK(sym.dim() == 1);
  CHECK(sym.preset() == Preset::frac_laplacian_drift);
  CHECK(identity_tolerance(c, IdentityId::zero_identity) > 0.0);
  c.identity_tol["zero_identity"] = 7e-4;
  CHECK(identity_tolerance(c, IdentityId::zero_identity) ==
        doctest::Approx(7e-4));
}

TEST_CASE("verify command: success path writes reports and exits 0") {
  fs::path out = fs::temp_directory_path() / "fracgreen_cli_test" / "ok";
  fs::remove_all(out);
  auto cfg = write_config(fast_config(out), "ok.json");
  std::ostringstream log;
  std::string cp = cfg.string();
  int rc = run({"fracgreen", "verify", cp.c_str()}, log);
  CHECK(rc == 0);
  std::ifstream csv(out / "verify.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "identity_id,preset,a,delta,mu,N,box,lhs_re,lhs_im,rhs_re,rhs_im,"
        "abs_residual,rel_residual");
  std::string row;
  std::getline(csv, row);
  CHECK(row.rfind("zero_identity,frac_laplacian_drift,", 0) == 0);
}

TEST_CASE("verify command: unreachable tolerance exits 2") {
  fs::path out = fs::temp_directory_path() / "fracgreen_cli_test" / "tight";
  auto c = fast_config(out);
  c.identity_tol["zero_identity"] = 1e-16;
  auto cfg = write_config(c, "tight.json");
  std::ostringstream log;
  std::string cp = cfg.string();
  CHECK(run({"fracgreen", "verify", cp.c_str()}, log) == 2);
  CHECK(log.str().find("zero_identity") != std::string::npos);
}

TEST_CASE("bad inputs exit 1") {
  std::ostringstream log;
  CHECK(run({"fracgreen", "verify", "/no/such/config.json"}, log) == 1);
  CHECK(run({"fracgreen", "no_such_command"}, log) == 1);
  auto cfg = write_config(fast_config("out"), "grid.json");
  std::string cp = cfg.string();
  CHECK(run({"fracgreen", "verify", cp.c_str(), "--grid-override", "N="}, log) == 1);
}

TEST_CASE("grid override replaces the config list") {
  fs::path out = fs::temp_directory_path() / "fracgreen_cli_test" / "ovr";
  fs::remove_all(out);
  auto cfg = write_config(fast_config(out), "ovr.json");
  std::ostringstream log;
  std::string cp = cfg.string();
  int rc = run({"fracgreen", "verify", cp.c_str(), "--grid-override",
                "N=256,512,1024"},
               log);
  CHECK(rc == 0);
  std::ifstream csv(out / "verify.csv");
  int rows = 0;
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("traces command emits per-grid tables") {
  fs::path out = fs::temp_directory_path() / "fracgreen_cli_test" / "tr";
  fs::remove_all(out);
  auto c = fast_config(out);
  c.grid_n = {256, 512};
  auto cfg = write_config(c, "tr.json");
  std::ostringstream log;
  std::string cp = cfg.string();
  CHECK(run({"fracgreen", "traces", cp.c_str()}, log) == 0);
  CHECK(fs::exists(out / "traces_N256.csv"));
  CHECK(fs::exists(out / "traces_N512.csv"));
}
