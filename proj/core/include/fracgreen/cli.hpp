#pragma once

#include <map>
#include <string>

#include "fracgreen/muspace.hpp"
#include "fracgreen/verify.hpp"

namespace fracgreen {

// JSON-backed campaign configuration. Exponents mu / mu* are always derived
// from the symbol; configs cannot override them (a separate mu_override knob
// exists only for the transmission-phase probe).
struct CampaignConfig {
  Preset preset = Preset::frac_laplacian;
  double a = 0.5;
  std::vector<double> drift;      // frac_laplacian_drift
  double odd_c = 1.0;             // odd_mix_1d
  double custom_even = 1.0;       // custom (dim 1)
  double custom_odd = 0.0;
  std::vector<double> custom_even_table;  // custom (dim 2)
  std::vector<double> custom_odd_table;

  int dim = 1;
  std::vector<int> grid_n = {512, 1024, 2048, 4096};  // powers of two
  double box = 16.0;

  BumpSpec bump_u, bump_uprime, bump_v;
  std::vector<std::string> identities;  // empty -> all six

  double route_tol = 1e-3;
  double leak_tol = 1e-8;
  std::map<std::string, double> identity_tol;  // per-identity acceptance
  double cutoff_radius = 1.0;
  int quad_first_cell = 4;  // analytic-bridge width of the weighted quadrature
  int oversample = 16;      // fine-grid factor for multiplier applications

  std::string out_dir = "out";
  unsigned seed = 1;
  int jobs = 1;
  std::optional<double> mu_override;  // transmission-phase experiments only
};

CampaignConfig parse_config(const std::string& json_text);
std::string serialize_config(const CampaignConfig& cfg);  // round-trip stable
CampaignConfig load_config_file(const std::string& path);

HomogeneousSymbol build_symbol(const CampaignConfig& cfg);
double identity_tolerance(const CampaignConfig& cfg, IdentityId id);

struct CliOverrides {
  std::string out_dir;           // --out
  int jobs = 0;                  // --jobs (0: keep config)
  std::vector<int> grid_n;       // --grid-override N=...
};

// Exit codes: 0 all tolerances met, 1 configuration or runtime error,
// 2 tolerance failure. Diagnostics name the identity and grid.
int cmd_verify(const std::string& config_path, const CliOverrides& ov,
               std::ostream& log);
int cmd_decompose(const std::string& config_path, const CliOverrides& ov,
                  std::ostream& log);
int cmd_traces(const std::string& config_path, const CliOverrides& ov,
               std::ostream& log);

// Full argv dispatch used by the binary (and by tests).
int run_cli(int argc, const char* const* argv, std::ostream& log);

}  // namespace fracgreen
