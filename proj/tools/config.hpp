#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kolmo/coefficients.hpp"
#include "kolmo/grid.hpp"
#include "kolmo/hypotheses.hpp"
#include "kolmo/properties.hpp"
#include "kolmo/semigroup.hpp"

namespace kolmo::cli {

/// Malformed configuration; `what()` carries "<file>:<line>: ..." when a
/// line is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  int d = 1;
  int m = 2;
  std::string family = "power";  // power | ou
  double gamma = 0.0;
  double beta = 1.0;
  double b0 = 1.0;
  std::vector<double> q0;  // row-major d x d; empty means identity
  std::string coupling_kind = "exchange2";
  std::vector<double> coupling_matrix;  // row-major m x m, constant_matrix only
};

struct GridConfig {
  double L = 6.0;
  int n_per_axis = 481;
  BoundaryKind boundary = BoundaryKind::kDirichlet;
};

struct TimeConfig {
  double dt = kDefaultDt;
  double t_final = 1.0;
  double theta = kDefaultTheta;
  int store_every = 0;
};

struct NestConfig {
  bool present = false;
  std::vector<LadderRung> ladder;
  double nest_tol = 1e-6;
  double R_obs = 3.0;
};

struct VerifyConfig {
  std::string suite = "core";
  std::vector<double> p{2.0};
  double R_obs = 3.0;
  double t_long = 20.0;
  int cesaro_n = 20;
  double sigma = 1.0;
  double rate_eps = 0.003;
  SampleSpec sample;
  Tolerances tol;
};

struct SweepConfig {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> b0;
  std::vector<double> p;
  int cap = 64;
  int workers = 0;  // 0: hardware concurrency
};

struct RunSection {
  std::uint64_t seed = 0;
  std::string out;
};

struct RunConfig {
  std::string source;
  ProblemConfig problem;
  GridConfig grid;
  TimeConfig time;
  NestConfig nest;
  VerifyConfig verify;
  std::vector<std::string> initial;  // one expression per component
  SweepConfig sweep;
  RunSection run;
};

/// Strict parser: [problem] and [grid] are mandatory, unknown sections or
/// keys and duplicate keys are errors.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

CoefficientField build_field(const ProblemConfig& problem);
Grid build_config_grid(const RunConfig& cfg);

/// Initial datum from the [initial] component expressions: a number, or one
/// of gauss, tanh, sin, cos, bump, step.
InitialDatum build_datum(const std::vector<std::string>& components, int m, int d);

}  // namespace kolmo::cli
