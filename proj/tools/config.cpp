#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "kolmo/error.hpp"

namespace kolmo::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split(s, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("expected a comma-separated list");
  return out;
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  return v;
}

BoundaryKind to_boundary(const std::string& s) {
  if (s == "dirichlet") return BoundaryKind::kDirichlet;
  if (s == "neumann") return BoundaryKind::kNeumann;
  throw ConfigError("boundary must be dirichlet or neumann, got '" + s + "'");
}

std::string one_of(const std::string& s, const std::set<std::string>& allowed, const char* what) {
  if (!allowed.count(s)) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw ConfigError(std::string(what) + " must be one of " + list + ", got '" + s + "'");
  }
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using SectionTable = std::map<std::string, Setter>;

std::map<std::string, SectionTable> make_tables() {
  std::map<std::string, SectionTable> t;
  t["problem"] = {
      {"d", [](RunConfig& c, const std::string& v) { c.problem.d = to_int(v); }},
      {"m", [](RunConfig& c, const std::string& v) { c.problem.m = to_int(v); }},
      {"family",
       [](RunConfig& c, const std::string& v) {
         c.problem.family = one_of(v, {"power", "ou"}, "family");
       }},
      {"gamma", [](RunConfig& c, const std::string& v) { c.problem.gamma = to_double(v); }},
      {"beta", [](RunConfig& c, const std::string& v) { c.problem.beta = to_double(v); }},
      {"b0",
       [](RunConfig& c, const std::string& v) { c.problem.b0 = positive(to_double(v), "b0"); }},
      {"q0", [](RunConfig& c, const std::string& v) { c.problem.q0 = to_list(v); }},
      {"coupling_kind",
       [](RunConfig& c, const std::string& v) {
         c.problem.coupling_kind =
             one_of(v, {"exchange2", "zeta3", "constant_matrix"}, "coupling_kind");
       }},
      {"coupling_matrix",
       [](RunConfig& c, const std::string& v) { c.problem.coupling_matrix = to_list(v); }},
  };
  t["grid"] = {
      {"L", [](RunConfig& c, const std::string& v) { c.grid.L = positive(to_double(v), "L"); }},
      {"n_per_axis", [](RunConfig& c, const std::string& v) { c.grid.n_per_axis = to_int(v); }},
      {"boundary", [](RunConfig& c, const std::string& v) { c.grid.boundary = to_boundary(v); }},
  };
  t["time"] = {
      {"dt", [](RunConfig& c, const std::string& v) { c.time.dt = positive(to_double(v), "dt"); }},
      {"t_final", [](RunConfig& c,
                     const std::string& v) { c.time.t_final = positive(to_double(v), "t_final"); }},
      {"theta",
       [](RunConfig& c, const std::string& v) {
         c.time.theta = to_double(v);
         if (c.time.theta < 0.5 || c.time.theta > 1.0)
           throw ConfigError("theta must lie in [0.5, 1]");
       }},
      {"store_every", [](RunConfig& c, const std::string& v) { c.time.store_every = to_int(v); }},
  };
  t["nest"] = {
      {"ladder",
       [](RunConfig& c, const std::string& v) {
         c.nest.ladder.clear();
         for (const std::string& rung : split(v, ',')) {
           const auto parts = split(rung, ':');
           if (parts.size() != 2) throw ConfigError("ladder rungs are L:n, got '" + rung + "'");
           c.nest.ladder.push_back({positive(to_double(parts[0]), "ladder L"), to_int(parts[1])});
         }
       }},
      {"nest_tol",
       [](RunConfig& c, const std::string& v) {
         c.nest.nest_tol = positive(to_double(v), "nest_tol");
       }},
      {"R_obs",
       [](RunConfig& c, const std::string& v) { c.nest.R_obs = positive(to_double(v), "R_obs"); }},
  };
  auto tol = [](double Tolerances::* field) -> Setter {
    return [field](RunConfig& c, const std::string& v) {
      c.verify.tol.*field = positive(to_double(v), "tolerance");
    };
  };
  t["verify"] = {
      {"suite",
       [](RunConfig& c, const std::string& v) {
         c.verify.suite = one_of(v, {"core", "rates", "asymptotic", "counterexample"}, "suite");
       }},
      {"p", [](RunConfig& c, const std::string& v) { c.verify.p = to_list(v); }},
      {"R_obs", [](RunConfig& c,
                   const std::string& v) { c.verify.R_obs = positive(to_double(v), "R_obs"); }},
      {"t_long", [](RunConfig& c,
                    const std::string& v) { c.verify.t_long = positive(to_double(v), "t_long"); }},
      {"cesaro_n", [](RunConfig& c, const std::string& v) { c.verify.cesaro_n = to_int(v); }},
      {"sigma", [](RunConfig& c,
                   const std::string& v) { c.verify.sigma = positive(to_double(v), "sigma"); }},
      {"rate_eps",
       [](RunConfig& c, const std::string& v) {
         c.verify.rate_eps = positive(to_double(v), "rate_eps");
       }},
      {"sample_R_max",
       [](RunConfig& c, const std::string& v) {
         c.verify.sample.R_max = positive(to_double(v), "sample_R_max");
       }},
      {"sample_nodes",
       [](RunConfig& c, const std::string& v) { c.verify.sample.nodes_per_axis = to_int(v); }},
      {"annuli", [](RunConfig& c, const std::string& v) { c.verify.sample.annuli = to_int(v); }},
      {"dom_tol", tol(&Tolerances::dom)},
      {"sup_tol", tol(&Tolerances::sup)},
      {"pos_tol", tol(&Tolerances::pos_implicit)},
      {"pos_floor", tol(&Tolerances::pos_floor)},
      {"inv_tol", tol(&Tolerances::inv)},
      {"scalar_inv_tol", tol(&Tolerances::scalar_inv)},
      {"fixed_point_tol", tol(&Tolerances::fixed_point)},
      {"lp_tol", tol(&Tolerances::lp)},
      {"longtime_tol", tol(&Tolerances::longtime)},
      {"plateau_tol", tol(&Tolerances::plateau)},
      {"slope_margin", tol(&Tolerances::slope_margin)},
      {"rate_tol", tol(&Tolerances::rate)},
  };
  t["initial"] = {
      {"components", [](RunConfig& c, const std::string& v) { c.initial = split(v, ','); }},
  };
  t["sweep"] = {
      {"gamma", [](RunConfig& c, const std::string& v) { c.sweep.gamma = to_list(v); }},
      {"beta", [](RunConfig& c, const std::string& v) { c.sweep.beta = to_list(v); }},
      {"b0", [](RunConfig& c, const std::string& v) { c.sweep.b0 = to_list(v); }},
      {"p", [](RunConfig& c, const std::string& v) { c.sweep.p = to_list(v); }},
      {"cap", [](RunConfig& c, const std::string& v) { c.sweep.cap = to_int(v); }},
      {"workers", [](RunConfig& c, const std::string& v) { c.sweep.workers = to_int(v); }},
  };
  t["run"] = {
      {"seed",
       [](RunConfig& c, const std::string& v) {
         const int s = to_int(v);
         if (s < 0) throw ConfigError("seed must be non-negative");
         c.run.seed = static_cast<std::uint64_t>(s);
       }},
      {"out", [](RunConfig& c, const std::string& v) { c.run.out = v; }},
  };
  return t;
}

double bump(double s) { return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0; }

std::function<double(const Point&)> component_fn(const std::string& expr) {
  if (expr == "gauss") return [](const Point& x) { return std::exp(-x.squaredNorm()); };
  if (expr == "tanh") return [](const Point& x) { return std::tanh(x(0)); };
  if (expr == "sin") return [](const Point& x) { return std::sin(x(0)); };
  if (expr == "cos") return [](const Point& x) { return std::cos(x(0)); };
  if (expr == "bump") return [](const Point& x) { return bump(x.squaredNorm() / 2.25); };
  if (expr == "step") return [](const Point& x) { return std::tanh(x(0) / 0.003); };
  const double c = to_double(expr);
  return [c](const Point&) { return c; };
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  static const auto tables = make_tables();
  std::set<std::string> seen_sections;
  std::set<std::pair<std::string, std::string>> seen_keys;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!tables.count(section)) fail("unknown section [" + section + "]");
      if (!seen_sections.insert(section).second) fail("duplicate section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    auto& table = tables.at(section);
    const auto it = table.find(key);
    if (it == table.end()) fail("unknown key '" + key + "' in [" + section + "]");
    if (!seen_keys.insert({section, key}).second)
      fail("duplicate key '" + key + "' in [" + section + "]");
    if (value.empty()) fail("empty value for '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      fail(key + ": " + e.what());
    }
  }
  for (const char* required : {"problem", "grid"})
    if (!seen_sections.count(required))
      throw ConfigError(source + ": missing required section [" + std::string(required) + "]");
  cfg.nest.present = seen_sections.count("nest") > 0;

  const ProblemConfig& p = cfg.problem;
  if (p.d < 1 || p.d > 2) throw ConfigError(source + ": [problem] d must be 1 or 2");
  if (p.m < 1) throw ConfigError(source + ": [problem] m must be >= 1");
  if (!p.q0.empty() && static_cast<int>(p.q0.size()) != p.d * p.d)
    throw ConfigError(source + ": [problem] q0 needs d*d entries");
  if (p.coupling_kind == "constant_matrix" &&
      static_cast<int>(p.coupling_matrix.size()) != p.m * p.m)
    throw ConfigError(source + ": [problem] coupling_matrix needs m*m entries");
  if (!cfg.initial.empty() && static_cast<int>(cfg.initial.size()) != p.m)
    throw ConfigError(source + ": [initial] components needs m entries");
  for (const std::string& e : cfg.initial) {
    try {
      component_fn(e);
    } catch (const ConfigError& err) {
      throw ConfigError(source + ": [initial] " + err.what());
    }
  }
  if (cfg.nest.present && cfg.nest.ladder.empty())
    throw ConfigError(source + ": [nest] needs a ladder");
  if (cfg.sweep.cap < 1) throw ConfigError(source + ": [sweep] cap must be >= 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

CoefficientField build_field(const ProblemConfig& p) {
  BuiltinFamily fam;
  fam.dim_d = p.d;
  fam.dim_m = p.m;
  fam.gamma = p.family == "ou" ? 0.0 : p.gamma;
  fam.beta = p.family == "ou" ? 0.0 : p.beta;
  fam.b0 = p.b0;
  fam.Q0 = Mat::Identity(p.d, p.d);
  if (!p.q0.empty())
    fam.Q0 =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            p.q0.data(), p.d, p.d);
  if (p.coupling_kind == "exchange2") {
    fam.coupling = CouplingKind::kExchange2;
  } else if (p.coupling_kind == "zeta3") {
    fam.coupling = CouplingKind::kZeta3;
  } else {
    fam.coupling = CouplingKind::kConstantMatrix;
    fam.constant_C =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            p.coupling_matrix.data(), p.m, p.m);
  }
  return make_builtin(fam);
}

Grid build_config_grid(const RunConfig& cfg) {
  return build_grid(cfg.problem.d, cfg.grid.L, cfg.grid.n_per_axis, cfg.grid.boundary);
}

InitialDatum build_datum(const std::vector<std::string>& components, int m, int d) {
  std::vector<std::string> exprs = components;
  if (exprs.empty()) {
    exprs = {"tanh", "gauss"};
    exprs.resize(m, "gauss");
    if (m == 1) exprs = {"tanh"};
  }
  if (static_cast<int>(exprs.size()) != m)
    throw ConfigError("initial datum needs one expression per component");
  std::vector<std::function<double(const Point&)>> fns;
  for (const std::string& e : exprs) fns.push_back(component_fn(e));
  return [fns, d](const Point& x) {
    if (x.size() != d) throw InvalidArgument("initial datum: wrong dimension");
    Vec v(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) v(static_cast<Eigen::Index>(i)) = fns[i](x);
    return v;
  };
}

}  // namespace kolmo::cli
