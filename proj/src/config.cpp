#include "logitmfg/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace logitmfg {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return n;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_double(item, line));
  return out;
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) {
    out.push_back(static_cast<int>(parse_long(item, line)));
  }
  return out;
}

SolverKind parse_solver(const std::string& v, int line) {
  if (v == "gld") return SolverKind::kGld;
  if (v == "mfg") return SolverKind::kMfg;
  fail(line, "solver must be 'gld' or 'mfg', got '" + v + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (size_t j = 0; j < v.size(); ++j) {
    if (j) out += ", ";
    out += fmt(v[j]);
  }
  return out;
}

const char* solver_name(SolverKind s) {
  return s == SolverKind::kGld ? "gld" : "mfg";
}

void validate(const RunConfig& c) {
  if (c.spec_version != 1) {
    throw ValidationError("unsupported spec_version " +
                          std::to_string(c.spec_version));
  }
  TsallisParams probe(c.q, c.eta);  // validates q > 0, eta > 0
  (void)probe;
  make_grid(c.n_x, c.n_t, c.horizon_t);
  if (!c.masses.empty()) make_population(c.masses);
  if (!(c.stationary_tol > 0.0)) {
    throw ValidationError("gld.stationary_tol must be > 0");
  }
  if (c.gld_max_steps < 0) throw ValidationError("gld.max_steps must be >= 0");
  if (!(c.delta > 0.0)) throw ValidationError("mfg.delta must be > 0");
  if (!(c.relaxation > 0.0 && c.relaxation <= 1.0)) {
    throw ValidationError("mfg.relaxation must lie in (0, 1]");
  }
  if (!(c.iter_tol > 0.0)) throw ValidationError("mfg.iter_tol must be > 0");
  if (c.max_iters <= 0) throw ValidationError("mfg.max_iters must be > 0");
  if (c.stride < 0) throw ValidationError("run.stride must be >= 0");
  if (c.scenario == Scenario::kCustom) {
    if (c.custom_types <= 0) {
      throw ValidationError("custom scenario needs [custom] n_types");
    }
    if (c.custom_u.size() !=
        static_cast<size_t>(c.custom_types) * c.n_x) {
      throw ValidationError(
          "custom scenario needs one utility table of length n_x per type");
    }
  }
  if (c.reference_n_x <= 0) {
    throw ValidationError("convergence.reference_n_x must be > 0");
  }
  for (int m : c.coarse_ms) {
    if (m <= 0) throw ValidationError("convergence.coarse_ms must be > 0");
  }
  for (double d : c.deltas) {
    if (!(d > 0.0)) throw ValidationError("delta_sweep.deltas must be > 0");
  }
  if (c.sweep_eta && !(*c.sweep_eta > 0.0)) {
    throw ValidationError("delta_sweep.eta must be > 0");
  }
  // Model parameter sanity via the constructors.
  if (c.scenario == Scenario::kFishing) {
    auto pops = population_from_config(c);
    FishingParams p = c.fishing;
    p.m1 = pops.masses[0];
    p.m2 = pops.masses[1];
    FishingUtility probe_model(p);
    (void)probe_model;
  } else if (c.scenario == Scenario::kTourism) {
    auto pops = population_from_config(c);
    TourismParams p = c.tourism;
    p.m1 = pops.masses[0];
    p.m2 = pops.masses[1];
    TourismUtility probe_model(p);
    (void)probe_model;
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  c.masses.clear();
  c.sweep_values.clear();
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  bool saw_tourism_gamma1 = false, saw_tourism_gamma2 = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const size_t hash = s.find('#'); hash != std::string::npos) {
      s = s.substr(0, hash);
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const char* known[] = {"run",     "grid",        "tsallis",
                                    "population", "init",     "gld",
                                    "mfg",     "fishing",     "tourism",
                                    "custom",  "convergence", "delta_sweep",
                                    "scenario_sweep"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) fail(line, "unknown section [" + section + "]");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");

    if (section.empty()) {
      if (key == "spec_version") {
        c.spec_version = static_cast<int>(parse_long(value, line));
      } else {
        fail(line, "key '" + key + "' outside any section");
      }
    } else if (section == "run") {
      if (key == "solver") {
        c.solver = parse_solver(value, line);
      } else if (key == "scenario") {
        if (value == "fishing") c.scenario = Scenario::kFishing;
        else if (value == "tourism") c.scenario = Scenario::kTourism;
        else if (value == "custom") c.scenario = Scenario::kCustom;
        else fail(line, "unknown scenario '" + value + "'");
      } else if (key == "out_dir") {
        c.out_dir = value;
      } else if (key == "stride") {
        c.stride = parse_long(value, line);
      } else if (key == "strict_cfl") {
        if (value == "auto") c.strict_cfl = StrictCfl::kAuto;
        else if (value == "on" || value == "true") c.strict_cfl = StrictCfl::kOn;
        else if (value == "off" || value == "false") c.strict_cfl = StrictCfl::kOff;
        else fail(line, "strict_cfl must be auto/on/off");
      } else if (key == "quiet") {
        c.quiet = parse_bool(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [run]");
      }
    } else if (section == "grid") {
      if (key == "n_x") c.n_x = static_cast<int>(parse_long(value, line));
      else if (key == "n_t") c.n_t = parse_long(value, line);
      else if (key == "horizon_t") c.horizon_t = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "tsallis") {
      if (key == "q") c.q = parse_double(value, line);
      else if (key == "eta") c.eta = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [tsallis]");
    } else if (section == "population") {
      if (key == "masses") c.masses = parse_double_list(value, line);
      else fail(line, "unknown key '" + key + "' in [population]");
    } else if (section == "init") {
      if (key == "profile") {
        if (value == "uniform") c.init = InitProfile::kUniform;
        else if (value == "tilted") c.init = InitProfile::kTilted;
        else if (value == "default") c.init.reset();
        else fail(line, "profile must be uniform/tilted/default");
      } else {
        fail(line, "unknown key '" + key + "' in [init]");
      }
    } else if (section == "gld") {
      if (key == "stationary_tol") c.stationary_tol = parse_double(value, line);
      else if (key == "max_steps") c.gld_max_steps = parse_long(value, line);
      else if (key == "norm") {
        if (value == "max") c.avg_norm_stationarity = false;
        else if (value == "avg") c.avg_norm_stationarity = true;
        else fail(line, "norm must be max/avg");
      } else {
        fail(line, "unknown key '" + key + "' in [gld]");
      }
    } else if (section == "mfg") {
      if (key == "delta") c.delta = parse_double(value, line);
      else if (key == "relaxation") c.relaxation = parse_double(value, line);
      else if (key == "iter_tol") c.iter_tol = parse_double(value, line);
      else if (key == "max_iters") c.max_iters = parse_long(value, line);
      else fail(line, "unknown key '" + key + "' in [mfg]");
    } else if (section == "fishing") {
      if (key == "alpha") c.fishing.alpha = parse_double(value, line);
      else if (key == "beta") c.fishing.beta = parse_double(value, line);
      else if (key == "kappa") c.fishing.kappa = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [fishing]");
    } else if (section == "tourism") {
      if (key == "theta") c.tourism.theta = parse_double(value, line);
      else if (key == "gamma1") {
        c.tourism.gamma1 = parse_double(value, line);
        saw_tourism_gamma1 = true;
      } else if (key == "gamma2") {
        c.tourism.gamma2 = parse_double(value, line);
        saw_tourism_gamma2 = true;
      } else if (key == "x_hat") c.tourism.x_hat = parse_double(value, line);
      else if (key == "epsilon") c.tourism.epsilon = parse_double(value, line);
      else fail(line, "unknown key '" + key + "' in [tourism]");
    } else if (section == "custom") {
      if (key == "n_types") {
        c.custom_types = static_cast<int>(parse_long(value, line));
      } else if (key.rfind("u_", 0) == 0) {
        const int idx = static_cast<int>(parse_long(key.substr(2), line));
        auto table = parse_double_list(value, line);
        const size_t need = static_cast<size_t>(idx) * table.size();
        if (c.custom_u.size() < need) c.custom_u.resize(need, 0.0);
        std::copy(table.begin(), table.end(),
                  c.custom_u.begin() + (idx - 1) * table.size());
      } else {
        fail(line, "unknown key '" + key + "' in [custom]");
      }
    } else if (section == "convergence") {
      if (key == "target") c.convergence_target = parse_solver(value, line);
      else if (key == "coarse_ms") c.coarse_ms = parse_int_list(value, line);
      else if (key == "reference_n_x") {
        c.reference_n_x = static_cast<int>(parse_long(value, line));
      } else {
        fail(line, "unknown key '" + key + "' in [convergence]");
      }
    } else if (section == "delta_sweep") {
      if (key == "deltas") c.deltas = parse_double_list(value, line);
      else if (key == "eta") {
        if (value == "none") c.sweep_eta.reset();
        else c.sweep_eta = parse_double(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [delta_sweep]");
      }
    } else if (section == "scenario_sweep") {
      if (key == "kind") {
        if (value == "masses") c.sweep_kind = SweepKind::kMasses;
        else if (value == "epsilon") c.sweep_kind = SweepKind::kEpsilon;
        else fail(line, "kind must be masses/epsilon");
      } else if (key == "values") {
        c.sweep_values = parse_double_list(value, line);
      } else if (key == "solver") {
        c.sweep_solver = parse_solver(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [scenario_sweep]");
      }
    }
  }
  if (saw_tourism_gamma1 != saw_tourism_gamma2) {
    throw ValidationError("tourism: set gamma1 and gamma2 together");
  }
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "spec_version = " << c.spec_version << "\n\n";
  out << "[run]\n";
  out << "solver = " << solver_name(c.solver) << "\n";
  out << "scenario = "
      << (c.scenario == Scenario::kFishing
              ? "fishing"
              : c.scenario == Scenario::kTourism ? "tourism" : "custom")
      << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  out << "stride = " << c.stride << "\n";
  out << "strict_cfl = "
      << (c.strict_cfl == StrictCfl::kAuto
              ? "auto"
              : c.strict_cfl == StrictCfl::kOn ? "on" : "off")
      << "\n";
  out << "quiet = " << (c.quiet ? "true" : "false") << "\n\n";
  out << "[grid]\n";
  out << "n_x = " << c.n_x << "\n";
  out << "n_t = " << c.n_t << "\n";
  out << "horizon_t = " << fmt(c.horizon_t) << "\n\n";
  out << "[tsallis]\n";
  out << "q = " << fmt(c.q) << "\n";
  out << "eta = " << fmt(c.eta) << "\n\n";
  if (!c.masses.empty()) {
    out << "[population]\n";
    out << "masses = " << fmt_list(c.masses) << "\n\n";
  }
  if (c.init) {
    out << "[init]\n";
    out << "profile = "
        << (*c.init == InitProfile::kUniform ? "uniform" : "tilted") << "\n\n";
  }
  out << "[gld]\n";
  out << "stationary_tol = " << fmt(c.stationary_tol) << "\n";
  out << "max_steps = " << c.gld_max_steps << "\n";
  out << "norm = " << (c.avg_norm_stationarity ? "avg" : "max") << "\n\n";
  out << "[mfg]\n";
  out << "delta = " << fmt(c.delta) << "\n";
  out << "relaxation = " << fmt(c.relaxation) << "\n";
  out << "iter_tol = " << fmt(c.iter_tol) << "\n";
  out << "max_iters = " << c.max_iters << "\n\n";
  out << "[fishing]\n";
  out << "alpha = " << fmt(c.fishing.alpha) << "\n";
  out << "beta = " << fmt(c.fishing.beta) << "\n";
  out << "kappa = " << fmt(c.fishing.kappa) << "\n\n";
  out << "[tourism]\n";
  out << "theta = " << fmt(c.tourism.theta) << "\n";
  out << "gamma1 = " << fmt(c.tourism.gamma1) << "\n";
  out << "gamma2 = " << fmt(c.tourism.gamma2) << "\n";
  out << "x_hat = " << fmt(c.tourism.x_hat) << "\n";
  out << "epsilon = " << fmt(c.tourism.epsilon) << "\n\n";
  if (c.scenario == Scenario::kCustom && c.custom_types > 0) {
    out << "[custom]\n";
    out << "n_types = " << c.custom_types << "\n";
    const size_t per = c.custom_u.size() / c.custom_types;
    for (int i = 0; i < c.custom_types; ++i) {
      std::vector<double> table(c.custom_u.begin() + i * per,
                                c.custom_u.begin() + (i + 1) * per);
      out << "u_" << (i + 1) << " = " << fmt_list(table) << "\n";
    }
    out << "\n";
  }
  out << "[convergence]\n";
  out << "target = " << solver_name(c.convergence_target) << "\n";
  out << "coarse_ms = ";
  for (size_t j = 0; j < c.coarse_ms.size(); ++j) {
    if (j) out << ", ";
    out << c.coarse_ms[j];
  }
  out << "\n";
  out << "reference_n_x = " << c.reference_n_x << "\n\n";
  out << "[delta_sweep]\n";
  out << "deltas = " << fmt_list(c.deltas) << "\n";
  out << "eta = " << (c.sweep_eta ? fmt(*c.sweep_eta) : "none") << "\n\n";
  out << "[scenario_sweep]\n";
  out << "kind = "
      << (c.sweep_kind == SweepKind::kMasses ? "masses" : "epsilon") << "\n";
  if (!c.sweep_values.empty()) {
    out << "values = " << fmt_list(c.sweep_values) << "\n";
  }
  if (c.sweep_solver) {
    out << "solver = " << solver_name(*c.sweep_solver) << "\n";
  }
  return out.str();
}

PopulationSpec population_from_config(const RunConfig& c) {
  if (!c.masses.empty()) return make_population(c.masses);
  switch (c.scenario) {
    case Scenario::kFishing:
      return make_population({0.7, 0.3});
    case Scenario::kTourism:
      return make_population({0.8, 0.2});
    case Scenario::kCustom: {
      const int n = c.custom_types > 0 ? c.custom_types : 1;
      return make_population(std::vector<double>(n, 1.0 / n));
    }
  }
  throw ValidationError("population_from_config: unknown scenario");
}

GridSpec grid_from_config(const RunConfig& c) {
  return make_grid(c.n_x, c.n_t, c.horizon_t);
}

std::unique_ptr<UtilityModel> model_from_config(const RunConfig& c) {
  const PopulationSpec pops = population_from_config(c);
  switch (c.scenario) {
    case Scenario::kFishing: {
      FishingParams p = c.fishing;
      p.m1 = pops.masses[0];
      p.m2 = pops.masses[1];
      return std::make_unique<FishingUtility>(p);
    }
    case Scenario::kTourism: {
      TourismParams p = c.tourism;
      p.m1 = pops.masses[0];
      p.m2 = pops.masses[1];
      return std::make_unique<TourismUtility>(p);
    }
    case Scenario::kCustom:
      return std::make_unique<TabularUtility>(c.custom_u, c.custom_types,
                                              c.n_x);
  }
  throw ValidationError("model_from_config: unknown scenario");
}

StudySetup study_setup_from_config(const RunConfig& c) {
  StudySetup s;
  s.scenario = c.scenario;
  s.params = TsallisParams(c.q, c.eta);
  s.pops = population_from_config(c);
  s.fishing = c.fishing;
  s.tourism = c.tourism;
  s.horizon_t = c.horizon_t;
  s.delta = c.delta;
  s.relaxation = c.relaxation;
  s.iter_tol = c.iter_tol;
  s.max_iters = c.max_iters;
  s.stationary_tol = c.stationary_tol;
  s.gld_max_steps = c.gld_max_steps;
  s.strict_cfl = c.strict_cfl;
  s.gld_init = c.init.value_or(InitProfile::kTilted);
  s.mfg_init = c.init.value_or(InitProfile::kUniform);
  return s;
}

InitProfile init_profile_for(const RunConfig& c, SolverKind solver) {
  if (c.init) return *c.init;
  return solver == SolverKind::kGld ? InitProfile::kTilted
                                    : InitProfile::kUniform;
}

}  // namespace logitmfg
