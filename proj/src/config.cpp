#include "hexdg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "hexdg/output.hpp"
#include "hexdg/time_integration.hpp"

namespace hexdg {

const char* to_string(TestCase c) {
  switch (c) {
    case TestCase::tgv:
      return "tgv";
    case TestCase::mms:
      return "mms";
    case TestCase::sod:
      return "sod";
    case TestCase::freestream:
      return "freestream";
  }
  return "?";
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Bad {
  std::string why;
};

double to_double(const std::string& v) {
  size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw Bad{"expected a number, got '" + v + "'"};
  }
  if (pos != v.size()) throw Bad{"expected a number, got '" + v + "'"};
  return d;
}

long to_long(const std::string& v) {
  size_t pos = 0;
  long d = 0;
  try {
    d = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw Bad{"expected an integer, got '" + v + "'"};
  }
  if (pos != v.size()) throw Bad{"expected an integer, got '" + v + "'"};
  return d;
}

bool to_bool(const std::string& v) {
  const std::string s = lower(v);
  if (s == "on" || s == "true" || s == "yes" || s == "1") return true;
  if (s == "off" || s == "false" || s == "no" || s == "0") return false;
  throw Bad{"expected on/off, got '" + v + "'"};
}

std::vector<std::string> words(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

std::vector<int> to_ints(const std::string& v) {
  std::vector<int> out;
  for (const auto& w : words(v)) out.push_back(static_cast<int>(to_long(w)));
  if (out.empty()) throw Bad{"expected a list of integers"};
  return out;
}

template <size_t K, class T>
std::array<T, K> to_array(const std::string& v) {
  const auto w = words(v);
  if (w.size() != K) throw Bad{"expected " + std::to_string(K) + " values"};
  std::array<T, K> a{};
  for (size_t i = 0; i < K; ++i) a[i] = static_cast<T>(std::is_integral_v<T> ? to_long(w[i]) : to_double(w[i]));
  return a;
}

std::string fmt(double d) { return format_double(d); }
std::string fmt_bool(bool b) { return b ? "on" : "off"; }
template <class C>
std::string join(const C& c) {
  std::string s;
  for (const auto& x : c) {
    if (!s.empty()) s += ' ';
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) {
      s += fmt(x);
    } else {
      s += std::to_string(x);
    }
  }
  return s;
}

struct Key {
  const char* name;
  const char* doc;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"testcase", "tgv | mms | sod | freestream",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "tgv") c.testcase = TestCase::tgv;
         else if (s == "mms") c.testcase = TestCase::mms;
         else if (s == "sod") c.testcase = TestCase::sod;
         else if (s == "freestream") c.testcase = TestCase::freestream;
         else throw Bad{"unknown test case '" + v + "'"};
       },
       [](const RunConfig& c) { return std::string(to_string(c.testcase)); }},
      {"n", "polynomial degree",
       [](RunConfig& c, const std::string& v) { c.N = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.N); }},
      {"nodetype", "GL | LGL",
       [](RunConfig& c, const std::string& v) {
         try {
           c.node_type = parse_node_type(v);
         } catch (const std::exception& e) {
           throw Bad{e.what()};
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.node_type)); }},
      {"operator", "standard | split (split needs LGL)",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "standard") c.split = false;
         else if (s == "split") c.split = true;
         else throw Bad{"expected standard or split, got '" + v + "'"};
       },
       [](const RunConfig& c) { return std::string(c.split ? "split" : "standard"); }},
      {"riemann", "llf | hllc",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "llf") c.riemann = RiemannSolverKind::llf;
         else if (s == "hllc") c.riemann = RiemannSolverKind::hllc;
         else throw Bad{"expected llf or hllc, got '" + v + "'"};
       },
       [](const RunConfig& c) { return std::string(c.riemann == RiemannSolverKind::llf ? "llf" : "hllc"); }},
      {"shockcapturing", "on | off (needs LGL)",
       [](RunConfig& c, const std::string& v) { c.shock_capturing = to_bool(v); },
       [](const RunConfig& c) { return fmt_bool(c.shock_capturing); }},
      {"alpha_max", "upper clamp of the blending factor",
       [](RunConfig& c, const std::string& v) { c.indicator.alpha_max = to_double(v); },
       [](const RunConfig& c) { return fmt(c.indicator.alpha_max); }},
      {"alpha_min", "blending factors below this are set to zero",
       [](RunConfig& c, const std::string& v) { c.indicator.alpha_min = to_double(v); },
       [](const RunConfig& c) { return fmt(c.indicator.alpha_min); }},
      {"alpha_fixed", "when >= 0, every element uses this blending factor",
       [](RunConfig& c, const std::string& v) { c.indicator.alpha_fixed = to_double(v); },
       [](const RunConfig& c) { return fmt(c.indicator.alpha_fixed); }},
      {"indicator_a", "threshold T(N) = a 10^(-b (N+1)^c)",
       [](RunConfig& c, const std::string& v) { c.indicator.threshold_a = to_double(v); },
       [](const RunConfig& c) { return fmt(c.indicator.threshold_a); }},
      {"indicator_b", "",
       [](RunConfig& c, const std::string& v) { c.indicator.threshold_b = to_double(v); },
       [](const RunConfig& c) { return fmt(c.indicator.threshold_b); }},
      {"indicator_c", "",
       [](RunConfig& c, const std::string& v) { c.indicator.threshold_c = to_double(v); },
       [](const RunConfig& c) { return fmt(c.indicator.threshold_c); }},
      {"timescheme", "carpenter-kennedy-5-4 | niegemann-14-4",
       [](RunConfig& c, const std::string& v) {
         try {
           rk_scheme(lower(v));
         } catch (const std::exception& e) {
           throw Bad{e.what()};
         }
         c.time_scheme = lower(v);
       },
       [](const RunConfig& c) { return c.time_scheme; }},
      {"cfl", "advective CFL number",
       [](RunConfig& c, const std::string& v) { c.cfl = to_double(v); },
       [](const RunConfig& c) { return fmt(c.cfl); }},
      {"cfl_visc", "viscous CFL number",
       [](RunConfig& c, const std::string& v) { c.cfl_visc = to_double(v); },
       [](const RunConfig& c) { return fmt(c.cfl_visc); }},
      {"dt", "fixed timestep (0: from the CFL condition)",
       [](RunConfig& c, const std::string& v) { c.fixed_dt = to_double(v); },
       [](const RunConfig& c) { return fmt(c.fixed_dt); }},
      {"gamma", "ratio of specific heats",
       [](RunConfig& c, const std::string& v) { c.gamma = to_double(v); },
       [](const RunConfig& c) { return fmt(c.gamma); }},
      {"r", "specific gas constant",
       [](RunConfig& c, const std::string& v) { c.R = to_double(v); },
       [](const RunConfig& c) { return fmt(c.R); }},
      {"pr", "Prandtl number",
       [](RunConfig& c, const std::string& v) { c.Pr = to_double(v); },
       [](const RunConfig& c) { return fmt(c.Pr); }},
      {"mu", "viscosity (negative: TGV value rho0 U0 L / Re, zero elsewhere)",
       [](RunConfig& c, const std::string& v) { c.mu = to_double(v); },
       [](const RunConfig& c) { return fmt(c.mu); }},
      {"viscositylaw", "constant | sutherland",
       [](RunConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "constant") c.sutherland = false;
         else if (s == "sutherland") c.sutherland = true;
         else throw Bad{"expected constant or sutherland, got '" + v + "'"};
       },
       [](const RunConfig& c) { return std::string(c.sutherland ? "sutherland" : "constant"); }},
      {"tref", "Sutherland reference temperature (negative: T0 of the case)",
       [](RunConfig& c, const std::string& v) { c.T_ref = to_double(v); },
       [](const RunConfig& c) { return fmt(c.T_ref); }},
      {"ma0", "TGV background Mach number",
       [](RunConfig& c, const std::string& v) { c.Ma0 = to_double(v); },
       [](const RunConfig& c) { return fmt(c.Ma0); }},
      {"re", "TGV Reynolds number",
       [](RunConfig& c, const std::string& v) { c.Re = to_double(v); },
       [](const RunConfig& c) { return fmt(c.Re); }},
      {"tgv_version", "1: constant density, 2: constant temperature",
       [](RunConfig& c, const std::string& v) { c.tgv_version = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.tgv_version); }},
      {"inviscid", "on: Euler equations",
       [](RunConfig& c, const std::string& v) { c.inviscid = to_bool(v); },
       [](const RunConfig& c) { return fmt_bool(c.inviscid); }},
      {"mms_amplitude", "manufactured solution amplitude A",
       [](RunConfig& c, const std::string& v) { c.mms_amplitude = to_double(v); },
       [](const RunConfig& c) { return fmt(c.mms_amplitude); }},
      {"mms_speed", "manufactured solution advection speed a",
       [](RunConfig& c, const std::string& v) { c.mms_speed = to_double(v); },
       [](const RunConfig& c) { return fmt(c.mms_speed); }},
      {"sod_x0", "Sod interface position",
       [](RunConfig& c, const std::string& v) { c.sod_x0 = to_double(v); },
       [](const RunConfig& c) { return fmt(c.sod_x0); }},
      {"nelems", "elements per direction (nx ny nz)",
       [](RunConfig& c, const std::string& v) { c.elems = to_array<3, int>(v); },
       [](const RunConfig& c) { return join(c.elems); }},
      {"xmin", "domain lower corner (all zero with xmax: case default)",
       [](RunConfig& c, const std::string& v) { c.lo = to_array<3, double>(v); },
       [](const RunConfig& c) { return join(c.lo); }},
      {"xmax", "domain upper corner",
       [](RunConfig& c, const std::string& v) { c.hi = to_array<3, double>(v); },
       [](const RunConfig& c) { return join(c.hi); }},
      {"curve_amplitude", "sinusoidal mesh perturbation relative to the box size",
       [](RunConfig& c, const std::string& v) { c.curve_amplitude = to_double(v); },
       [](const RunConfig& c) { return fmt(c.curve_amplitude); }},
      {"mixed_frames", "on: rotate element frames so all face orientations occur",
       [](RunConfig& c, const std::string& v) { c.mixed_frames = to_bool(v); },
       [](const RunConfig& c) { return fmt_bool(c.mixed_frames); }},
      {"ranks", "number of rank workers",
       [](RunConfig& c, const std::string& v) { c.n_ranks = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.n_ranks); }},
      {"priorities", "on: three-priority task scheduling; off: sequential order",
       [](RunConfig& c, const std::string& v) { c.priorities = to_bool(v); },
       [](const RunConfig& c) { return fmt_bool(c.priorities); }},
      {"chunk", "elements per volume task",
       [](RunConfig& c, const std::string& v) { c.chunk_elems = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.chunk_elems); }},
      {"latency", "emulated message latency [s]",
       [](RunConfig& c, const std::string& v) { c.latency = to_double(v); },
       [](const RunConfig& c) { return fmt(c.latency); }},
      {"tend", "end time",
       [](RunConfig& c, const std::string& v) { c.t_end = to_double(v); },
       [](const RunConfig& c) { return fmt(c.t_end); }},
      {"maxsteps", "step limit (negative: none)",
       [](RunConfig& c, const std::string& v) { c.max_steps = to_long(v); },
       [](const RunConfig& c) { return std::to_string(c.max_steps); }},
      {"analyze_every", "steps between analysis rows (0: off)",
       [](RunConfig& c, const std::string& v) { c.analyze_every = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.analyze_every); }},
      {"snapshot_every", "steps between snapshots (0: final only)",
       [](RunConfig& c, const std::string& v) { c.snapshot_every = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.snapshot_every); }},
      {"trace_evaluations", "rhs evaluations recorded in trace.csv",
       [](RunConfig& c, const std::string& v) { c.trace_evaluations = static_cast<int>(to_long(v)); },
       [](const RunConfig& c) { return std::to_string(c.trace_evaluations); }},
      {"output", "output directory",
       [](RunConfig& c, const std::string& v) { c.output = v; },
       [](const RunConfig& c) { return c.output; }},
      {"power_per_rank", "power per rank [W] for the EPID",
       [](RunConfig& c, const std::string& v) { c.power_per_rank = to_double(v); },
       [](const RunConfig& c) { return fmt(c.power_per_rank); }},
      {"conv_n", "convergence study: polynomial degrees",
       [](RunConfig& c, const std::string& v) { c.conv_N = to_ints(v); },
       [](const RunConfig& c) { return join(c.conv_N); }},
      {"conv_meshes", "convergence study: elements per direction",
       [](RunConfig& c, const std::string& v) { c.conv_meshes = to_ints(v); },
       [](const RunConfig& c) { return join(c.conv_meshes); }},
      {"scaling_ranks", "scaling study: rank counts",
       [](RunConfig& c, const std::string& v) { c.scaling_ranks = to_ints(v); },
       [](const RunConfig& c) { return join(c.scaling_ranks); }},
  };
  return k;
}

const Key* find_key(const std::string& name) {
  for (const Key& k : keys())
    if (name == k.name) return &k;
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  if (N < 1) throw ConfigError("n: polynomial degree must be at least 1");
  if (split && node_type != NodeType::LGL)
    throw ConfigError("operator = split requires nodetype = LGL (got nodetype = GL)");
  if (shock_capturing && node_type != NodeType::LGL)
    throw ConfigError("shockcapturing = on requires nodetype = LGL (got nodetype = GL)");
  for (int e : elems)
    if (e < 1) throw ConfigError("nelems: element counts must be positive");
  const long n_elems = static_cast<long>(elems[0]) * elems[1] * elems[2];
  if (n_ranks < 1) throw ConfigError("ranks: must be at least 1");
  if (n_ranks > n_elems)
    throw ConfigError("ranks = " + std::to_string(n_ranks) + " exceeds the " + std::to_string(n_elems) +
                      " elements of nelems");
  if (cfl <= 0.0 || cfl_visc <= 0.0) throw ConfigError("cfl: must be positive");
  if (indicator.alpha_max < 0.0 || indicator.alpha_max > 1.0) throw ConfigError("alpha_max: must lie in [0, 1]");
  if (indicator.alpha_fixed > 1.0) throw ConfigError("alpha_fixed: must not exceed 1");
  if (tgv_version != 1 && tgv_version != 2) throw ConfigError("tgv_version: must be 1 or 2");
  if (chunk_elems < 1) throw ConfigError("chunk: must be positive");
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig c;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto bang = line.find('!');
    if (bang != std::string::npos) line.erase(bang);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const Key* k = find_key(key);
    if (!k) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
      k->set(c, value);
    } catch (const Bad& b) {
      throw ConfigError(where + ": " + key + ": " + b.why);
    }
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string to_text(const RunConfig& c) {
  std::string s;
  for (const Key& k : keys()) s += std::string(k.name) + " = " + k.get(c) + "\n";
  return s;
}

std::string defaults_text() {
  const RunConfig c;
  std::string s;
  for (const Key& k : keys()) {
    std::string line = std::string(k.name) + " = " + k.get(c);
    if (*k.doc) {
      line.resize(std::max<size_t>(line.size() + 1, 34), ' ');
      line += "! ";
      line += k.doc;
    }
    s += line + "\n";
  }
  return s;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_text(a) == to_text(b); }

}  // namespace hexdg
