#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "heis/density.hpp"
#include "heis/harness.hpp"

namespace heis {

namespace {

struct Named {
  Experiment e;
  const char* name;
};
constexpr Named kExperiments[] = {
    {Experiment::simulate, "simulate"},
    {Experiment::ws_converge, "ws-converge"},
    {Experiment::energy_diverge, "energy-diverge"},
    {Experiment::tube, "tube"},
    {Experiment::girsanov_ratio, "girsanov-ratio"},
    {Experiment::dds_diagnostics, "dds-diagnostics"},
    {Experiment::helix, "helix"},
    {Experiment::support, "support"},
    {Experiment::levy_law, "levy-law"},
};

}  // namespace

Experiment parse_experiment(const std::string& name) {
  for (const auto& n : kExperiments)
    if (name == n.name) return n.e;
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

std::string to_string(Experiment e) {
  for (const auto& n : kExperiments)
    if (n.e == e) return n.name;
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& n : kExperiments) v.emplace_back(n.name);
    return v;
  }();
  return names;
}

ConfigError::ConfigError(const std::string& f, const std::string& what)
    : std::invalid_argument("field '" + f + "': " + what), field(f) {}

ParseError::ParseError(std::size_t pos, const std::string& what)
    : std::invalid_argument("at position " + std::to_string(pos) + ": " + what), position(pos) {}

// ---- numbers ------------------------------------------------------------------

namespace {

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(out);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  if (s.rfind("2^", 0) == 0) {
    double k = 0.0;
    if (!parse_double(std::string_view(s).substr(2), k) || k != std::floor(k) || std::abs(k) > 1000)
      throw std::invalid_argument("bad power of two '" + text + "'");
    return std::ldexp(1.0, static_cast<int>(k));
  }
  double v = 0.0;
  if (!parse_double(s, v)) throw std::invalid_argument("bad number '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(parse_number(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// ---- reference curves -----------------------------------------------------------

namespace {

class CurveLexer {
 public:
  explicit CurveLexer(const std::string& s) : s_(s) {}

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_space();
    return i_ >= s_.size();
  }
  bool peek(char c) {
    skip_space();
    return i_ < s_.size() && s_[i_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw ParseError(i_, std::string("expected '") + c + "'");
    ++i_;
  }
  std::size_t pos() const { return i_; }

  std::string word() {
    skip_space();
    const std::size_t b = i_;
    while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) throw ParseError(b, "expected a piece name");
    return s_.substr(b, i_ - b);
  }

  double number() {
    skip_space();
    const std::size_t b = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != ';') ++i_;
    if (b == i_) throw ParseError(b, "expected a number");
    double v = 0.0;
    if (!parse_double(std::string_view(s_).substr(b, i_ - b), v))
      throw ParseError(b, "bad number '" + s_.substr(b, i_ - b) + "'");
    return v;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

ReferenceCurve parse_reference_curve(const std::string& text) {
  CurveLexer lex(text);
  std::vector<ArcPtr> arcs;
  if (lex.done()) throw ParseError(0, "empty curve");
  for (;;) {
    const std::size_t at = (lex.skip_space(), lex.pos());
    const std::string w = lex.word();
    if (w == "zero") {
      arcs.push_back(std::make_shared<QuadraticArc>(Vec2{}));
    } else if (w == "line") {
      const double a = lex.number();
      const double b = lex.number();
      arcs.push_back(std::make_shared<QuadraticArc>(Vec2{a, b}));
    } else if (w == "poly2") {
      const double p = lex.number();
      const double q = lex.number();
      arcs.push_back(std::make_shared<QuadraticArc>(Vec2{p, 0.0}, Vec2{0.0, q}));
    } else if (w == "quad") {
      double c[6];
      for (double& v : c) v = lex.number();
      if (c[0] != 0.0 || c[1] != 0.0) throw ParseError(at, "nonzero start point");
      arcs.push_back(std::make_shared<QuadraticArc>(Vec2{c[2], c[3]}, Vec2{c[4], c[5]}));
    } else {
      throw ParseError(at, "unknown piece '" + w + "'");
    }
    if (lex.done()) break;
    lex.expect(';');
    if (lex.done()) throw ParseError(lex.pos(), "expected a piece after ';'");
  }
  const std::vector<double> durations(arcs.size(), 1.0);
  return ReferenceCurve(HorizontalCurve::chain(arcs, durations), trim(text));
}

// ---- configuration ----------------------------------------------------------------

namespace {

json pow2_list(int from, int to) {
  json a = json::array();
  for (int k = from; k <= to; ++k) a.push_back(std::ldexp(1.0, -k));
  return a;
}

json defaults(Experiment e) {
  json j = {{"seed", 1}};
  switch (e) {
    case Experiment::simulate:
      j["fine_step"] = std::ldexp(1.0, -10);
      j["stream"] = 0;
      break;
    case Experiment::ws_converge:
      j["fine_step"] = std::ldexp(1.0, -12);
      j["trials"] = 2000;
      j["deltas"] = pow2_list(2, 5);
      j["interpolant"] = "linear";
      break;
    case Experiment::energy_diverge:
      j["trials"] = 10000;
      j["steps"] = pow2_list(6, 10);
      j["coarse_delta"] = 0.125;
      break;
    case Experiment::tube:
      j["fine_step"] = std::ldexp(1.0, -12);
      j["trials"] = 200000;
      j["max_trials"] = 1000000;
      j["min_accepted"] = 200;
      j["phi"] = "line 1 0";
      j["epsilon"] = 0.9;
      j["deltas"] = {0.5, 0.35, 0.25, 0.18};
      break;
    case Experiment::girsanov_ratio:
      j["fine_step"] = std::ldexp(1.0, -10);
      j["trials"] = 200000;
      j["martingale_trials"] = 100000;
      j["phi"] = "line 1 0";
      j["deltas"] = {1.0, 0.7, 0.5, 0.35};
      break;
    case Experiment::dds_diagnostics:
      j["fine_step"] = std::ldexp(1.0, -10);
      j["trials"] = 100000;
      j["times"] = {0.25, 0.5, 1.0};
      break;
    case Experiment::helix:
      j["n"] = {4, 8, 16, 32, 64};
      j["target"] = {0.0, 0.0, 1.0};
      j["variant"] = "identity-anchored";
      break;
    case Experiment::support:
      j["fine_step"] = std::ldexp(1.0, -10);
      j["trials"] = 100000;
      j["phi"] = "line 1 0";
      j["epsilon"] = {1.0};
      break;
    case Experiment::levy_law:
      j["fine_step"] = std::ldexp(1.0, -12);
      j["trials"] = 100000;
      j["lambdas"] = {0.5, 1.0, 2.0};
      break;
  }
  return j;
}

bool is_integer_field(const std::string& k) {
  return k == "seed" || k == "trials" || k == "max_trials" || k == "min_accepted" || k == "martingale_trials" ||
         k == "stream" || k == "n";
}

json to_uint(const std::string& key, double v) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15)
    throw ConfigError(key, "expected a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

// Coerces `v` to the shape of `def`. Strings are accepted for numbers and
// for comma-separated lists, which is what command-line flags deliver.
json coerce(const std::string& key, const json& def, const json& v) {
  const bool integer = is_integer_field(key);
  const auto scalar = [&](const json& x) -> json {
    double d = 0.0;
    if (x.is_number()) {
      d = x.get<double>();
    } else if (x.is_string()) {
      try {
        d = parse_number(x.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
      }
    } else {
      throw ConfigError(key, "expected a number");
    }
    if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
    return integer ? to_uint(key, d) : json(d);
  };
  if (def.is_string()) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return trim(v.get<std::string>());
  }
  if (def.is_array()) {
    json out = json::array();
    if (v.is_array()) {
      for (const auto& x : v) out.push_back(scalar(x));
    } else if (v.is_string()) {
      std::vector<double> xs;
      try {
        xs = parse_number_list(v.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
      }
      for (double x : xs) out.push_back(scalar(json(x)));
    } else {
      out.push_back(scalar(v));
    }
    if (out.empty()) throw ConfigError(key, "list must not be empty");
    return out;
  }
  return scalar(v);
}

int dyadic_exponent(const std::string& key, double step) {
  int e = 0;
  if (!(step > 0.0) || std::frexp(step, &e) != 0.5) throw ConfigError(key, "must be a power of two 2^-k");
  const int k = 1 - e;
  if (k < 6 || k > 20) throw ConfigError(key, "must be 2^-k with k in [6, 20]");
  return k;
}

void require_positive(const json& f, const std::string& key) {
  const auto check = [&](double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
  };
  if (f[key].is_array())
    for (const auto& x : f[key]) check(x.get<double>());
  else
    check(f[key].get<double>());
}

void validate(Experiment e, const json& f) {
  int k = 0;
  if (f.contains("fine_step")) k = dyadic_exponent("fine_step", f["fine_step"].get<double>());
  for (const char* key : {"trials", "max_trials", "min_accepted", "martingale_trials"})
    if (f.contains(key) && f[key].get<std::uint64_t>() < 1) throw ConfigError(key, "must be at least 1");
  if (f.contains("phi")) {
    try {
      parse_reference_curve(f["phi"].get<std::string>());
    } catch (const std::invalid_argument& ex) {
      throw ConfigError("phi", ex.what());
    }
  }
  switch (e) {
    case Experiment::ws_converge: {
      const double h = f["fine_step"].get<double>();
      for (const auto& d : f["deltas"]) {
        const double r = d.get<double>() / h;
        const double ri = std::round(r);
        if (!(d.get<double>() <= 1.0) || ri < 1.0 || std::abs(r - ri) > 1e-9)
          throw ConfigError("deltas", "each delta must be a multiple of fine_step in (0, 1]");
        const auto m = static_cast<std::uint64_t>(ri);
        if ((m & (m - 1)) != 0) throw ConfigError("deltas", "each delta must be fine_step times a power of two");
      }
      const std::string ip = f["interpolant"].get<std::string>();
      if (ip != "linear" && ip != "smoothstep") throw ConfigError("interpolant", "expected linear or smoothstep");
      break;
    }
    case Experiment::energy_diverge: {
      for (const auto& s : f["steps"]) {
        dyadic_exponent("steps", s.get<double>());
        if (s.get<double>() > f["coarse_delta"].get<double>())
          throw ConfigError("steps", "every step must be at most coarse_delta");
      }
      int ce = 0;
      if (std::frexp(f["coarse_delta"].get<double>(), &ce) != 0.5 || f["coarse_delta"].get<double>() > 1.0)
        throw ConfigError("coarse_delta", "must be a power of two in (0, 1]");
      break;
    }
    case Experiment::tube:
      require_positive(f, "epsilon");
      require_positive(f, "deltas");
      if (f["max_trials"].get<std::uint64_t>() < f["trials"].get<std::uint64_t>())
        throw ConfigError("max_trials", "must be at least trials");
      break;
    case Experiment::girsanov_ratio:
      require_positive(f, "deltas");
      break;
    case Experiment::dds_diagnostics:
      for (const auto& t : f["times"]) {
        const double r = t.get<double>() * std::ldexp(1.0, k);
        if (!(t.get<double>() > 0.0 && t.get<double>() <= 1.0) || r != std::floor(r))
          throw ConfigError("times", "each time must be a grid node in (0, 1]");
      }
      break;
    case Experiment::helix:
      for (const auto& n : f["n"])
        if (n.get<std::uint64_t>() < 1 || n.get<std::uint64_t>() > 4096) throw ConfigError("n", "must be in [1, 4096]");
      if (f["target"].size() != 3) throw ConfigError("target", "expected three numbers a1,a2,a3");
      try {
        parse_helix_variant(f["variant"].get<std::string>());
      } catch (const std::invalid_argument& ex) {
        throw ConfigError("variant", ex.what());
      }
      break;
    case Experiment::support:
      for (const auto& x : f["epsilon"])
        if (!(x.get<double>() >= 0.0)) throw ConfigError("epsilon", "must be nonnegative");
      break;
    case Experiment::simulate:
    case Experiment::levy_law:
      break;
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::make(Experiment e, const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("config", "expected a JSON object");
  ExperimentConfig c;
  c.experiment = e;
  c.fields = defaults(e);
  for (const auto& [key, value] : overrides.items()) {
    if (key == "experiment") {
      if (!value.is_string() || parse_experiment(value.get<std::string>()) != e)
        throw ConfigError("experiment", "does not match the requested experiment");
      continue;
    }
    if (key == "out") {
      if (!value.is_string()) throw ConfigError("out", "expected a string");
      c.out_dir = value.get<std::string>();
      continue;
    }
    if (key == "threads") {
      const json t = coerce("threads", json(0), value);
      c.threads = static_cast<int>(t.get<double>());
      if (c.threads < 0 || t.get<double>() != c.threads) throw ConfigError("threads", "expected a nonnegative integer");
      continue;
    }
    if (!c.fields.contains(key)) throw ConfigError(key, "unknown field for experiment " + to_string(e));
    c.fields[key] = coerce(key, c.fields[key], value);
  }
  validate(e, c.fields);
  return c;
}

std::string ExperimentConfig::hash() const {
  const std::string text = to_string(experiment) + "\n" + fields.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json ExperimentConfig::to_json() const {
  json j = fields;
  j["experiment"] = to_string(experiment);
  return j;
}

}  // namespace heis
