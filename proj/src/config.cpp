#include "polya/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "polya/error.hpp"
#include "polya/simulate.hpp"

namespace polya {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(v) + "' is not a valid integer");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out))
    throw ConfigError("key '" + std::string(key) + "': '" + s + "' is not a finite number");
  return out;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

struct Field {
  std::string_view key;
  std::function<std::string(const ExperimentConfig&)> emit;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  bool execution_only = false;
};

template <typename Int>
Field int_field(std::string_view key, Int ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return std::to_string(c.*member); },
          [key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_int<Int>(key, v); }};
}

Field double_field(std::string_view key, double ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return fmt_double(c.*member); },
          [key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_double(key, v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(int_field("N", &ExperimentConfig::N));
    f.push_back(int_field("a", &ExperimentConfig::a));
    f.push_back(int_field("b", &ExperimentConfig::b));
    f.push_back(double_field("alpha", &ExperimentConfig::alpha));
    f.push_back(int_field("M", &ExperimentConfig::M));
    f.push_back(int_field("master_seed", &ExperimentConfig::master_seed));
    f.push_back(int_field("T_max", &ExperimentConfig::T_max));
    f.push_back(int_field("grid_per_decade", &ExperimentConfig::grid_per_decade));
    f.push_back({"extra_times",
                 [](const ExperimentConfig& c) {
                   return join(c.extra_times, [](std::int64_t t) { return std::to_string(t); });
                 },
                 [](ExperimentConfig& c, std::string_view v) {
                   c.extra_times.clear();
                   for (auto item : split_list(v))
                     c.extra_times.push_back(parse_int<std::int64_t>("extra_times", item));
                 }});
    f.push_back({"gates",
                 [](const ExperimentConfig& c) { return join(c.gates, [](const std::string& g) { return g; }); },
                 [](ExperimentConfig& c, std::string_view v) {
                   c.gates.clear();
                   for (auto item : split_list(v)) c.gates.emplace_back(item);
                 }});
    f.push_back({"out_dir", [](const ExperimentConfig& c) { return c.out_dir; },
                 [](ExperimentConfig& c, std::string_view v) { c.out_dir = std::string(v); }, true});
    Field threads = int_field("threads", &ExperimentConfig::threads);
    threads.execution_only = true;
    f.push_back(threads);
    f.push_back(int_field("urn", &ExperimentConfig::urn));
    f.push_back(int_field("scaling_t_lo", &ExperimentConfig::scaling_t_lo));
    f.push_back(int_field("scaling_t_hi", &ExperimentConfig::scaling_t_hi));
    f.push_back(int_field("martingale_t_max", &ExperimentConfig::martingale_t_max));
    f.push_back(int_field("clt_t", &ExperimentConfig::clt_t));
    f.push_back(int_field("clt_T", &ExperimentConfig::clt_T));
    f.push_back(double_field("proxy_ratio", &ExperimentConfig::proxy_ratio));
    f.push_back(int_field("sub_t1", &ExperimentConfig::sub_t1));
    f.push_back(int_field("sub_t2", &ExperimentConfig::sub_t2));
    f.push_back(int_field("cov_t", &ExperimentConfig::cov_t));
    f.push_back(int_field("ci_t", &ExperimentConfig::ci_t));
    f.push_back(int_field("ci_T", &ExperimentConfig::ci_T));
    f.push_back(double_field("ci_level", &ExperimentConfig::ci_level));
    f.push_back(int_field("alpha_t", &ExperimentConfig::alpha_t));
    f.push_back(int_field("coef_t", &ExperimentConfig::coef_t));
    f.push_back({"coef_alphas",
                 [](const ExperimentConfig& c) { return join(c.coef_alphas, fmt_double); },
                 [](ExperimentConfig& c, std::string_view v) {
                   c.coef_alphas.clear();
                   for (auto item : split_list(v)) c.coef_alphas.push_back(parse_double("coef_alphas", item));
                 }});
    f.push_back(int_field("recursion_instances", &ExperimentConfig::recursion_instances));
    f.push_back(int_field("recursion_seed", &ExperimentConfig::recursion_seed));
    return f;
  }();
  return table;
}

bool selected(const ExperimentConfig& c, std::string_view gate) {
  return std::find(c.gates.begin(), c.gates.end(), gate) != c.gates.end();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + std::string(key) + "' repeated");
    it->set(config, value);
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.emit(config) + "\n";
  return out;
}

void validate(const ExperimentConfig& c) {
  try {
    (void)c.params();
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("model parameters: ") + e.what());
  }
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.M < 1) fail("M must be >= 1");
  if (c.T_max < 1) fail("T_max must be >= 1");
  if (c.grid_per_decade < 1) fail("grid_per_decade must be >= 1");
  if (c.threads < 1) fail("threads must be >= 1");
  if (c.urn < 0 || c.urn >= c.N) fail("urn must lie in [0, N)");
  if (!(c.proxy_ratio >= 1.0)) fail("proxy_ratio must be >= 1");
  for (std::int64_t t : c.extra_times)
    if (t < 0 || t > c.T_max) fail("extra time " + std::to_string(t) + " outside [0, T_max]");

  for (const auto& g : c.gates)
    if (std::find(known_gates().begin(), known_gates().end(), g) == known_gates().end())
      fail("unknown gate '" + g + "'");

  const auto within = [&](std::string_view gate, std::string_view key, std::int64_t t) {
    if (t < 1 || t > c.T_max)
      fail("gate " + std::string(gate) + ": " + std::string(key) + "=" + std::to_string(t) +
           " outside [1, T_max=" + std::to_string(c.T_max) + "]");
  };
  const auto needs_super = [&](std::string_view gate) {
    if (!(c.alpha > 0.5))
      fail("gate " + std::string(gate) + " requires alpha > 1/2, config has alpha=" + fmt_double(c.alpha));
  };
  const auto proxy = [&](std::string_view gate, std::int64_t t, std::int64_t T) {
    if (static_cast<double>(T) < c.proxy_ratio * static_cast<double>(t))
      fail("gate " + std::string(gate) + ": proxy horizon " + std::to_string(T) + " must be >= " +
           fmt_double(c.proxy_ratio) + " * " + std::to_string(t));
  };

  if (selected(c, "scaling")) {
    within("scaling", "scaling_t_lo", c.scaling_t_lo);
    within("scaling", "scaling_t_hi", c.scaling_t_hi);
    if (c.scaling_t_hi <= c.scaling_t_lo) fail("gate scaling: scaling_t_hi must exceed scaling_t_lo");
    if (c.alpha == 0.5 && c.scaling_t_lo < 2) fail("gate scaling: critical fit needs scaling_t_lo >= 2");
  }
  if (selected(c, "martingale") && c.martingale_t_max < 1) fail("martingale_t_max must be >= 1");
  for (const char* g : {"clt-s1", "clt-s2", "clt-s2-control", "clt-s3", "clt-s4"}) {
    if (!selected(c, g)) continue;
    within(g, "clt_t", c.clt_t);
    if (c.M < 10) fail(std::string("gate ") + g + " needs M >= 10");
  }
  if (selected(c, "clt-s1") || selected(c, "clt-s4")) {
    within("clt", "clt_T", c.clt_T);
    proxy("clt", c.clt_t, c.clt_T);
  }
  if (selected(c, "clt-s2")) needs_super("clt-s2");
  if (selected(c, "clt-s2-control")) needs_super("clt-s2-control");
  if (selected(c, "clt-s4")) needs_super("clt-s4");
  if (selected(c, "clt-s3")) {
    if (c.alpha != 0.5) fail("gate clt-s3 requires alpha = 1/2, config has alpha=" + fmt_double(c.alpha));
    if (c.clt_t < 2) fail("gate clt-s3 needs clt_t >= 2");
  }
  if (selected(c, "sub-limit")) {
    if (!(c.alpha < 0.5)) fail("gate sub-limit requires alpha < 1/2, config has alpha=" + fmt_double(c.alpha));
    within("sub-limit", "sub_t1", c.sub_t1);
    within("sub-limit", "sub_t2", c.sub_t2);
    if (c.sub_t2 < 2 * c.sub_t1) fail("gate sub-limit needs sub_t2 >= 2 * sub_t1");
    if (c.M < 2) fail("gate sub-limit needs M >= 2");
  }
  if (selected(c, "covariance")) {
    needs_super("covariance");
    within("covariance", "cov_t", c.cov_t);
    if (c.M < 2000) fail("gate covariance needs M >= 2000");
  }
  if (selected(c, "ci-coverage")) {
    within("ci-coverage", "ci_t", c.ci_t);
    within("ci-coverage", "ci_T", c.ci_T);
    proxy("ci-coverage", c.ci_t, c.ci_T);
    if (!(c.ci_level > 0.0 && c.ci_level < 1.0)) fail("ci_level must lie in (0, 1)");
  }
  if (selected(c, "alpha-est")) {
    needs_super("alpha-est");
    within("alpha-est", "alpha_t", c.alpha_t);
    if (c.M < 500) fail("gate alpha-est needs M >= 500");
  }
  if (selected(c, "coefficients")) {
    if (c.coef_t < 1) fail("coef_t must be >= 1");
    if (c.coef_alphas.empty()) fail("coef_alphas must be nonempty");
    for (double a : c.coef_alphas)
      if (!(a > 0.0 && a <= 1.0)) fail("coef_alphas entries must lie in (0, 1]");
  }
  if (selected(c, "recursion") && c.recursion_instances < 1) fail("recursion_instances must be >= 1");
}

std::vector<std::int64_t> recording_grid(const ExperimentConfig& c) {
  std::vector<std::int64_t> extra = c.extra_times;
  for (std::int64_t t : {c.scaling_t_lo, c.scaling_t_hi, c.clt_t, c.clt_T, c.sub_t1, c.sub_t2,
                         c.cov_t, c.ci_t, c.ci_T, c.alpha_t})
    if (t >= 0 && t <= c.T_max) extra.push_back(t);
  return geometric_grid(c.T_max, c.grid_per_decade, extra);
}

std::string config_hash(const ExperimentConfig& config) {
  std::string canonical;
  for (const auto& f : fields())
    if (!f.execution_only) canonical += std::string(f.key) + " = " + f.emit(config) + "\n";
  return hex16(fnv1a(canonical));
}

std::string simulation_hash(const ExperimentConfig& c) {
  std::string canonical = "N=" + std::to_string(c.N) + ";a=" + std::to_string(c.a) +
                          ";b=" + std::to_string(c.b) + ";alpha=" + fmt_double(c.alpha) +
                          ";M=" + std::to_string(c.M) + ";master_seed=" + std::to_string(c.master_seed) +
                          ";T_max=" + std::to_string(c.T_max) + ";grid=";
  for (std::int64_t t : recording_grid(c)) canonical += std::to_string(t) + ",";
  return hex16(fnv1a(canonical));
}

}  // namespace polya
