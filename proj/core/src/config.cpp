#include "sinoma/config.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include "sinoma/errors.hpp"

namespace sinoma {

int default_snapshot_length(int M) {
  switch (M) {
    case 32: return 20;
    case 48: return 40;
    case 64: return 50;
    case 80: return 60;
    case 96: return 78;
    case 112: return 90;
    default: break;
  }
  const int lo = M / 2 + 1;
  const int hi = M - 1;
  int l = static_cast<int>(std::lround(0.78 * M));
  if (l < lo) l = lo;
  if (l > hi) l = hi;
  return l;
}

int default_k_max(int N, int l) {
  const int cap = 2 * ((N + 1) / 2);
  return std::max(0, std::min(l - 1, cap));
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

int SystemConfig::snapshot_length() const { return l > 0 ? l : default_snapshot_length(M); }

int SystemConfig::order_scan_limit() const {
  const int len = snapshot_length();
  return k_max > 0 ? std::min(k_max, len - 1) : default_k_max(N, len);
}

double SystemConfig::tx_power_w() const { return dbm_to_watts(tx_power_dbm); }

double SystemConfig::gamma() const {
  return sequence_amplitude(tx_power_w(), M, power_mapping);
}

CodebookConfig SystemConfig::codebook() const { return {N, M, gamma()}; }

void SystemConfig::validate() const {
  auto fail = [](const std::string& m) { throw InvalidInput("config: " + m); };
  if (M < 2 || N <= M) fail("require 2 <= M < N");
  const int len = snapshot_length();
  if (len <= 1 || len >= M) fail("require 1 < l < M");
  if (J < 2) fail("require J >= 2");
  if (L < 2) fail("require L >= 2");
  if (!(p_a >= 0.0 && p_a <= 1.0)) fail("require 0 <= p_a <= 1");
  if (!std::isfinite(tx_power_dbm)) fail("tx_power_dbm must be finite");
  if (!(cell_radius_m > 0.0) || !(min_dist_m > 0.0) || !(min_dist_m < cell_radius_m)) {
    fail("require 0 < min_dist_m < cell_radius_m");
  }
  if (!std::isfinite(noise_psd_dbm_hz)) fail("noise_psd_dbm_hz must be finite");
  if (!(bandwidth_hz > 0.0)) fail("bandwidth_hz must be positive");
  if (fixed_active > N) fail("fixed_active exceeds N");
  if (k_max < 0) fail("k_max must be >= 0");
  if (lambda && !(*lambda > 0.0)) fail("lambda must be positive");
}

std::string_view to_string(Criterion c) { return c == Criterion::BIC ? "bic" : "aic"; }

std::string_view to_string(PowerMapping p) {
  return p == PowerMapping::PerSymbolTotal ? "per_symbol_total" : "per_element";
}

std::string_view to_string(ReliabilityRule r) {
  return r == ReliabilityRule::Linear ? "linear" : "log";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is available in libstdc++ 11.
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) {
      throw InvalidInput("bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
  } else {
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) {
      throw InvalidInput("bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw InvalidInput("bad boolean for '" + std::string(key) + "': '" + std::string(v) + "'");
}

}  // namespace

void set_config_field(SystemConfig& c, std::string_view key, std::string_view v) {
  if (key == "N") c.N = parse_number<int>(key, v);
  else if (key == "M") c.M = parse_number<int>(key, v);
  else if (key == "J") c.J = parse_number<int>(key, v);
  else if (key == "L") c.L = parse_number<int>(key, v);
  else if (key == "p_a") c.p_a = parse_number<double>(key, v);
  else if (key == "tx_power_dbm") c.tx_power_dbm = parse_number<double>(key, v);
  else if (key == "cell_radius_m") c.cell_radius_m = parse_number<double>(key, v);
  else if (key == "min_dist_m") c.min_dist_m = parse_number<double>(key, v);
  else if (key == "noise_psd_dbm_hz") c.noise_psd_dbm_hz = parse_number<double>(key, v);
  else if (key == "bandwidth_hz") c.bandwidth_hz = parse_number<double>(key, v);
  else if (key == "l") c.l = v == "auto" ? 0 : parse_number<int>(key, v);
  else if (key == "criterion") {
    if (v == "bic" || v == "BIC") c.criterion = Criterion::BIC;
    else if (v == "aic" || v == "AIC") c.criterion = Criterion::AIC;
    else throw InvalidInput("criterion must be bic or aic");
  } else if (key == "refine") c.refine = parse_bool(key, v);
  else if (key == "power_mapping") {
    if (v == "per_symbol_total") c.power_mapping = PowerMapping::PerSymbolTotal;
    else if (v == "per_element") c.power_mapping = PowerMapping::PerElement;
    else throw InvalidInput("power_mapping must be per_symbol_total or per_element");
  } else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "fixed_active") c.fixed_active = v == "off" ? -1 : parse_number<int>(key, v);
  else if (key == "noiseless") c.noiseless = parse_bool(key, v);
  else if (key == "k_max") c.k_max = v == "auto" ? 0 : parse_number<int>(key, v);
  else if (key == "reliability") {
    if (v == "linear") c.reliability = ReliabilityRule::Linear;
    else if (v == "log") c.reliability = ReliabilityRule::LogDomain;
    else throw InvalidInput("reliability must be linear or log");
  } else if (key == "lambda") {
    if (v == "auto") c.lambda.reset();
    else c.lambda = parse_number<double>(key, v);
  } else {
    throw InvalidInput("unknown key '" + std::string(key) + "'");
  }
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(lineno, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "missing key");
    if (value.empty()) throw ConfigError(lineno, "missing value for '" + std::string(key) + "'");
    if (!seen.emplace(key).second) {
      throw ConfigError(lineno, "duplicate key '" + std::string(key) + "'");
    }
    try {
      set_config_field(cfg, key, value);
    } catch (const InvalidInput& e) {
      throw ConfigError(lineno, e.what());
    }
  }
  if (in.bad()) throw ConfigError(lineno, "read error");
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(lineno, e.what());
  }
  return cfg;
}

SystemConfig parse_config_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

std::string format_config(const SystemConfig& c) {
  std::ostringstream o;
  o << std::setprecision(std::numeric_limits<double>::max_digits10);
  o << "N = " << c.N << '\n'
    << "M = " << c.M << '\n'
    << "J = " << c.J << '\n'
    << "L = " << c.L << '\n'
    << "p_a = " << c.p_a << '\n'
    << "tx_power_dbm = " << c.tx_power_dbm << '\n'
    << "cell_radius_m = " << c.cell_radius_m << '\n'
    << "min_dist_m = " << c.min_dist_m << '\n'
    << "noise_psd_dbm_hz = " << c.noise_psd_dbm_hz << '\n'
    << "bandwidth_hz = " << c.bandwidth_hz << '\n'
    << "l = " << c.snapshot_length() << '\n'
    << "criterion = " << to_string(c.criterion) << '\n'
    << "refine = " << (c.refine ? "true" : "false") << '\n'
    << "power_mapping = " << to_string(c.power_mapping) << '\n'
    << "seed = " << c.seed << '\n'
    << "fixed_active = " << c.fixed_active << '\n'
    << "noiseless = " << (c.noiseless ? "true" : "false") << '\n'
    << "k_max = " << c.order_scan_limit() << '\n'
    << "reliability = " << to_string(c.reliability) << '\n';
  if (c.lambda) o << "lambda = " << *c.lambda << '\n';
  else o << "lambda = auto\n";
  return o.str();
}

}  // namespace sinoma
