#include "sinoma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "sinoma/errors.hpp"
#include "sinoma/rng.hpp"

namespace sinoma {

TrialResult run_trial(const SystemConfig& cfg, std::uint64_t trial_seed) {
  Scenario s = generate_scenario(cfg, trial_seed);
  TrialResult r;
  r.rx = run_receiver(s.signal.Y, cfg);
  r.truth = std::move(s.truth);
  return r;
}

double mdr(std::span<const int> truth, std::span<const int> detected) {
  if (truth.empty()) return 0.0;
  long missed = 0;
  for (int n : truth) {
    if (std::find(detected.begin(), detected.end(), n) == detected.end()) ++missed;
  }
  return static_cast<double>(missed) / static_cast<double>(truth.size());
}

double far(std::span<const int> truth, std::span<const int> detected, int N) {
  const long inactive = N - static_cast<long>(truth.size());
  if (inactive <= 0) return 0.0;
  long extra = 0;
  for (int n : detected) {
    if (std::find(truth.begin(), truth.end(), n) == truth.end()) ++extra;
  }
  return static_cast<double>(extra) / static_cast<double>(inactive);
}

namespace {

const UserEstimate* find_user(std::span<const UserEstimate> users, int index) {
  for (const auto& u : users) {
    if (u.index == index) return &u;
  }
  return nullptr;
}

long count_symbol_errors(const UserEstimate& u, const std::vector<int>& q) {
  const long frames = static_cast<long>(q.size()) - 1;
  if (!u.decodable || static_cast<long>(u.symbols_hat.size()) != frames) return frames;
  long errors = 0;
  for (long j = 1; j <= frames; ++j) {
    if (u.symbols_hat[static_cast<std::size_t>(j - 1)] != q[static_cast<std::size_t>(j)]) ++errors;
  }
  return errors;
}

}  // namespace

double nser(const GroundTruth& truth, std::span<const UserEstimate> users, NserMode mode) {
  long errors = 0;
  long scored = 0;
  long missed_symbols = 0;
  for (std::size_t k = 0; k < truth.active_set.size(); ++k) {
    const auto& q = truth.symbols[k];
    const long frames = static_cast<long>(q.size()) - 1;
    if (const UserEstimate* u = find_user(users, truth.active_set[k])) {
      errors += count_symbol_errors(*u, q);
      scored += frames;
    } else {
      missed_symbols += frames;
    }
  }
  if (mode == NserMode::Strict) {
    const long denom = scored + missed_symbols;
    return denom == 0 ? 0.0 : static_cast<double>(errors + missed_symbols) / denom;
  }
  return scored == 0 ? 0.0 : static_cast<double>(errors) / scored;
}

RmseValue rmse_ce(const GroundTruth& truth, std::span<const UserEstimate> users) {
  double acc = 0.0;
  long count = 0;
  for (std::size_t k = 0; k < truth.active_set.size(); ++k) {
    if (const UserEstimate* u = find_user(users, truth.active_set[k])) {
      acc += std::norm(u->h_hat - truth.channels[k]);
      ++count;
    }
  }
  if (count == 0) return {};
  return {std::sqrt(acc / count), false};
}

TrialTally tally(const TrialResult& trial, int N, int J) {
  TrialTally t;
  const auto& truth = trial.truth;
  const auto& users = trial.rx.users;
  t.active = static_cast<long>(truth.active_set.size());
  t.inactive = N - t.active;
  t.detected = static_cast<long>(trial.rx.detected.size());
  t.k_hat = trial.rx.order.k_hat;
  t.runtime_s = trial.rx.timings.total();
  for (const auto& u : users) {
    if (!u.reliable) ++t.unreliable;
  }
  for (int n : trial.rx.detected) {
    if (!std::binary_search(truth.active_set.begin(), truth.active_set.end(), n)) {
      ++t.false_alarms;
    }
  }
  for (std::size_t k = 0; k < truth.active_set.size(); ++k) {
    const UserEstimate* u = find_user(users, truth.active_set[k]);
    if (!u) {
      ++t.missed;
      continue;
    }
    ++t.matched;
    t.symbol_errors += count_symbol_errors(*u, truth.symbols[k]);
    t.symbols_scored += J - 1;
    t.channel_sq_error += std::norm(u->h_hat - truth.channels[k]);
  }
  return t;
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::M: return "M";
    case SweepAxis::TxPowerDbm: return "tx_power_dbm";
    case SweepAxis::ActivationProbability: return "p_a";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "M") return SweepAxis::M;
  if (name == "tx_power_dbm") return SweepAxis::TxPowerDbm;
  if (name == "p_a") return SweepAxis::ActivationProbability;
  throw InvalidInput("unknown sweep axis '" + std::string(name) + "'");
}

SystemConfig apply_axis(SystemConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::M:
      if (value != std::floor(value)) throw InvalidInput("M must be an integer");
      cfg.M = static_cast<int>(value);
      break;
    case SweepAxis::TxPowerDbm:
      cfg.tx_power_dbm = value;
      break;
    case SweepAxis::ActivationProbability:
      cfg.p_a = value;
      break;
  }
  cfg.validate();
  return cfg;
}

std::uint64_t sweep_trial_seed(std::uint64_t seed, SweepAxis axis, double value, int trial) {
  return derive_seed(seed, {static_cast<std::uint64_t>(axis) + 1,
                            std::bit_cast<std::uint64_t>(value),
                            static_cast<std::uint64_t>(trial)});
}

MetricsRecord aggregate(std::string_view axis, double value, std::span<const TrialTally> tallies,
                        int J) {
  MetricsRecord r;
  r.axis = std::string(axis);
  r.value = value;
  r.trials = static_cast<int>(tallies.size());
  long inactive = 0, matched = 0, symbol_errors = 0, symbols_scored = 0;
  double sq = 0.0, runtime = 0.0;
  for (const TrialTally& t : tallies) {
    r.active += t.active;
    r.missed += t.missed;
    r.detected += t.detected;
    r.unreliable += t.unreliable;
    r.false_alarms += t.false_alarms;
    inactive += t.inactive;
    matched += t.matched;
    symbol_errors += t.symbol_errors;
    symbols_scored += t.symbols_scored;
    sq += t.channel_sq_error;
    runtime += t.runtime_s;
    if (t.k_hat == t.active) ++r.order_exact;
    if (t.k_hat > t.active) ++r.order_over;
  }
  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  const long frames = J - 1;
  r.mdr = ratio(static_cast<double>(r.missed), static_cast<double>(r.active));
  r.far = ratio(static_cast<double>(r.false_alarms), static_cast<double>(inactive));
  r.nser_strict = ratio(static_cast<double>(symbol_errors + r.missed * frames),
                        static_cast<double>(r.active * frames));
  r.nser_detected_only = ratio(static_cast<double>(symbol_errors), static_cast<double>(symbols_scored));
  r.rmse_ce = std::sqrt(ratio(sq, static_cast<double>(matched)));
  r.unreliable_frac = ratio(static_cast<double>(r.unreliable), static_cast<double>(r.detected));
  r.mean_runtime_s = ratio(runtime, static_cast<double>(r.trials));
  return r;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<MetricsRecord> sweep(const SystemConfig& base, SweepAxis axis,
                                 std::span<const double> values, int trials,
                                 const SweepOptions& opts) {
  if (trials < 1) throw InvalidInput("sweep: trials must be >= 1");
  std::vector<SystemConfig> cfgs;
  for (double v : values) cfgs.push_back(apply_axis(base, axis, v));

  std::vector<MetricsRecord> out;
  for (std::size_t p = 0; p < cfgs.size(); ++p) {
    const SystemConfig& cfg = cfgs[p];
    std::vector<TrialTally> tallies(static_cast<std::size_t>(trials));
    parallel_for(trials, opts.workers, [&](int i) {
      const auto seed = sweep_trial_seed(base.seed, axis, values[p], i);
      TrialTally t = tally(run_trial(cfg, seed), cfg.N, cfg.J);
      if (!opts.timing) t.runtime_s = 0.0;
      tallies[static_cast<std::size_t>(i)] = t;
    });
    out.push_back(aggregate(axis_name(axis), values[p], tallies, cfg.J));
  }
  return out;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRecord> records) {
  out << kMetricsCsvHeader << '\n';
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%.10g,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  r.axis.c_str(), r.value, r.trials, r.mdr, r.far, r.nser_strict,
                  r.nser_detected_only, r.rmse_ce, r.unreliable_frac, r.mean_runtime_s);
    out << buf;
  }
}

}  // namespace sinoma
