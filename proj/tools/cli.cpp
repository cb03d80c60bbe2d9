#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sinoma/config.hpp"
#include "sinoma/dataset.hpp"
#include "sinoma/harness.hpp"
#include "sinoma/receiver.hpp"
#include "sinoma/rng.hpp"
#include "sinoma/scenario.hpp"

namespace sinoma::cli {

namespace {

/// Failure to read or write a file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed user input that is not a config or dataset error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_path;
  std::string dataset_path;
  std::string axis;
  std::string values;
  int trials = 100;
  int workers = 0;
  std::string refine;
  std::string criterion;
  std::string timing = "on";
  bool noiseless = false;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream o;
  o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return o.str();
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    s += args[i];
  }
  return s;
}

void apply_receiver_overrides(SystemConfig& cfg, const Options& o) {
  if (!o.refine.empty()) set_config_field(cfg, "refine", o.refine);
  if (!o.criterion.empty()) set_config_field(cfg, "criterion", o.criterion);
}

SystemConfig load_config(const Options& o) {
  SystemConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot open config '" + o.config_path + "'");
    try {
      cfg = parse_config(in);
    } catch (const ConfigError& e) {
      throw ConfigError(e.line(), o.config_path + ": " + e.what());
    }
  }
  apply_receiver_overrides(cfg, o);
  if (o.noiseless) cfg.noiseless = true;
  cfg.validate();
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_manifest(const std::string& path, const SystemConfig& cfg,
                    const std::vector<std::string>& args, const std::string& started) {
  std::ostringstream m;
  m << "artifact = sinoma\n"
    << "artifact_version = " << SINOMA_VERSION << '\n'
    << "command = " << join_args(args) << '\n'
    << "started = " << started << '\n'
    << "finished = " << utc_now() << '\n'
    << "[config]\n"
    << format_config(cfg);
  write_file(path, m.str());
}

int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--values: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw UsageError("--values: cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--values: empty list");
  return out;
}

int cmd_simulate(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string started = utc_now();
  if (o.out_path.empty()) throw UsageError("simulate: --out is required");
  const SystemConfig cfg = load_config(o);
  Scenario s = generate_scenario(cfg, cfg.seed);
  std::ostringstream buf;
  write_dataset(buf, Dataset{cfg, std::move(s.truth), std::move(s.signal)});
  write_file(o.out_path, buf.str());
  write_manifest(o.out_path + ".manifest", cfg, args, started);
  out << "wrote " << o.out_path << '\n';
  return kOk;
}

void print_report(std::ostream& r, const std::string& path, const ReceiverOutput& rx) {
  r << "dataset: " << path << '\n';
  r << rx.detected.size() << " users detected\n";
  if (rx.estimation_failed) r << "note: estimation failure, detection discarded\n";
  r << "detected:";
  for (int n : rx.detected) r << ' ' << n;
  r << '\n';
  r << std::setprecision(6);
  for (const UserEstimate& u : rx.users) {
    r << "user " << u.index << " |h|=" << std::abs(u.h_hat) << " zeta=" << u.zeta_hat
      << " eta=" << u.eta << " reliable=" << (u.reliable ? "yes" : "no");
    if (u.reliable) {
      r << " symbols=";
      for (std::size_t j = 0; j < u.symbols_hat.size(); ++j) {
        if (j) r << ',';
        r << u.symbols_hat[j];
      }
    } else {
      r << " action=retransmit";
    }
    r << '\n';
  }
  const StageTimings& t = rx.timings;
  r << "timings_s snapshot_svd=" << t.snapshot_svd << " order=" << t.order
    << " esprit=" << t.esprit << " varpro=" << t.varpro << " estimation=" << t.estimation
    << " total=" << t.total() << '\n';
}

int cmd_detect(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string started = utc_now();
  std::ifstream in(o.dataset_path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset '" + o.dataset_path + "'");
  Dataset ds = read_dataset(in);
  apply_receiver_overrides(ds.config, o);
  const ReceiverOutput rx = run_receiver(ds.signal.Y, ds.config);

  std::ostringstream report;
  print_report(report, o.dataset_path, rx);
  if (o.out_path.empty()) {
    out << report.str();
    write_manifest(o.dataset_path + ".detect.manifest", ds.config, args, started);
  } else {
    write_file(o.out_path, report.str());
    write_manifest(o.out_path + ".manifest", ds.config, args, started);
  }
  return kOk;
}

int cmd_sweep(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string started = utc_now();
  if (o.out_path.empty()) throw UsageError("sweep: --out is required");
  if (o.axis.empty() || o.values.empty()) throw UsageError("sweep: --axis and --values are required");
  if (o.trials < 1) throw UsageError("sweep: --trials must be >= 1");
  const SystemConfig cfg = load_config(o);
  SweepAxis axis;
  try {
    axis = parse_axis(o.axis);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const std::vector<double> values = parse_values(o.values);
  SweepOptions so;
  so.workers = o.workers > 0 ? o.workers : default_workers();
  so.timing = o.timing != "off";
  const auto records = sweep(cfg, axis, values, o.trials, so);
  std::ostringstream csv;
  write_metrics_csv(csv, records);
  write_file(o.out_path, csv.str());
  write_manifest(o.out_path + ".manifest", cfg, args, started);
  out << "wrote " << records.size() << " rows to " << o.out_path << '\n';
  return kOk;
}

struct Summary {
  double mean = 0.0, median = 0.0, p95 = 0.0;
};

Summary summarize(std::vector<double> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += x;
  s.mean = acc / static_cast<double>(v.size());
  const std::size_t n = v.size();
  s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95 = v[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

int cmd_bench(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const std::string started = utc_now();
  if (o.trials < 1) throw UsageError("bench: --trials must be >= 1");
  const SystemConfig cfg = load_config(o);
  std::vector<double> svd, order, esprit, varpro, estimation, total;
  for (int i = 0; i < o.trials; ++i) {
    const auto seed = derive_seed(cfg.seed, {0x62656e6368ULL, static_cast<std::uint64_t>(i)});
    const TrialResult tr = run_trial(cfg, seed);
    const StageTimings& t = tr.rx.timings;
    svd.push_back(t.snapshot_svd);
    order.push_back(t.order);
    esprit.push_back(t.esprit);
    varpro.push_back(t.varpro);
    estimation.push_back(t.estimation);
    total.push_back(t.total());
  }
  std::ostringstream r;
  r << "trials " << o.trials << " refine " << (cfg.refine ? "on" : "off") << '\n';
  r << std::left << std::setw(14) << "stage" << std::setw(14) << "mean_ms" << std::setw(14)
    << "median_ms" << "p95_ms\n";
  auto row = [&](const char* name, const std::vector<double>& v) {
    const Summary s = summarize(v);
    r << std::left << std::setw(14) << name << std::setw(14) << s.mean * 1e3 << std::setw(14)
      << s.median * 1e3 << s.p95 * 1e3 << '\n';
  };
  row("snapshot_svd", svd);
  row("order", order);
  row("esprit", esprit);
  if (cfg.refine) row("varpro", varpro);
  row("estimation", estimation);
  row("total", total);
  out << r.str();
  const std::string manifest = o.out_path.empty() ? "sinoma-bench.manifest" : o.out_path + ".manifest";
  if (!o.out_path.empty()) write_file(o.out_path, r.str());
  write_manifest(manifest, cfg, args, started);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grant-free NOMA receiver simulator with sinusoidal spreading sequences", "sinoma"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "key = value configuration file");
    sub->add_option("--refine", o.refine, "ML refinement of the frequency estimates")
        ->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--criterion", o.criterion, "model-order criterion")
        ->check(CLI::IsMember({"bic", "aic"}));
    sub->add_flag("--noiseless", o.noiseless, "test hook: force sigma^2 = 0");
  };

  auto* simulate = app.add_subcommand("simulate", "generate one dataset file");
  add_common(simulate);
  simulate->add_option("--out", o.out_path, "dataset output path");

  auto* detect = app.add_subcommand("detect", "run the receiver on a saved dataset");
  detect->add_option("dataset", o.dataset_path, "noma-dataset/1 file")->required();
  detect->add_option("--out", o.out_path, "write the report here instead of stdout");
  detect->add_option("--refine", o.refine)->check(CLI::IsMember({"on", "off"}));
  detect->add_option("--criterion", o.criterion)->check(CLI::IsMember({"bic", "aic"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep over one parameter");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", o.axis, "M | tx_power_dbm | p_a")
      ->check(CLI::IsMember({"M", "tx_power_dbm", "p_a"}));
  sweep_cmd->add_option("--values", o.values, "comma-separated values");
  sweep_cmd->add_option("--trials", o.trials, "trials per point");
  sweep_cmd->add_option("--workers", o.workers, "worker threads (default: all cores)");
  sweep_cmd->add_option("--out", o.out_path, "results CSV");
  sweep_cmd->add_option("--timing", o.timing, "off writes mean_runtime_s = 0")
      ->check(CLI::IsMember({"on", "off"}));

  auto* bench = app.add_subcommand("bench", "per-stage receiver timing");
  add_common(bench);
  bench->add_option("--trials", o.trials, "number of trials");
  bench->add_option("--out", o.out_path, "also write the summary here");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*simulate) return cmd_simulate(o, args, out);
    if (*detect) return cmd_detect(o, args, out);
    if (*sweep_cmd) return cmd_sweep(o, args, out);
    if (*bench) return cmd_bench(o, args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kInputError;
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidInput& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kInputError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kInputError;
}

}  // namespace sinoma::cli
