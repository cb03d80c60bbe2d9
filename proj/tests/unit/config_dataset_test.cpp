#include <sstream>

#include <gtest/gtest.h>

#include "sinoma/config.hpp"
#include "sinoma/dataset.hpp"
#include "sinoma/errors.hpp"
#include "sinoma/rng.hpp"
#include "sinoma/scenario.hpp"

namespace sinoma {
namespace {

TEST(Config, DefaultsValidate) {
  const SystemConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.snapshot_length(), 50);
  EXPECT_EQ(cfg.order_scan_limit(), 49);
}

TEST(Config, SnapshotLengthTableAndFit) {
  const int table[][2] = {{32, 20}, {48, 40}, {64, 50}, {80, 60}, {96, 78}, {112, 90}};
  for (const auto& e : table) EXPECT_EQ(default_snapshot_length(e[0]), e[1]);
  for (int M = 4; M < 200; ++M) {
    const int l = default_snapshot_length(M);
    EXPECT_GT(l, M / 2);
    EXPECT_LT(l, M);
  }
  EXPECT_EQ(default_snapshot_length(100), 78);
}

TEST(Config, ScanLimit) {
  EXPECT_EQ(default_k_max(128, 50), 49);
  EXPECT_EQ(default_k_max(20, 50), 20);
  EXPECT_EQ(default_k_max(21, 50), 22);
}

TEST(Config, InvariantsRejected) {
  auto bad = [](auto mutate) {
    SystemConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), InvalidInput);
  };
  bad([](SystemConfig& c) { c.l = 64; });
  bad([](SystemConfig& c) { c.l = 1; });
  bad([](SystemConfig& c) { c.J = 1; });
  bad([](SystemConfig& c) { c.L = 1; });
  bad([](SystemConfig& c) { c.p_a = 1.5; });
  bad([](SystemConfig& c) { c.min_dist_m = 300; });
  bad([](SystemConfig& c) { c.M = 128; });
  bad([](SystemConfig& c) { c.bandwidth_hz = 0; });
  bad([](SystemConfig& c) { c.lambda = -1.0; });
}

TEST(ParseConfig, KeysCommentsAndRoundTrip) {
  const SystemConfig c = parse_config_string(
      "# cell\nM = 96\n\ntx_power_dbm = 10.5  # trailing\ncriterion = aic\nrefine = on\n"
      "power_mapping = per_element\nseed = 18446744073709551615\nreliability = log\n");
  EXPECT_EQ(c.M, 96);
  EXPECT_EQ(c.snapshot_length(), 78);
  EXPECT_EQ(c.tx_power_dbm, 10.5);
  EXPECT_EQ(c.criterion, Criterion::AIC);
  EXPECT_TRUE(c.refine);
  EXPECT_EQ(c.power_mapping, PowerMapping::PerElement);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.reliability, ReliabilityRule::LogDomain);

  const SystemConfig back = parse_config_string(format_config(c));
  EXPECT_EQ(format_config(back), format_config(c));
  EXPECT_EQ(back.l, 78);
}

TEST(ParseConfig, ErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) {
    try {
      parse_config_string(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("M = 64\nbogus = 1\n"), 2);
  EXPECT_EQ(line_of("M = 64\n\nM = 32\n"), 3);
  EXPECT_EQ(line_of("# x\nJ = nine\n"), 2);
  EXPECT_EQ(line_of("N = 128\nM\n"), 2);
  EXPECT_EQ(line_of("p_a = \n"), 1);
  EXPECT_EQ(line_of("criterion = mdl\n"), 1);
}

TEST(Rng, DerivedSeedsDistinctAndStable) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
  Rng a = make_rng(5, Stream::Noise), b = make_rng(5, Stream::Activity);
  EXPECT_NE(a(), b());
  Rng c = make_rng(5, Stream::Noise), d = make_rng(5, Stream::Noise);
  EXPECT_EQ(c(), d());
}

Dataset sample_dataset() {
  SystemConfig cfg;
  cfg.p_a = 0.2;
  Scenario s = generate_scenario(cfg, 123);
  return Dataset{cfg, std::move(s.truth), std::move(s.signal)};
}

TEST(Dataset, RoundTripIsExactAndDeterministic) {
  const Dataset ds = sample_dataset();
  std::ostringstream a, b;
  write_dataset(a, ds);
  write_dataset(b, ds);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("noma-dataset/1"), std::string::npos);
  std::istringstream in(a.str());
  const Dataset back = read_dataset(in);
  EXPECT_TRUE(back.truth == ds.truth);
  EXPECT_EQ(back.signal.Y, ds.signal.Y);
  EXPECT_EQ(back.signal.noise_variance, ds.signal.noise_variance);
  EXPECT_EQ(format_config(back.config), format_config(ds.config));
  std::ostringstream again;
  write_dataset(again, back);
  EXPECT_EQ(again.str(), a.str());
}

TEST(Dataset, EmptyActivityIsValid) {
  SystemConfig cfg;
  cfg.p_a = 0.0;
  Scenario s = generate_scenario(cfg, 1);
  std::ostringstream out;
  write_dataset(out, Dataset{cfg, s.truth, s.signal});
  std::istringstream in(out.str());
  EXPECT_TRUE(read_dataset(in).truth.active_set.empty());
}

TEST(Dataset, RejectsDamage) {
  std::ostringstream out;
  write_dataset(out, sample_dataset());
  const std::string good = out.str();
  auto rejects = [](std::string text) {
    std::istringstream in(text);
    EXPECT_THROW(read_dataset(in), DatasetError);
  };
  rejects(good.substr(0, good.size() / 2));
  rejects("");
  rejects("[]");
  std::string v = good;
  v.replace(v.find("noma-dataset/1"), 14, "noma-dataset/2");
  rejects(v);
  std::string dims = good;
  const auto pos = dims.find("\"rows\": 64");
  ASSERT_NE(pos, std::string::npos);
  dims.replace(pos, 10, "\"rows\": 63");
  rejects(dims);
}

}  // namespace
}  // namespace sinoma
