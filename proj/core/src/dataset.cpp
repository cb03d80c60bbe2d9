#include "sinoma/dataset.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace sinoma {

using nlohmann::json;

namespace {

json complex_pair(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble read_pair(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw DatasetError("expected [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json config_json(const SystemConfig& c) {
  json j;
  j["N"] = c.N;
  j["M"] = c.M;
  j["J"] = c.J;
  j["L"] = c.L;
  j["p_a"] = c.p_a;
  j["tx_power_dbm"] = c.tx_power_dbm;
  j["cell_radius_m"] = c.cell_radius_m;
  j["min_dist_m"] = c.min_dist_m;
  j["noise_psd_dbm_hz"] = c.noise_psd_dbm_hz;
  j["bandwidth_hz"] = c.bandwidth_hz;
  j["l"] = c.snapshot_length();
  j["criterion"] = std::string(to_string(c.criterion));
  j["refine"] = c.refine;
  j["power_mapping"] = std::string(to_string(c.power_mapping));
  j["seed"] = c.seed;
  j["fixed_active"] = c.fixed_active;
  j["noiseless"] = c.noiseless;
  j["k_max"] = c.order_scan_limit();
  j["reliability"] = std::string(to_string(c.reliability));
  if (c.lambda) j["lambda"] = *c.lambda;
  else j["lambda"] = "auto";
  return j;
}

SystemConfig config_from_json(const json& j) {
  if (!j.is_object()) throw DatasetError("config must be an object");
  SystemConfig c;
  for (const auto& [key, value] : j.items()) {
    std::string text;
    if (value.is_string()) text = value.get<std::string>();
    else if (value.is_boolean()) text = value.get<bool>() ? "true" : "false";
    else if (value.is_number()) text = value.dump();
    else throw DatasetError("config." + key + ": unsupported value");
    try {
      set_config_field(c, key, text);
    } catch (const InvalidInput& e) {
      throw DatasetError(std::string("config: ") + e.what());
    }
  }
  try {
    c.validate();
  } catch (const InvalidInput& e) {
    throw DatasetError(e.what());
  }
  return c;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& ds) {
  json doc;
  doc["format"] = std::string(kDatasetFormat);
  doc["config"] = config_json(ds.config);

  json truth;
  truth["distances_km"] = ds.truth.distances_km;
  truth["variances"] = ds.truth.variances;
  truth["active_set"] = ds.truth.active_set;
  json channels = json::array();
  for (cdouble h : ds.truth.channels) channels.push_back(complex_pair(h));
  truth["channels"] = std::move(channels);
  truth["symbols"] = ds.truth.symbols;
  doc["truth"] = std::move(truth);

  const ComplexMatrix& Y = ds.signal.Y;
  json data = json::array();
  for (Eigen::Index m = 0; m < Y.rows(); ++m) {
    for (Eigen::Index j = 0; j < Y.cols(); ++j) data.push_back(complex_pair(Y(m, j)));
  }
  json signal;
  signal["noise_variance"] = ds.signal.noise_variance;
  signal["Y"] = {{"rows", Y.rows()}, {"cols", Y.cols()}, {"order", "row-major"},
                 {"data", std::move(data)}};
  doc["signal"] = std::move(signal);

  out << doc.dump(1) << '\n';
}

Dataset read_dataset(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DatasetError(std::string("not a JSON document: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format")) throw DatasetError("missing format tag");
    if (doc.at("format") != std::string(kDatasetFormat)) {
      throw DatasetError("unsupported format '" + doc.at("format").dump() + "', expected " +
                         std::string(kDatasetFormat));
    }
    Dataset ds;
    ds.config = config_from_json(doc.at("config"));

    const json& t = doc.at("truth");
    ds.truth.distances_km = t.at("distances_km").get<std::vector<double>>();
    ds.truth.variances = t.at("variances").get<std::vector<double>>();
    ds.truth.active_set = t.at("active_set").get<std::vector<int>>();
    for (const json& h : t.at("channels")) ds.truth.channels.push_back(read_pair(h));
    ds.truth.symbols = t.at("symbols").get<std::vector<std::vector<int>>>();

    const auto N = static_cast<std::size_t>(ds.config.N);
    const std::size_t K = ds.truth.active_set.size();
    if (ds.truth.distances_km.size() != N || ds.truth.variances.size() != N) {
      throw DatasetError("truth: per-user vectors must have N entries");
    }
    if (ds.truth.channels.size() != K || ds.truth.symbols.size() != K) {
      throw DatasetError("truth: channels/symbols must match the active set");
    }
    for (std::size_t k = 0; k < K; ++k) {
      const int n = ds.truth.active_set[k];
      if (n < 0 || n >= ds.config.N || (k > 0 && n <= ds.truth.active_set[k - 1])) {
        throw DatasetError("truth: active set must be sorted, distinct, inside [0, N)");
      }
      const auto& q = ds.truth.symbols[k];
      if (static_cast<int>(q.size()) != ds.config.J || q.front() != 0) {
        throw DatasetError("truth: each symbol row needs J entries starting with the pilot 0");
      }
      for (int s : q) {
        if (s < 0 || s >= ds.config.L) throw DatasetError("truth: symbol outside {0..L-1}");
      }
    }

    const json& sig = doc.at("signal");
    ds.signal.noise_variance = sig.at("noise_variance").get<double>();
    const json& y = sig.at("Y");
    const auto rows = y.at("rows").get<Eigen::Index>();
    const auto cols = y.at("cols").get<Eigen::Index>();
    if (y.contains("order") && y.at("order") != "row-major") {
      throw DatasetError("signal.Y: only row-major order is supported");
    }
    if (rows != ds.config.M || cols != ds.config.J) {
      throw DatasetError("signal.Y: dims must be M x J");
    }
    const json& data = y.at("data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw DatasetError("signal.Y: expected rows*cols entries");
    }
    ds.signal.Y.resize(rows, cols);
    for (Eigen::Index m = 0; m < rows; ++m) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        ds.signal.Y(m, j) = read_pair(data[static_cast<std::size_t>(m * cols + j)]);
      }
    }
    if (!all_finite(ds.signal.Y)) throw DatasetError("signal.Y: non-finite entry");
    return ds;
  } catch (const json::exception& e) {
    throw DatasetError(std::string("malformed dataset: ") + e.what());
  }
}

}  // namespace sinoma
