#pragma once

#include <iosfwd>
#include <string_view>

#include "sinoma/config.hpp"
#include "sinoma/errors.hpp"
#include "sinoma/scenario.hpp"

namespace sinoma {

/// Format tag written into, and required from, every dataset file.
inline constexpr std::string_view kDatasetFormat = "noma-dataset/1";

/// Malformed, truncated or version-mismatched dataset.
class DatasetError : public Error {
 public:
  using Error::Error;
};

struct Dataset {
  SystemConfig config;
  GroundTruth truth;
  ReceivedSignal signal;
};

/// JSON document: {"format", "config", "truth", "signal"}. Y is stored as
/// explicit dims plus row-major [re, im] pairs. Doubles round-trip exactly,
/// and the same dataset always serializes to the same bytes.
void write_dataset(std::ostream& out, const Dataset& ds);

Dataset read_dataset(std::istream& in);

}  // namespace sinoma
