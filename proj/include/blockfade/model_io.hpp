#pragma once

#include <string>

#include "json.hpp"

#include "blockfade/common.hpp"
#include "blockfade/spectra.hpp"

namespace blockfade {

// Malformed model file; `where` is a byte offset or a JSON pointer.
class ModelParseError : public Error {
 public:
  ModelParseError(const std::string& what, std::string where)
      : Error(what + " (at " + where + ")"), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Model kinds: flat, scalar_gauss_markov, block_gauss_markov, piecewise,
// correlation, constant_within_block, s_theta, worst_case, two_level,
// explicit_grid, example5. Complex values are a number, [re, im] or
// {"re": .., "im": ..}.
SpectralModel model_from_json(const nlohmann::json& j);
SpectralModel parse_model(const std::string& text);
SpectralModel load_model(const std::string& path);

}  // namespace blockfade
