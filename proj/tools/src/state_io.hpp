#ifndef ENTMEAS_TOOLS_STATE_IO_HPP
#define ENTMEAS_TOOLS_STATE_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "entmeas/ree_solver.hpp"

namespace entmeas::cli {

// File-level problems (unreadable, bad JSON, wrong shape). Distinct from the
// state validation errors the core types throw, so the two map to different
// exit codes.
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("ParseError: " + what) {}
};

struct LoadedState {
  DensityMatrix state;
  std::optional<std::string> label;
};

// State file format: UTF-8 JSON with keys "dims" (array of positive
// integers), "matrix" (row-major nested array of [re, im] pairs), and an
// optional "label".
LoadedState load_state(const std::string& path);

nlohmann::json state_to_json(const DensityMatrix& rho, const std::optional<std::string>& label);
void save_state(const std::string& path, const DensityMatrix& rho,
                const std::optional<std::string>& label);

nlohmann::json ensemble_to_json(const ProductEnsemble& e);
nlohmann::json result_to_json(const MeasureResult& r);

}  // namespace entmeas::cli

#endif
