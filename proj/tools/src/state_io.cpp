#include "state_io.hpp"

#include <fstream>

namespace entmeas::cli {

using nlohmann::json;

LoadedState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix"))
    throw ParseError(path + ": object with \"dims\" and \"matrix\" keys required");

  std::vector<std::size_t> dims;
  try {
    for (const auto& d : doc.at("dims")) {
      const auto v = d.get<long long>();
      if (v < 1) throw ParseError(path + ": dims entries must be positive");
      dims.push_back(static_cast<std::size_t>(v));
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": bad \"dims\": " + e.what());
  }
  if (dims.empty()) throw ParseError(path + ": \"dims\" must be nonempty");

  const std::size_t n = product_of(dims);
  ComplexMatrix m(n, n);
  try {
    const auto& rows = doc.at("matrix");
    if (!rows.is_array() || rows.size() != n)
      throw ParseError(path + ": \"matrix\" must have " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& row = rows.at(i);
      if (!row.is_array() || row.size() != n)
        throw ParseError(path + ": row " + std::to_string(i) + " must have " +
                         std::to_string(n) + " entries");
      for (std::size_t j = 0; j < n; ++j) {
        const auto& cell = row.at(j);
        if (!cell.is_array() || cell.size() != 2)
          throw ParseError(path + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                           ") must be an [re, im] pair");
        m(i, j) = Complex{cell.at(0).get<double>(), cell.at(1).get<double>()};
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": bad \"matrix\": " + e.what());
  }

  LoadedState out{DensityMatrix(m, dims), std::nullopt};
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) throw ParseError(path + ": \"label\" must be a string");
    out.label = doc.at("label").get<std::string>();
  }
  return out;
}

json state_to_json(const DensityMatrix& rho, const std::optional<std::string>& label) {
  json doc;
  doc["dims"] = rho.dims();
  json rows = json::array();
  const std::size_t n = rho.dim();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j)
      row.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  if (label) doc["label"] = *label;
  return doc;
}

void save_state(const std::string& path, const DensityMatrix& rho,
                const std::optional<std::string>& label) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << state_to_json(rho, label).dump(2) << "\n";
}

json ensemble_to_json(const ProductEnsemble& e) {
  json terms = json::array();
  for (const EnsembleTerm& t : e.terms) {
    json factors = json::array();
    for (const CVec& f : t.factors) {
      json vec = json::array();
      for (const Complex& c : f) vec.push_back({c.real(), c.imag()});
      factors.push_back(std::move(vec));
    }
    terms.push_back({{"weight", t.weight}, {"groups", t.groups}, {"factors", std::move(factors)}});
  }
  return json{{"dims", e.dims}, {"terms", std::move(terms)}};
}

json result_to_json(const MeasureResult& r) {
  json doc;
  doc["value"] = r.value;
  doc["gap"] = r.gap;
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  doc["distance"] = r.distance_kind == DistanceKind::RelativeEntropy ? "relative_entropy" : "bures";
  doc["heuristic_gap"] = r.heuristic_gap;
  doc["minimizer"] = ensemble_to_json(r.minimizer);
  doc["realized_minimizer"] = state_to_json(r.realized_minimizer, std::nullopt);
  return doc;
}

}  // namespace entmeas::cli
