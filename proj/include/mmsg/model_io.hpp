// Model instance serialization: theta.csv / pi.csv / x.csv plus a JSON
// manifest with dimensions, seed, scenario, and key parameters. Sample and
// component indices in the manifest are 1-based.
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmsg/csv.hpp"
#include "mmsg/model.hpp"

namespace mmsg {

struct SavedModel {
  Matrix x;
  Matrix centres;
  MembershipMatrix membership;
  std::vector<Index> pure_indices;
  nlohmann::json manifest;
};

inline void save_model_dir(const std::string& dir, const Matrix& x, const ModelInstance& model,
                           const nlohmann::json& manifest_extra = nlohmann::json::object()) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoErrorException("cannot create directory: " + dir);

  write_matrix_csv(dir + "/x.csv", x);
  write_matrix_csv(dir + "/theta.csv", model.centres);
  write_matrix_csv(dir + "/pi.csv", model.membership.matrix());

  nlohmann::json manifest = manifest_extra;
  manifest["n"] = model.n();
  manifest["p"] = model.p();
  manifest["K"] = model.k();
  manifest["delta"] = model.delta;
  manifest["eta"] = model.eta;
  std::vector<Index> pure_1based;
  pure_1based.reserve(model.pure_indices.size());
  for (Index i : model.pure_indices) pure_1based.push_back(i + 1);
  manifest["pure_indices"] = pure_1based;

  std::ofstream out(dir + "/manifest.json");
  if (!out) throw IoErrorException("cannot open for writing: " + dir + "/manifest.json");
  out << manifest.dump(2) << "\n";
}

inline SavedModel load_model_dir(const std::string& dir) {
  SavedModel saved{Matrix(), Matrix(), MembershipMatrix(Matrix::Ones(1, 1)), {}, {}};
  saved.x = read_matrix_csv(dir + "/x.csv");
  saved.centres = read_matrix_csv(dir + "/theta.csv");
  saved.membership = MembershipMatrix(read_matrix_csv(dir + "/pi.csv"));

  std::ifstream in(dir + "/manifest.json");
  if (!in) throw IoErrorException("cannot open for reading: " + dir + "/manifest.json");
  try {
    in >> saved.manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseErrorException(dir + "/manifest.json: " + e.what());
  }
  if (saved.manifest.contains("pure_indices"))
    for (const auto& idx : saved.manifest.at("pure_indices"))
      saved.pure_indices.push_back(idx.get<Index>() - 1);
  return saved;
}

}  // namespace mmsg
