#include "curvfun/body_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace curvfun {
namespace {

using nlohmann::json;

Mat matrix_field(const json& j, int dim, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw DomainError(std::string("field '") + name + "' must be a " + std::to_string(dim) + "x" +
                      std::to_string(dim) + " array");
  }
  Mat M = Mat::Identity();
  for (int r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw DomainError(std::string("field '") + name + "' row " + std::to_string(r) + " has wrong length");
    }
    for (int c = 0; c < dim; ++c) M(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return M;
}

Vec vector_field(const json& j, int dim, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw DomainError(std::string("field '") + name + "' must have " + std::to_string(dim) + " entries");
  }
  Vec v = Vec::Zero();
  for (int i = 0; i < dim; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

SupportBody body_from_json(const json& spec) {
  static const std::set<std::string> known = {"dim",  "type",    "radius",    "matrix", "semi_axes", "rotation",
                                              "mode", "epsilon", "translate", "id",     "provenance"};
  if (!spec.is_object()) throw DomainError("body specification must be a JSON object");
  for (const auto& [key, value] : spec.items()) {
    if (!known.contains(key)) throw DomainError("unknown body field '" + key + "'");
  }
  if (!spec.contains("dim") || !spec.contains("type")) throw DomainError("body specification needs 'dim' and 'type'");
  try {
    const int dim = spec.at("dim").get<int>();
    if (dim != 2 && dim != 3) throw DomainError("dim must be 2 or 3");
    const std::string type = spec.at("type").get<std::string>();
    std::optional<Mat> rotation;
    if (spec.contains("rotation")) rotation = matrix_field(spec.at("rotation"), dim, "rotation");

    std::optional<SupportBody> body;
    if (type == "ball") {
      body = make_ball(dim, spec.value("radius", 1.0));
      if (rotation) body = transform(*body, *rotation);
    } else if (type == "ellipsoid") {
      if (spec.contains("matrix") == spec.contains("semi_axes")) {
        throw DomainError("ellipsoid needs exactly one of 'matrix' or 'semi_axes'");
      }
      if (spec.contains("matrix")) {
        Mat M = matrix_field(spec.at("matrix"), dim, "matrix");
        if (dim == 2) M(2, 2) = 0.0;
        body = make_ellipsoid(dim, M);
        if (rotation) body = transform(*body, *rotation);
      } else {
        body = make_ellipsoid_axes(dim, spec.at("semi_axes").get<std::vector<double>>(), rotation);
      }
    } else if (type == "perturbed_ball") {
      const int mode = spec.value("mode", dim == 2 ? 3 : 1);
      body = make_perturbed_ball(dim, mode, spec.value("epsilon", 0.0));
      if (rotation) body = transform(*body, *rotation);
    } else {
      throw DomainError("unknown body type '" + type + "'");
    }
    if (spec.contains("translate")) body = translate(*body, vector_field(spec.at("translate"), dim, "translate"));
    if (spec.contains("id")) body = body->with_id(spec.at("id").get<std::string>());
    return *body;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed body specification: ") + e.what());
  }
}

SupportBody load_body_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open body file '" + path.string() + "'");
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw DomainError("body file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  SupportBody body = body_from_json(spec);
  if (!spec.contains("id")) body = body.with_id(path.stem().string());
  return body;
}

std::vector<CorpusEntry> canonical_corpus() {
  const std::string prov = "canonical corpus (curvfun corpus-gen)";
  return {
      {"ball2.json", {{"id", "ball2"}, {"dim", 2}, {"type", "ball"}, {"radius", 1.0}, {"provenance", prov}}},
      {"ball3.json", {{"id", "ball3"}, {"dim", 3}, {"type", "ball"}, {"radius", 1.0}, {"provenance", prov}}},
      {"ellipse_2_1.json",
       {{"id", "ellipse_2_1"}, {"dim", 2}, {"type", "ellipsoid"}, {"semi_axes", {2.0, 1.0}}, {"provenance", prov}}},
      {"ellipse_3_1.json",
       {{"id", "ellipse_3_1"}, {"dim", 2}, {"type", "ellipsoid"}, {"semi_axes", {3.0, 1.0}}, {"provenance", prov}}},
      {"ellipsoid_2_1_1.json",
       {{"id", "ellipsoid_2_1_1"},
        {"dim", 3},
        {"type", "ellipsoid"},
        {"semi_axes", {2.0, 1.0, 1.0}},
        {"provenance", prov}}},
      {"perturbed2_eps0.02.json",
       {{"id", "perturbed2_eps0.02"},
        {"dim", 2},
        {"type", "perturbed_ball"},
        {"mode", 3},
        {"epsilon", 0.02},
        {"provenance", prov}}},
      {"perturbed2_eps0.05.json",
       {{"id", "perturbed2_eps0.05"},
        {"dim", 2},
        {"type", "perturbed_ball"},
        {"mode", 3},
        {"epsilon", 0.05},
        {"provenance", prov}}},
      {"perturbed3_eps0.1.json",
       {{"id", "perturbed3_eps0.1"},
        {"dim", 3},
        {"type", "perturbed_ball"},
        {"mode", 1},
        {"epsilon", 0.1},
        {"provenance", prov}}},
  };
}

std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& entry : canonical_corpus()) {
    const auto path = dir / entry.file_name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write '" + path.string() + "'");
    os << entry.spec.dump(2) << '\n';
    out.push_back(path);
  }
  return out;
}

std::vector<SupportBody> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DomainError("corpus directory '" + dir.string() + "' not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SupportBody> bodies;
  bodies.reserve(files.size());
  for (const auto& f : files) bodies.push_back(load_body_file(f));
  return bodies;
}

}  // namespace curvfun
