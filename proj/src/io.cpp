#include "snw/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace snw {
namespace {

Json vector_to_json(const ComplexVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
  return arr;
}

ComplexVector vector_from_json(const Json& arr) {
  if (!arr.is_array()) throw Error(ErrorCode::Parse, "frame vector must be an array");
  ComplexVector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& c = arr[i];
    if (!c.is_object() || !c.contains("re") || !c.contains("im") || !c["re"].is_number() ||
        !c["im"].is_number()) {
      throw Error(ErrorCode::Parse, "frame vector entries must be {\"re\": x, \"im\": y}");
    }
    v(static_cast<Eigen::Index>(i)) = cplx(c["re"].get<double>(), c["im"].get<double>());
  }
  return v;
}

std::vector<double> flat_numbers(const Json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  for (const auto& e : j) {
    if (e.is_array()) {
      for (const auto& x : e) {
        if (!x.is_number()) throw Error(ErrorCode::Parse, std::string("non-numeric entry in '") + field + "'");
        out.push_back(x.get<double>());
      }
    } else if (e.is_number()) {
      out.push_back(e.get<double>());
    } else {
      throw Error(ErrorCode::Parse, std::string("non-numeric entry in '") + field + "'");
    }
  }
  return out;
}

int require_int(const Json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    throw Error(ErrorCode::Parse, std::string("missing integer field '") + field + "'");
  }
  return j[field].get<int>();
}

}  // namespace

Json frame_to_json(const SicPovm& sic) {
  Json j;
  j["kind"] = "sic";
  j["d"] = sic.d;
  Json vecs = Json::array();
  for (const auto& v : sic.vectors) vecs.push_back(vector_to_json(v));
  j["vectors"] = std::move(vecs);
  return j;
}

Json frame_to_json(const MubCollection& mubs) {
  Json j;
  j["kind"] = "mub";
  j["d"] = mubs.d;
  Json vecs = Json::array();
  Json groups = Json::array();
  int index = 0;
  for (const auto& b : mubs.bases) {
    Json group = Json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      vecs.push_back(vector_to_json(b.col(c)));
      group.push_back(index++);
    }
    groups.push_back(std::move(group));
  }
  j["vectors"] = std::move(vecs);
  j["bases"] = std::move(groups);
  return j;
}

Json frame_to_json(const Frame& frame) {
  return std::visit([](const auto& f) { return frame_to_json(f); }, frame);
}

Frame frame_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorCode::Parse, "frame file needs a string field 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  const int d = require_int(j, "d");
  if (d < 1) throw Error(ErrorCode::Parse, "frame dimension must be positive");
  if (!j.contains("vectors") || !j["vectors"].is_array()) {
    throw Error(ErrorCode::Parse, "frame file needs an array field 'vectors'");
  }
  std::vector<ComplexVector> vectors;
  for (const auto& v : j["vectors"]) {
    vectors.push_back(vector_from_json(v));
    if (vectors.back().size() != d) throw Error(ErrorCode::Parse, "frame vector length differs from d");
  }

  if (kind == "sic") return sic_from_vectors(std::move(vectors));
  if (kind != "mub") throw Error(ErrorCode::Parse, "unknown frame kind '" + kind + "'");

  std::vector<std::vector<int>> groups;
  if (j.contains("bases")) {
    if (!j["bases"].is_array()) throw Error(ErrorCode::Parse, "'bases' must be an array of index arrays");
    for (const auto& g : j["bases"]) {
      std::vector<int> idx;
      for (const auto& i : g) {
        if (!i.is_number_integer()) throw Error(ErrorCode::Parse, "'bases' entries must be integers");
        idx.push_back(i.get<int>());
      }
      groups.push_back(std::move(idx));
    }
  } else {
    if (vectors.size() % static_cast<std::size_t>(d) != 0) {
      throw Error(ErrorCode::Parse, "MUB vector count must be a multiple of d");
    }
    for (std::size_t g = 0; g < vectors.size() / d; ++g) {
      std::vector<int> idx;
      for (int i = 0; i < d; ++i) idx.push_back(static_cast<int>(g * d + i));
      groups.push_back(std::move(idx));
    }
  }
  std::vector<ComplexMatrix> bases;
  for (const auto& g : groups) {
    if (g.size() != static_cast<std::size_t>(d)) throw Error(ErrorCode::Parse, "each MUB basis needs d vectors");
    ComplexMatrix b(d, d);
    for (int c = 0; c < d; ++c) {
      if (g[c] < 0 || static_cast<std::size_t>(g[c]) >= vectors.size()) {
        throw Error(ErrorCode::Parse, "'bases' index out of range");
      }
      b.col(c) = vectors[g[c]];
    }
    bases.push_back(std::move(b));
  }
  return mub_from_bases(std::move(bases));
}

Json complex_matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
  const int rows = require_int(j, "rows");
  const int cols = require_int(j, "cols");
  const auto re = flat_numbers(j.at("re"), "re");
  const auto im = flat_numbers(j.at("im"), "im");
  if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows) * cols || im.size() != re.size()) {
    throw Error(ErrorCode::Parse, "matrix entry count does not match rows*cols");
  }
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cplx(re[r * cols + c], im[r * cols + c]);
  return m;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error(ErrorCode::Parse, "real matrix must be nested rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RealMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      throw Error(ErrorCode::Parse, "ragged real matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw Error(ErrorCode::Parse, "non-numeric matrix entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Json matrix_file_to_json(const MatrixFile& file) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < file.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < file.matrix.cols(); ++c) {
      re.push_back(file.matrix(r, c).real());
      im.push_back(file.matrix(r, c).imag());
    }
  }
  Json j;
  j["d"] = file.d;
  j["space"] = file.space == MatrixSpace::Bipartite ? "bipartite" : "single";
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

MatrixFile matrix_file_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "matrix file must be a JSON object");
  MatrixFile file;
  file.d = require_int(j, "d");
  if (file.d < 1) throw Error(ErrorCode::Parse, "'d' must be positive");
  const std::string space = j.value("space", std::string("bipartite"));
  if (space == "bipartite") {
    file.space = MatrixSpace::Bipartite;
  } else if (space == "single") {
    file.space = MatrixSpace::Single;
  } else {
    throw Error(ErrorCode::Parse, "'space' must be \"single\" or \"bipartite\"");
  }
  if (!j.contains("re")) throw Error(ErrorCode::Parse, "matrix file needs field 're'");
  const auto re = flat_numbers(j["re"], "re");
  const auto im = j.contains("im") ? flat_numbers(j["im"], "im") : std::vector<double>(re.size(), 0.0);
  const std::size_t n = file.space == MatrixSpace::Bipartite ? static_cast<std::size_t>(file.d) * file.d
                                                             : static_cast<std::size_t>(file.d);
  if (re.size() != n * n || im.size() != n * n) {
    throw Error(ErrorCode::Parse, "expected " + std::to_string(n * n) + " entries in 're' and 'im'");
  }
  file.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      file.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cplx(re[r * n + c], im[r * n + c]);
  return file;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace snw
