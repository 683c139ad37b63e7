#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "snw/frames.hpp"
#include "snw/matcore.hpp"

namespace snw {

using Json = nlohmann::ordered_json;
using Frame = std::variant<SicPovm, MubCollection>;

// Frame file: {"kind": "sic"|"mub", "d": int,
//              "vectors": [[{"re": x, "im": y}, ...], ...],
//              "bases": [[vector indices], ...]}   (mub only, optional)
Json frame_to_json(const SicPovm& sic);
Json frame_to_json(const MubCollection& mubs);
Json frame_to_json(const Frame& frame);
/// Verifies before accepting; throws Parse on schema errors and
/// OverlapViolation when the vectors do not form the declared frame.
Frame frame_from_json(const Json& j);

Json complex_matrix_to_json(const ComplexMatrix& m);  // {"rows","cols","re","im"}, row-major
ComplexMatrix complex_matrix_from_json(const Json& j);
Json real_matrix_to_json(const RealMatrix& m);        // nested rows
RealMatrix real_matrix_from_json(const Json& j);

enum class MatrixSpace { Single, Bipartite };

// MatrixFile: {"d": int, "space": "single"|"bipartite", "re": [...], "im": [...]}
// re/im are row-major; flat arrays or arrays of rows are both accepted.
struct MatrixFile {
  int d = 0;  // local dimension for bipartite inputs
  MatrixSpace space = MatrixSpace::Single;
  ComplexMatrix matrix;
};

Json matrix_file_to_json(const MatrixFile& file);
MatrixFile matrix_file_from_json(const Json& j);

/// Throws Io when the file cannot be opened and Parse on malformed JSON.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace snw
