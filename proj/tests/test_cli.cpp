#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "snw/certify.hpp"
#include "snw/cli.hpp"
#include "snw/io.hpp"
#include "test_support.hpp"

using namespace snw;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("snwit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    ::setenv(cli::kCacheEnv, (p / "cache").c_str(), 1);
    return p;
  }();
  return dir;
}

fs::path write_state(const std::string& name, const ComplexMatrix& m, int d) {
  const fs::path path = scratch() / name;
  write_json_file(path, matrix_file_to_json(MatrixFile{d, MatrixSpace::Bipartite, m}));
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_args(std::vector<const char*> args, std::string& out_text, std::string& err_text) {
  args.insert(args.begin(), "snwit");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  out_text = out.str();
  err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("frames command") {
  std::ostringstream out;
  std::ostringstream err;
  const fs::path path = scratch() / "mub3.json";
  CHECK(cli::cmd_frames({"mub", 3, 1, 64, path}, out, err) == cli::kExitOk);
  CHECK(out.str().find("verification passed") != std::string::npos);
  const Frame f = frame_from_json(read_json_file(path));
  const auto& m = std::get<MubCollection>(f);
  CHECK(m.size() == 4);
  const MubCollection ref = mub_prime(3);
  for (int a = 0; a < 4; ++a) CHECK(testing::max_abs(m.bases[a] - ref.bases[a]) == 0.0);

  std::ostringstream o2;
  std::ostringstream e2;
  CHECK(cli::cmd_frames({"mub", 4, 1, 64, scratch() / "mub4.json"}, o2, e2) == cli::kExitConstruction);
  CHECK(e2.str().find("NotPrime") != std::string::npos);

  std::ostringstream o3;
  std::ostringstream e3;
  CHECK(cli::cmd_frames({"sic", 2, 1, 64, "/nonexistent-dir/sic.json"}, o3, e3) == cli::kExitIo);

  std::ostringstream o4;
  std::ostringstream e4;
  CHECK(cli::cmd_frames({"sic", 2, 1, 64, scratch() / "sic2.json"}, o4, e4) == cli::kExitOk);
  CHECK(std::get<SicPovm>(frame_from_json(read_json_file(scratch() / "sic2.json"))).size() == 4);
}

TEST_CASE("certify command") {
  const fs::path phi = write_state("phi3.json", max_entangled_state(3).matrix(), 3);
  const fs::path prod = write_state("prod3.json", PureStateVector::basis(9, 4).projector(), 3);

  cli::CertifyOptions opts;
  opts.state = phi;
  opts.seeds = 2;
  opts.distance_samples = 20;
  opts.out = scratch() / "report_phi.json";
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cli::cmd_certify(opts, out, err) == cli::kExitOk);
  CHECK(out.str().find("SN \xE2\x89\xA5 3\n") != std::string::npos);
  const Json report = read_json_file(*opts.out);
  CHECK(report["sn_lower_bound"] == 3);
  CHECK(report["strategy"]["frames"] == Json::array({"sic", "mub"}));
  CHECK(report["distance_bounds"].size() == 2);
  CHECK(report["distance_bounds"][0]["upper_sampled"].is_number());

  opts.state = prod;
  opts.out.reset();
  std::ostringstream out2;
  std::ostringstream err2;
  REQUIRE(cli::cmd_certify(opts, out2, err2) == cli::kExitOk);
  CHECK(out2.str().find("\"sn_lower_bound\": 1") != std::string::npos);
  CHECK(out2.str().find("SN \xE2\x89\xA5 1\n") != std::string::npos);

  SUBCASE("invalid state names the broken invariant") {
    cli::CertifyOptions bad = opts;
    bad.state = write_state("trace.json", 0.9 * max_entangled_state(2).matrix(), 2);
    std::ostringstream o;
    std::ostringstream e;
    CHECK(cli::cmd_certify(bad, o, e) == cli::kExitValidation);
    CHECK(e.str().find("trace") != std::string::npos);
  }
  SUBCASE("malformed JSON") {
    const fs::path junk = scratch() / "junk.json";
    write_text_file(junk, "{\"d\": 2, \"re\": [1, 2");
    cli::CertifyOptions bad = opts;
    bad.state = junk;
    std::ostringstream o;
    std::ostringstream e;
    CHECK(cli::cmd_certify(bad, o, e) == cli::kExitIo);
    bad.state = scratch() / "missing.json";
    CHECK(cli::cmd_certify(bad, o, e) == cli::kExitIo);
  }
  SUBCASE("no frames available") {
    cli::CertifyOptions bad = opts;
    bad.state = write_state("mixed9.json", identity(81) / 81.0, 9);
    std::ostringstream o;
    std::ostringstream e;
    CHECK(cli::cmd_certify(bad, o, e) == cli::kExitConstruction);
    CHECK(e.str().find("NoFrames") != std::string::npos);
    bad.state = phi;
    bad.frames.mode = "none";
    CHECK(cli::cmd_certify(bad, o, e) == cli::kExitConstruction);
  }
  SUBCASE("explicit frame file") {
    cli::CertifyOptions with_file;
    with_file.state = write_state("phi4.json", max_entangled_state(4).matrix(), 4);
    with_file.frames.mode = "none";
    with_file.frames.mub_file = fs::path(SNW_TEST_DATA_DIR) / "mub_d4.json";
    with_file.seeds = 1;
    with_file.distance_samples = 0;
    std::ostringstream o;
    std::ostringstream e;
    CHECK(cli::cmd_certify(with_file, o, e) == cli::kExitOk);
    CHECK(o.str().find("SN \xE2\x89\xA5 4\n") != std::string::npos);
    CHECK(o.str().find("\"frames\": [\n      \"mub\"\n    ]") != std::string::npos);
  }
}

TEST_CASE("sweep command") {
  cli::SweepOptions opts;
  opts.d = 3;
  opts.k = 2;
  opts.p_values = {0.0, 0.68, 0.69, 1.0};
  opts.seeds = 0;
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cli::cmd_sweep(opts, out, err) == cli::kExitOk);
  std::istringstream lines(out.str());
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "p,fidelity,fidelity_verdict,witness_value,witness_verdict,distance_lower_bound");
  CHECK(rows[1].find("inconclusive,") != std::string::npos);
  CHECK(rows[2].rfind("0.68,", 0) == 0);
  CHECK(rows[2].find(",inconclusive,") != std::string::npos);
  CHECK(rows[3].find(",SN>=3,") != std::string::npos);
  CHECK(rows[4].rfind("1,1,SN>=3,", 0) == 0);
  CHECK(rows[4].find("0.2973") != std::string::npos);

  opts.witness = "sic";
  std::ostringstream sic_out;
  REQUIRE(cli::cmd_sweep(opts, sic_out, err) == cli::kExitOk);
  CHECK(sic_out.str().find(",\n") != std::string::npos);  // empty distance column

  opts.k = 5;
  std::ostringstream o;
  CHECK(cli::cmd_sweep(opts, o, err) == cli::kExitConstruction);
}

TEST_CASE("identical runs give identical bytes") {
  const fs::path state = write_state("rand3.json", testing::random_density(9, RngSeed{17}).matrix(), 3);
  cli::CertifyOptions c;
  c.state = state;
  c.seeds = 3;
  c.distance_samples = 30;
  std::string texts[2];
  for (auto& t : texts) {
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cli::cmd_certify(c, out, err) == cli::kExitOk);
    t = out.str();
  }
  CHECK(texts[0] == texts[1]);

  cli::SweepOptions s;
  s.d = 3;
  s.k = 1;
  s.p_steps = 11;
  s.seeds = 3;
  s.out = scratch() / "sweep_a.csv";
  std::ostringstream sink;
  REQUIRE(cli::cmd_sweep(s, sink, sink) == cli::kExitOk);
  s.out = scratch() / "sweep_b.csv";
  REQUIRE(cli::cmd_sweep(s, sink, sink) == cli::kExitOk);
  CHECK(slurp(scratch() / "sweep_a.csv") == slurp(scratch() / "sweep_b.csv"));
}

TEST_CASE("argument handling") {
  std::string out;
  std::string err;
  CHECK(run_args({"--help"}, out, err) == cli::kExitOk);
  CHECK(out.find("certify") != std::string::npos);
  CHECK(run_args({"frames", "--kind", "cube", "--d", "3"}, out, err) == cli::kExitIo);
  CHECK(run_args({"frames", "--d", "3"}, out, err) == cli::kExitIo);
  CHECK(run_args({"frames", "--kind", "mub", "--d", "5"}, out, err) == cli::kExitOk);
  CHECK(out.find("\"kind\": \"mub\"") != std::string::npos);
  CHECK(run_args({"sweep", "--d", "2", "--k", "1", "--p", "0.2,1"}, out, err) == cli::kExitOk);
  CHECK(out.rfind("p,fidelity", 0) == 0);
  CHECK(std::count(out.begin(), out.end(), '\n') == 3);
}
