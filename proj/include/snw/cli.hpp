#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snw/frames.hpp"

namespace snw::cli {

// Exit codes are part of the command-line contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConstruction = 2;
inline constexpr int kExitIo = 3;

/// Environment variable naming the frame cache root.
inline constexpr const char* kCacheEnv = "SNWIT_CACHE_DIR";

struct FramesOptions {
  std::string kind;  // "sic" | "mub"
  int d = 0;
  std::uint64_t seed = 1;
  int restarts = kDefaultSicRestarts;
  std::filesystem::path out;
};

struct FrameSelection {
  std::string mode = "auto";  // "auto" | "none"
  std::optional<std::filesystem::path> sic_file;
  std::optional<std::filesystem::path> mub_file;
  std::uint64_t sic_seed = 1;
  int sic_restarts = kDefaultSicRestarts;
};

struct CertifyOptions {
  std::filesystem::path state;
  std::optional<int> max_k;  // defaults to d - 1
  FrameSelection frames;
  int seeds = 16;  // random rotation seeds in addition to the identity
  int distance_samples = 1000;
  std::uint64_t distance_seed = 1;
  std::optional<std::filesystem::path> out;
};

struct SweepOptions {
  std::string family = "isotropic";
  int d = 0;
  int k = 1;
  std::vector<double> p_values;  // explicit grid; overrides the range below
  double p_min = 0.0;
  double p_max = 1.0;
  int p_steps = 21;
  std::string witness = "mub";  // "sic" | "mub"
  FrameSelection frames;
  int seeds = 16;
  std::optional<std::filesystem::path> out;
};

struct FrameSet {
  std::shared_ptr<const SicPovm> sic;
  std::shared_ptr<const MubCollection> mubs;
};

/// Loads frame files, then (mode "auto") builds MUBs for prime d and searches a
/// SIC for d <= 8, caching SICs under frame_cache_dir().
FrameSet resolve_frames(int d, const FrameSelection& selection, std::ostream& log);

/// $SNWIT_CACHE_DIR, else $XDG_CACHE_HOME/snwit, else $HOME/.cache/snwit; empty if none.
std::filesystem::path frame_cache_dir();

int cmd_frames(const FramesOptions& options, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snw::cli
