#include "snw/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "snw/certify.hpp"
#include "snw/io.hpp"

namespace snw::cli {
namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ValidationFailed: return kExitValidation;
    case ErrorCode::Io:
    case ErrorCode::Parse: return kExitIo;
    default: return kExitConstruction;
  }
}

int report_error(const Error& e, std::ostream& err) {
  err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  return exit_code_for(e.code());
}

void print_diagnostics(const FrameDiagnostics& diag, std::ostream& out) {
  out << "frame " << diag.kind << " d=" << diag.d << " count=" << diag.count << "\n";
  for (const auto& c : diag.checks) {
    out << "  " << c.name << " deviation=" << format_double(c.deviation) << " " << (c.passed ? "pass" : "FAIL")
        << "\n";
  }
  out << "verification " << (diag.passed ? "passed" : "failed") << " at tol=" << format_double(diag.tolerance)
      << "\n";
}

std::shared_ptr<const SicPovm> cached_sic(int d, const FrameSelection& sel, std::ostream& log) {
  const auto dir = frame_cache_dir();
  std::filesystem::path file;
  if (!dir.empty()) {
    file = dir / ("sic_d" + std::to_string(d) + "_seed" + std::to_string(sel.sic_seed) + "_r" +
                  std::to_string(sel.sic_restarts) + ".json");
    std::error_code ec;
    if (std::filesystem::exists(file, ec)) {
      try {
        Frame frame = frame_from_json(read_json_file(file));
        if (auto* sic = std::get_if<SicPovm>(&frame); sic && sic->d == d) {
          return std::make_shared<const SicPovm>(std::move(*sic));
        }
      } catch (const Error& e) {
        log << "ignoring unusable cached frame " << file.string() << ": " << e.what() << "\n";
      }
    }
  }
  try {
    auto sic = std::make_shared<const SicPovm>(
        wh_sic_from_fiducial(find_sic_fiducial(d, RngSeed{sel.sic_seed}, sel.sic_restarts)));
    if (!file.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      try {
        write_json_file(file, frame_to_json(*sic));
      } catch (const Error&) {
        // cache is best effort
      }
    }
    return sic;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchFailed) throw;
    log << "SIC search failed for d=" << d << " (best residual " << format_double(e.residual()) << ")\n";
    return nullptr;
  }
}

std::string csv_field(double x) {
  return format_double(x);
}

}  // namespace

std::filesystem::path frame_cache_dir() {
  if (const char* root = std::getenv(kCacheEnv); root && *root) return root;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "snwit";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "snwit";
  return {};
}

FrameSet resolve_frames(int d, const FrameSelection& selection, std::ostream& log) {
  if (selection.mode != "auto" && selection.mode != "none") {
    throw Error(ErrorCode::InvalidArgument, "--frames must be 'auto' or 'none'");
  }
  FrameSet set;
  if (selection.sic_file) {
    Frame frame = frame_from_json(read_json_file(*selection.sic_file));
    auto* sic = std::get_if<SicPovm>(&frame);
    if (!sic) throw Error(ErrorCode::Parse, selection.sic_file->string() + " is not a SIC frame file");
    if (sic->d != d) throw Error(ErrorCode::DimensionMismatch, "SIC file dimension differs from the state");
    set.sic = std::make_shared<const SicPovm>(std::move(*sic));
  }
  if (selection.mub_file) {
    Frame frame = frame_from_json(read_json_file(*selection.mub_file));
    auto* mubs = std::get_if<MubCollection>(&frame);
    if (!mubs) throw Error(ErrorCode::Parse, selection.mub_file->string() + " is not a MUB frame file");
    if (mubs->d != d) throw Error(ErrorCode::DimensionMismatch, "MUB file dimension differs from the state");
    set.mubs = std::make_shared<const MubCollection>(std::move(*mubs));
  }
  if (selection.mode == "auto") {
    if (!set.mubs && is_prime(d)) set.mubs = std::make_shared<const MubCollection>(mub_prime(d));
    if (!set.sic && d >= 2 && d <= 8) set.sic = cached_sic(d, selection, log);
  }
  if (!set.sic && !set.mubs) {
    throw Error(ErrorCode::NoFrames, "no frames available for d=" + std::to_string(d) +
                                         "; supply --sic or --mub frame files");
  }
  return set;
}

int cmd_frames(const FramesOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Frame frame;
    if (options.kind == "mub") {
      frame = mub_prime(options.d);
    } else if (options.kind == "sic") {
      if (options.d < 2) throw Error(ErrorCode::InvalidArgument, "SIC search needs d >= 2");
      frame = wh_sic_from_fiducial(find_sic_fiducial(options.d, RngSeed{options.seed}, options.restarts));
    } else {
      throw Error(ErrorCode::InvalidArgument, "--kind must be 'sic' or 'mub'");
    }
    const FrameDiagnostics diag =
        std::visit([](const auto& f) { return verify_frames(f, frame_tol::kOverlap); }, frame);
    print_diagnostics(diag, out);
    if (!options.out.empty()) {
      write_json_file(options.out, frame_to_json(frame));
      out << "wrote " << options.out.string() << "\n";
    } else {
      out << frame_to_json(frame).dump(2) << "\n";
    }
    return diag.passed ? kExitOk : kExitConstruction;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SearchFailed) {
      err << "best residual " << format_double(e.residual()) << "\n";
    }
    return report_error(e, err);
  }
}

int cmd_certify(const CertifyOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const MatrixFile file = matrix_file_from_json(read_json_file(options.state));
    if (file.space != MatrixSpace::Bipartite) {
      throw Error(ErrorCode::ValidationFailed, "state validation failed: space (expected bipartite)", "space");
    }
    if (auto bad = DensityOperator::violated_invariant(file.matrix)) {
      throw Error(ErrorCode::ValidationFailed, "state validation failed: " + *bad, *bad);
    }
    const DensityOperator rho(file.matrix);
    const int d = file.d;
    const int max_k = options.max_k.value_or(std::max(1, d - 1));
    if (options.seeds < 0) throw Error(ErrorCode::InvalidArgument, "--seeds must be >= 0");

    const FrameSet frames = resolve_frames(d, options.frames, err);
    CertifyStrategy strategy;
    strategy.sic = frames.sic;
    strategy.mubs = frames.mubs;
    strategy.rotation_seeds = default_rotation_seeds(options.seeds);
    strategy.distance_samples = options.distance_samples;
    strategy.distance_seed = options.distance_seed;

    const CertificateReport report = certify_schmidt_number(rho, max_k, strategy);
    const std::string text = report_to_json(report).dump(2) + "\n";
    if (options.out) {
      write_text_file(*options.out, text);
    } else {
      out << text;
    }
    for (const auto& e : report.evidence) {
      out << "k=" << e.k << " " << to_string(e.method) << " value=" << format_double(e.value) << " "
          << e.verdict() << "\n";
    }
    out << report.conclusion() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.family != "isotropic") throw Error(ErrorCode::InvalidArgument, "only --family isotropic is supported");
    if (options.witness != "sic" && options.witness != "mub") {
      throw Error(ErrorCode::InvalidArgument, "--witness must be 'sic' or 'mub'");
    }
    const int d = options.d;
    if (d < 2) throw Error(ErrorCode::InvalidArgument, "--d must be >= 2");
    if (options.k < 1 || options.k > d) throw Error(ErrorCode::InvalidArgument, "--k must lie in [1, d]");
    if (options.seeds < 0) throw Error(ErrorCode::InvalidArgument, "--seeds must be >= 0");

    std::vector<double> grid = options.p_values;
    if (grid.empty()) {
      if (options.p_steps < 1) throw Error(ErrorCode::InvalidArgument, "--p-steps must be >= 1");
      for (int i = 0; i < options.p_steps; ++i) {
        grid.push_back(options.p_steps == 1 ? options.p_min
                                            : options.p_min + (options.p_max - options.p_min) * i / (options.p_steps - 1));
      }
    }

    FrameSelection selection = options.frames;
    const FrameSet frames = resolve_frames(d, selection, err);
    std::vector<WitnessOperator> witnesses;
    for (std::uint64_t seed : default_rotation_seeds(options.seeds)) {
      if (options.witness == "sic") {
        if (!frames.sic) throw Error(ErrorCode::NoFrames, "no SIC available for d=" + std::to_string(d));
        witnesses.push_back(sic_witness(options.k, frames.sic, RngSeed{seed}));
      } else {
        if (!frames.mubs) throw Error(ErrorCode::NoFrames, "no MUBs available for d=" + std::to_string(d));
        witnesses.push_back(mub_witness(options.k, frames.mubs, RngSeed{seed}));
      }
    }

    const std::string certified = "SN>=" + std::to_string(options.k + 1);
    std::ostringstream csv;
    csv << "p,fidelity,fidelity_verdict,witness_value,witness_verdict,distance_lower_bound\n";
    for (double p : grid) {
      const DensityOperator rho = isotropic_state(d, p);
      const FidelityBound fid = fidelity_bound(rho);
      double best = std::numeric_limits<double>::infinity();
      double distance = 0.0;
      for (const auto& w : witnesses) {
        best = std::min(best, evaluate(w, rho));
        if (w.kind == MapKind::Mub) distance = std::max(distance, distance_lower_bound(rho, w));
      }
      const bool fid_cert = fid.fidelity > static_cast<double>(options.k) / d + tol::kSlack;
      csv << csv_field(p) << "," << csv_field(fid.fidelity) << "," << (fid_cert ? certified : "inconclusive") << ","
          << csv_field(best) << "," << (best < -tol::kSlack ? certified : "inconclusive") << ","
          << (options.witness == "mub" ? csv_field(distance) : std::string()) << "\n";
    }
    if (options.out) {
      write_text_file(*options.out, csv.str());
    } else {
      out << csv.str();
    }
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schmidt-number witnesses from SIC-POVMs and mutually unbiased bases"};
  app.require_subcommand(1);

  FramesOptions frames_opts;
  std::string frames_out;
  auto* frames_cmd = app.add_subcommand("frames", "construct and verify a SIC-POVM or a complete MUB set");
  frames_cmd->add_option("--kind", frames_opts.kind, "sic or mub")->required()->check(CLI::IsMember({"sic", "mub"}));
  frames_cmd->add_option("--d", frames_opts.d, "dimension")->required();
  frames_cmd->add_option("--seed", frames_opts.seed, "SIC search seed");
  frames_cmd->add_option("--restarts", frames_opts.restarts, "SIC search restart budget");
  frames_cmd->add_option("--out", frames_out, "output frame file (stdout when omitted)");

  auto add_frame_flags = [](CLI::App* cmd, FrameSelection& sel, std::string& sic_file, std::string& mub_file) {
    cmd->add_option("--frames", sel.mode, "auto or none")->check(CLI::IsMember({"auto", "none"}));
    cmd->add_option("--sic", sic_file, "SIC frame file");
    cmd->add_option("--mub", mub_file, "MUB frame file");
    cmd->add_option("--sic-seed", sel.sic_seed, "seed for the automatic SIC search");
  };

  CertifyOptions certify_opts;
  std::string state_file, certify_out, certify_sic, certify_mub;
  int max_k = 0;
  auto* certify_cmd = app.add_subcommand("certify", "certify a lower bound on the Schmidt number of a state");
  certify_cmd->add_option("--state", state_file, "MatrixFile JSON with a bipartite density operator")->required();
  certify_cmd->add_option("--max-k", max_k, "largest witness order (default d-1)");
  add_frame_flags(certify_cmd, certify_opts.frames, certify_sic, certify_mub);
  certify_cmd->add_option("--seeds", certify_opts.seeds, "random rotation seeds besides the identity");
  certify_cmd->add_option("--distance-samples", certify_opts.distance_samples, "S_k samples for the distance upper bound");
  certify_cmd->add_option("--distance-seed", certify_opts.distance_seed, "seed for the distance sampler");
  certify_cmd->add_option("--out", certify_out, "report JSON path (stdout when omitted)");

  SweepOptions sweep_opts;
  std::string sweep_out, sweep_sic, sweep_mub;
  auto* sweep_cmd = app.add_subcommand("sweep", "detection table over a one-parameter state family");
  sweep_cmd->add_option("--family", sweep_opts.family, "state family")->check(CLI::IsMember({"isotropic"}));
  sweep_cmd->add_option("--d", sweep_opts.d, "local dimension")->required();
  sweep_cmd->add_option("--k", sweep_opts.k, "witness order")->required();
  sweep_cmd->add_option("--p", sweep_opts.p_values, "explicit p values")->delimiter(',');
  sweep_cmd->add_option("--p-min", sweep_opts.p_min, "grid start");
  sweep_cmd->add_option("--p-max", sweep_opts.p_max, "grid end");
  sweep_cmd->add_option("--p-steps", sweep_opts.p_steps, "grid points");
  sweep_cmd->add_option("--witness", sweep_opts.witness, "sic or mub")->check(CLI::IsMember({"sic", "mub"}));
  add_frame_flags(sweep_cmd, sweep_opts.frames, sweep_sic, sweep_mub);
  sweep_cmd->add_option("--seeds", sweep_opts.seeds, "random rotation seeds besides the identity");
  sweep_cmd->add_option("--out", sweep_out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return kExitIo;
  }

  auto set_file = [](std::optional<std::filesystem::path>& dst, const std::string& src) {
    if (!src.empty()) dst = src;
  };
  if (frames_cmd->parsed()) {
    frames_opts.out = frames_out;
    return cmd_frames(frames_opts, out, err);
  }
  if (certify_cmd->parsed()) {
    certify_opts.state = state_file;
    if (max_k > 0) certify_opts.max_k = max_k;
    set_file(certify_opts.out, certify_out);
    set_file(certify_opts.frames.sic_file, certify_sic);
    set_file(certify_opts.frames.mub_file, certify_mub);
    return cmd_certify(certify_opts, out, err);
  }
  set_file(sweep_opts.out, sweep_out);
  set_file(sweep_opts.frames.sic_file, sweep_sic);
  set_file(sweep_opts.frames.mub_file, sweep_mub);
  return cmd_sweep(sweep_opts, out, err);
}

}  // namespace snw::cli
