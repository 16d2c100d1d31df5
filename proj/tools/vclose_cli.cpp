#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "vclose/analyze.hpp"
#include "vclose/report.hpp"
#include "vclose/selftest.hpp"
#include "vclose/spec_format.hpp"

namespace {

constexpr int kExitRetract = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNotClosed = 10;

bool is_input_error(vclose::ErrorCode code) {
  using vclose::ErrorCode;
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotAnInvolution:
    case ErrorCode::NotInfiniteOrder:
    case ErrorCode::NotInverted:
    case ErrorCode::UnboundGenerator:
      return true;
    default:
      return false;
  }
}

struct AnalyzeArgs {
  std::string path;
  std::string emit_equation;
  std::uint64_t seed = 1;
  std::string filler = "0";
  std::size_t squares = 0;
  bool verify = false;
  std::string format = "text";
  std::size_t samples = 10'000;
  long bound = 100;
  std::size_t spot_trials = 1'000;
  bool timing = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  using namespace vclose;
  const auto start = std::chrono::steady_clock::now();
  AnalyzeOptions options;
  options.squares = args.squares;
  if (options.filler.set_str(args.filler, 10) != 0) {
    std::cerr << "error: --filler must be an integer\n";
    return kExitBadInput;
  }
  if (abs(options.filler) == 1) {
    std::cerr << "error: --filler must not be +-1\n";
    return kExitBadInput;
  }

  Verdict verdict;
  try {
    verdict = analyze(read_spec_file(args.path), options);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return is_input_error(e.code()) ? kExitBadInput : kExitFailure;
  }

  Report report{&verdict, {}, {}};
  if (args.verify) {
    VerifyOptions v;
    v.samples = args.samples;
    v.bound = args.bound;
    v.spot_trials = args.spot_trials;
    v.seed = args.seed;
    report.verification = run_verification(verdict, v);
  }
  if (args.timing)
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (args.format == "structured" ? render_structured(report) : render_text(report));

  if (!args.emit_equation.empty()) {
    if (verdict.is_retract()) {
      std::cerr << "note: verdict is Retract, no equation to emit\n";
    } else if (args.emit_equation == "-") {
      std::cout << serialize(verdict.not_closed().equation);
    } else {
      std::ofstream out(args.emit_equation);
      out << serialize(verdict.not_closed().equation);
      if (!out) {
        std::cerr << "error: cannot write " << args.emit_equation << '\n';
        return kExitFailure;
      }
    }
  }
  for (const auto& r : report.verification)
    if (!r.passed) {
      std::cerr << "verification failed: " << r.name << '\n';
      return kExitFailure;
    }
  return verdict.is_retract() ? kExitRetract : kExitNotClosed;
}

int cmd_selftest(const std::string& fault_name) {
  vclose::Fault fault = vclose::Fault::None;
  if (fault_name == "project-sign") fault = vclose::Fault::ProjectSign;
  const auto result = vclose::run_selftest(fault);
  for (const auto& c : result.checks)
    std::cout << (c.passed ? "pass  " : "FAIL  ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
  if (const auto* failed = result.first_failure()) {
    std::cout << "first failing property: " << failed->name << '\n';
    return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide verbal closedness of an infinite dihedral subgroup"};
  app.require_subcommand(1);

  AnalyzeArgs args;
  auto* analyze = app.add_subcommand("analyze", "Analyze a group spec file");
  analyze->add_option("path", args.path, "Spec file")->required();
  analyze->add_option("--emit-equation", args.emit_equation, "Write the witness equation to PATH ('-' for stdout)");
  analyze->add_option("--seed", args.seed, "Seed for sampled verification")->capture_default_str();
  analyze->add_option("--filler", args.filler, "Exponent for zero components (not +-1)")->capture_default_str();
  analyze->add_option("--squares", args.squares, "Squares per character block (0: free rank + 1)");
  analyze->add_flag("--verify", args.verify, "Run verification after analysis");
  analyze->add_option("--format", args.format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  analyze->add_option("--samples", args.samples, "Retraction sample pairs")->capture_default_str();
  analyze->add_option("--bound", args.bound, "Retraction sample coordinate bound")->capture_default_str();
  analyze->add_option("--spot-trials", args.spot_trials, "Random H-substitutions per delta")->capture_default_str();
  analyze->add_flag("--timing", args.timing, "Include wall time in the report");

  std::string fault;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");
  selftest->add_option("--inject-fault", fault, "Deliberate defect")->check(CLI::IsMember({"project-sign"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }
  if (*analyze) return cmd_analyze(args);
  return cmd_selftest(fault);
}
