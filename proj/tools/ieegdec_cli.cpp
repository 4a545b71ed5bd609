// ieegdec command-line driver.
//
// Exit status: 0 success, 1 processing error, 2 invalid config or synth
// spec, 3 corrupt container, 64 usage error. Failures print one JSON object
// {"error", "module", "message"} on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ieegdec/error.hpp"
#include "ieegdec/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ieegdec;

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitContainer = 3;
constexpr int kExitUsage = 64;

void print_error(const std::string& code, const std::string& module, const std::string& message) {
  std::cerr << nlohmann::json{{"error", code}, {"module", module}, {"message", message}}.dump() << '\n';
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kSpecInvalid:
      return kExitConfig;
    case ErrorCode::kContainerCorrupt:
      return kExitContainer;
    default:
      return kExitError;
  }
}

std::string read_text(const std::string& path, ErrorCode code) {
  std::ifstream in(path);
  if (!in) throw Error(code, "pipeline-cli", "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gamma-band iEEG decoding with channel ensembles"};
  app.require_subcommand(1);

  std::string spec_path, in_dir, out_path, config_path, classifier;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> runs;
  FeatureDumpOptions dump;
  std::string alignment = "onset", feature_input = "envelope";

  auto* synth = app.add_subcommand("synth", "Generate a synthetic participant container");
  synth->add_option("--spec", spec_path, "Synth spec JSON")->required();
  synth->add_option("--out", out_path, "Output container directory")->required();
  synth->add_option("--seed", seed, "Override the seed in the synth spec");

  auto* features = app.add_subcommand("features", "Dump per-channel feature matrices as CSV");
  features->add_option("--in", in_dir, "Container directory")->required();
  features->add_option("--out", out_path, "Output CSV")->required();
  features->add_option("--window-seconds", dump.window_seconds, "Window length")->capture_default_str();
  features->add_option("--alignment", alignment, "onset | centered")->capture_default_str();
  features->add_option("--feature-input", feature_input, "envelope | gamma_band")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Two-mode cross-validated evaluation of one container");
  evaluate->add_option("--in", in_dir, "Container directory")->required();
  evaluate->add_option("--config", config_path, "Run config JSON (defaults apply when omitted)");
  evaluate->add_option("--out", out_path, "Output directory (overrides config output_dir)");
  evaluate->add_option("--classifier", classifier, "Override classifier kind");
  evaluate->add_option("--seed", seed, "Override master seed");

  auto* regions = app.add_subcommand("regions", "Cross-participant region histogram");
  regions->add_option("--runs", runs, "evaluate output directories")->required();
  regions->add_option("--out", out_path, "Output CSV")->required();

  auto* report = app.add_subcommand("report", "Per-classifier, per-mode F1 table");
  report->add_option("--runs", runs, "evaluate output directories")->required();
  report->add_option("--out", out_path, "Output CSV")->required();

  auto* validate = app.add_subcommand("validate", "Check a container and list violations");
  validate->add_option("--in", in_dir, "Container directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", "pipeline-cli", e.what());
    return kExitUsage;
  }

  try {
    if (*synth) {
      SynthSpec spec = synth_spec_from_json(read_text(spec_path, ErrorCode::kSpecInvalid));
      if (seed) spec.seed = *seed;
      run_synth(spec, out_path);
    } else if (*features) {
      dump.alignment = alignment_from_string(alignment);
      dump.feature_input = feature_input_from_string(feature_input);
      run_features(in_dir, out_path, dump);
    } else if (*evaluate) {
      RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
      if (!classifier.empty()) {
        try {
          config.evaluation.kind = classifier_kind_from_string(classifier);
        } catch (const Error& e) {
          throw Error(ErrorCode::kConfigInvalid, "pipeline-cli", e.what());
        }
      }
      if (seed) config.evaluation.seed = *seed;
      const std::string out = !out_path.empty() ? out_path : config.output_dir.value_or("");
      if (out.empty()) throw Error(ErrorCode::kConfigInvalid, "pipeline-cli", "no output directory given");
      run_evaluate(in_dir, config, out);
    } else if (*regions) {
      run_regions({runs.begin(), runs.end()}, out_path);
    } else if (*report) {
      run_report({runs.begin(), runs.end()}, out_path);
    } else if (*validate) {
      const ContainerReport r = validate_container(in_dir);
      std::cout << nlohmann::json{{"valid", r.ok()}, {"violations", r.violations}}.dump(2) << '\n';
      return r.ok() ? 0 : kExitContainer;
    }
  } catch (const Error& e) {
    print_error(std::string(to_string(e.code())), e.module(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error("InternalError", "pipeline-cli", e.what());
    return kExitError;
  }
  return 0;
}
