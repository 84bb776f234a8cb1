#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "app/http_api.hpp"
#include "app/pipeline.hpp"
#include "app/train_command.hpp"
#include "httplib.h"
#include "speechlift/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace speechlift;
using namespace speechlift::app;

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitProcessing = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server != nullptr) g_server->stop();
}

PresetRegistry load_presets(const std::string& extra) {
  PresetRegistry registry = PresetRegistry::builtin();
  if (!extra.empty()) {
    const PresetRegistry loaded = PresetRegistry::load(extra);
    for (const auto& p : loaded.presets()) registry.add(p);
  }
  return registry;
}

fs::path default_artifact_dir() {
  if (const char* env = std::getenv("SPEECHLIFT_ARTIFACT_DIR"); env != nullptr && *env != '\0') return env;
  return "artifacts";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"speechlift: dialogue separation, speech boost and loudness-preserving remix"};
  cli.require_subcommand(1);
  std::string presets_file;
  cli.add_option("--presets-file", presets_file, "INI file with additional presets")->check(CLI::ExistingFile);

  // process
  auto* process = cli.add_subcommand("process", "Separate, boost, remix and package one stereo WAV");
  ProcessRequest req;
  std::string backend = "center";
  std::string out_dir;
  double boost_db = BoostConfig{}.gain_db;
  bool no_boost = false;
  RemixParams custom;
  process->add_option("-i,--input", req.input, "Stereo WAV mix")->required();
  process->add_option("-o,--out-dir", out_dir, "Program output directory")->required();
  process->add_option("-b,--backend", backend, "center | model")->capture_default_str();
  process->add_option("--checkpoint", req.checkpoint, "Mask-model checkpoint (model backend)");
  process->add_option("-p,--preset", req.preset, "Preset name")->capture_default_str();
  auto* global_opt = process->add_option("--global-db", custom.global_atten_db, "Explicit global background attenuation");
  auto* duck_opt = process->add_option("--duck-db", custom.duck_extra_db, "Explicit extra attenuation under dialogue");
  auto* attack_opt = process->add_option("--attack-ms", custom.attack_ms, "Ducking attack time constant");
  auto* release_opt = process->add_option("--release-ms", custom.release_ms, "Ducking release time constant");
  process->add_option("--boost-db", boost_db, "Speech-band boost")->capture_default_str();
  process->add_flag("--no-boost", no_boost, "Skip the speech-band boost");
  process->add_option("--bounds-min-db", req.bounds.min_db, "Lowest listener dialogue gain")->capture_default_str();
  process->add_option("--bounds-max-db", req.bounds.max_db, "Highest listener dialogue gain")->capture_default_str();
  process->add_option("--program", req.program, "Programme name (default: input file stem)");

  // train
  auto* train = cli.add_subcommand("train", "Train the mask model on a synthetic labelled set");
  TrainRequest treq;
  std::string model_config;
  train->add_option("--items", treq.dataset.items, "Synthetic items")->capture_default_str();
  train->add_option("--duration", treq.dataset.duration_s, "Seconds per item")->capture_default_str();
  train->add_option("--sample-rate", treq.dataset.sample_rate, "Synthetic sample rate")->capture_default_str();
  train->add_option("--data-seed", treq.dataset.seed, "Dataset seed")->capture_default_str();
  train->add_option("--model-config", model_config, "Model architecture JSON")->check(CLI::ExistingFile);
  train->add_option("--epochs", treq.train.epochs, "Epochs (>= 1)")->capture_default_str();
  train->add_option("--lr", treq.train.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--momentum", treq.train.momentum, "Momentum")->capture_default_str();
  train->add_option("--batch", treq.train.batch_size, "Patches per update")->capture_default_str();
  train->add_option("--patch-frames", treq.train.patch_frames, "Patch length in frames")->capture_default_str();
  train->add_option("--patch-bins", treq.train.patch_bins, "Patch height in bins (0: full band)")->capture_default_str();
  train->add_option("--patches-per-item", treq.train.patches_per_item, "Patches per item per epoch")
      ->capture_default_str();
  train->add_option("--seed", treq.train.seed, "Sampling seed")->capture_default_str();
  train->add_option("--init-seed", treq.init_seed, "Weight initialisation seed")->capture_default_str();
  train->add_option("-o,--out", treq.checkpoint_out, "Checkpoint output path")->required();
  train->add_option("--loss-csv", treq.loss_csv, "Loss history CSV (default: <out>.loss.csv)");

  // serve
  auto* serve = cli.add_subcommand("serve", "Run the HTTP job and audition service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string artifacts;
  std::string origin = "*";
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--artifacts", artifacts, "Artifact directory (default: $SPEECHLIFT_ARTIFACT_DIR or ./artifacts)");
  serve->add_option("--cors-origin", origin, "Allowed CORS origin")->capture_default_str();

  // presets
  auto* presets = cli.add_subcommand("presets", "List presets or export them as INI");
  std::string export_path;
  presets->add_option("--export", export_path, "Write all presets to this INI file");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kExitUsage;
  }

  try {
    const PresetRegistry registry = load_presets(presets_file);

    if (*process) {
      req.backend = backend_from_string(backend);
      if (no_boost) req.boost.reset();
      else req.boost->gain_db = boost_db;
      if (*global_opt || *duck_opt || *attack_opt || *release_opt) {
        RemixParams base = registry.contains(req.preset) ? registry.find(req.preset).params : RemixParams{};
        if (*global_opt) base.global_atten_db = custom.global_atten_db;
        if (*duck_opt) base.duck_extra_db = custom.duck_extra_db;
        if (*attack_opt) base.attack_ms = custom.attack_ms;
        if (*release_opt) base.release_ms = custom.release_ms;
        req.params = base;
      }
      const Manifest m = process_program(req, registry, out_dir);
      std::cout << "wrote " << (fs::path(out_dir) / artifact::kEnhanced).string() << ", "
                << (fs::path(out_dir) / m.artifacts.at("package_metadata")).string() << ", "
                << (fs::path(out_dir) / artifact::kManifest).string() << "\n";
      if (const auto delta = m.report.loudness_delta_lu()) std::cout << "loudness delta " << *delta << " LU\n";
      return kExitOk;
    }

    if (*train) {
      if (!model_config.empty()) treq.model_config = fs::path(model_config);
      const auto history = run_training(treq);
      std::cout << "loss " << history.front() << " -> " << history.back() << " after " << history.size() - 1
                << " epochs; checkpoint " << treq.checkpoint_out.string() << "\n";
      return kExitOk;
    }

    if (*serve) {
      JobStore store(artifacts.empty() ? default_artifact_dir() : fs::path(artifacts), registry);
      httplib::Server server;
      register_routes(server, store, origin);
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      std::cout << "serving " << store.root().string() << " on http://" << host << ":" << port << "\n" << std::flush;
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return kExitProcessing;
      }
      return kExitOk;
    }

    if (*presets) {
      if (!export_path.empty()) {
        registry.save(export_path);
        return kExitOk;
      }
      for (const auto& p : registry.presets())
        std::cout << p.name << ": global " << p.params.global_atten_db << " dB, duck +" << p.params.duck_extra_db
                  << " dB, attack " << p.params.attack_ms << " ms, release " << p.params.release_ms << " ms\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PresetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitProcessing;
  }
  return kExitUsage;
}
