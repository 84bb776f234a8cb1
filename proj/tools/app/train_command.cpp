#include "train_command.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pipeline.hpp"
#include "speechlift/checkpoint.hpp"

namespace speechlift::app {

std::vector<double> run_training(const TrainRequest& req) {
  if (req.train.epochs == 0) throw UsageError("epochs must be at least 1");
  if (req.dataset.items == 0) throw UsageError("the training set needs at least one item");
  if (req.checkpoint_out.empty()) throw UsageError("no checkpoint output path given");

  MaskModelConfig cfg = MaskModelConfig::default_config();
  if (req.model_config) {
    std::ifstream in(*req.model_config);
    if (!in) throw UsageError("cannot read model config " + req.model_config->string());
    std::ostringstream text;
    text << in.rdbuf();
    try {
      cfg = model_config_from_json(text.str());
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }

  const auto items = synth_dataset(req.dataset);
  const TrainResult result = train_desk(MaskModel::initialized(cfg, req.init_seed), items, req.train);

  save_checkpoint(result.model, req.checkpoint_out);
  std::filesystem::path csv = req.loss_csv;
  if (csv.empty()) csv = std::filesystem::path(req.checkpoint_out).replace_extension(".loss.csv");
  std::ofstream out(csv, std::ios::trunc);
  out << "epoch,loss\n";
  char line[64];
  for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
    std::snprintf(line, sizeof line, "%zu,%.17g\n", e, result.loss_history[e]);
    out << line;
  }
  if (!out) throw ProcessingError("cannot write " + csv.string());
  return result.loss_history;
}

}  // namespace speechlift::app
