#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "speechlift/mask_model.hpp"

namespace speechlift::detail {

// Activations live on a zero-padded (frames + 2 pad_t) x (bins + 2 pad_f)
// grid flattened row-major into matrix columns (one row per channel). A
// kernel tap (dt, df) is then a constant column offset, so each tap of a
// layer is one GEMM over a contiguous column range. Pad positions are forced
// back to zero after every layer so they act as same-padding for the next.
struct Grid {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t pad_t = 0;
  std::size_t pad_f = 0;
  std::size_t padded_bins = 0;
  std::size_t positions = 0;  // total padded grid size
  std::size_t first = 0;      // first interior column
  std::size_t span = 0;       // columns from first to last interior, inclusive
  Eigen::RowVectorXd interior;  // 1 at interior columns, 0 at padding

  Grid(const MaskModelConfig& cfg, std::size_t frames, std::size_t bins);

  std::size_t column(std::size_t t, std::size_t f) const {
    return (t + pad_t) * padded_bins + f + pad_f;
  }
  std::ptrdiff_t tap_offset(const ConvLayerSpec& layer, std::size_t dt, std::size_t df) const;
};

struct LayerGrads {
  std::vector<double> weights;
  std::vector<double> bias;
};

class ConvEngine {
 public:
  ConvEngine(const MaskModel& model, std::size_t frames, std::size_t bins);

  const Grid& grid() const { return grid_; }

  // Loads a feature map (or a sub-window of one) into the padded input.
  void load_input(const FeatureMap& features, std::size_t t0, std::size_t f0);

  // Runs all layers. backward() needs keep_trace; inference can drop the
  // intermediate activations as it goes.
  void forward(bool keep_trace = true);

  // Final activation (the mask) on the padded grid.
  const Eigen::MatrixXd& output() const { return acts_.back(); }
  double output_at(std::size_t t, std::size_t f) const { return acts_.back()(0, grid_.column(t, f)); }

  // d_output: gradient w.r.t. the mask on the padded grid (zero at padding).
  // Accumulates into grads (sized like the model's parameters).
  void backward(const Eigen::RowVectorXd& d_output, std::vector<LayerGrads>& grads) const;

 private:
  const MaskModel& model_;
  Grid grid_;
  std::vector<Eigen::MatrixXd> acts_;  // acts_[0] is the input
};

std::vector<LayerGrads> zero_grads(const MaskModel& model);

}  // namespace speechlift::detail
