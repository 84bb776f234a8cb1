#include "conv_engine.hpp"

#include <algorithm>

namespace speechlift::detail {

namespace {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Map<const MatrixXd> tap_weights(const ConvLayerSpec& spec, const ConvLayerParams& p, std::size_t tap) {
  const auto block = static_cast<std::ptrdiff_t>(spec.in_channels * spec.out_channels);
  return Map<const MatrixXd>(p.weights.data() + static_cast<std::ptrdiff_t>(tap) * block,
                             static_cast<Eigen::Index>(spec.out_channels),
                             static_cast<Eigen::Index>(spec.in_channels));
}

}  // namespace

Grid::Grid(const MaskModelConfig& cfg, std::size_t frames_in, std::size_t bins_in)
    : frames(frames_in), bins(bins_in) {
  for (const auto& l : cfg.layers) {
    pad_t = std::max(pad_t, l.kernel_time / 2);
    pad_f = std::max(pad_f, l.kernel_freq / 2);
  }
  padded_bins = bins + 2 * pad_f;
  positions = (frames + 2 * pad_t) * padded_bins;
  first = column(0, 0);
  span = column(frames - 1, bins - 1) - first + 1;
  interior = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(positions));
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < bins; ++f) interior(static_cast<Eigen::Index>(column(t, f))) = 1.0;
}

std::ptrdiff_t Grid::tap_offset(const ConvLayerSpec& layer, std::size_t dt, std::size_t df) const {
  const auto rt = static_cast<std::ptrdiff_t>(layer.kernel_time / 2);
  const auto rf = static_cast<std::ptrdiff_t>(layer.kernel_freq / 2);
  return (static_cast<std::ptrdiff_t>(dt) - rt) * static_cast<std::ptrdiff_t>(padded_bins) +
         (static_cast<std::ptrdiff_t>(df) - rf);
}

ConvEngine::ConvEngine(const MaskModel& model, std::size_t frames, std::size_t bins)
    : model_(model), grid_(model.config(), frames, bins) {
  acts_.resize(model.config().layers.size() + 1);
}

void ConvEngine::load_input(const FeatureMap& features, std::size_t t0, std::size_t f0) {
  const std::size_t channels = model_.config().features.channels;
  MatrixXd& in = acts_[0];
  in = MatrixXd::Zero(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(grid_.positions));
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t t = 0; t < grid_.frames; ++t)
      for (std::size_t f = 0; f < grid_.bins; ++f)
        in(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(grid_.column(t, f))) =
            features.at(c, t0 + t, f0 + f);
}

void ConvEngine::forward(bool keep_trace) {
  const auto& cfg = model_.config();
  const auto first = static_cast<Eigen::Index>(grid_.first);
  const auto span = static_cast<Eigen::Index>(grid_.span);
  for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
    const ConvLayerSpec& spec = cfg.layers[l];
    const ConvLayerParams& params = model_.layers()[l];
    const MatrixXd& in = acts_[l];
    MatrixXd out = MatrixXd::Zero(static_cast<Eigen::Index>(spec.out_channels),
                                  static_cast<Eigen::Index>(grid_.positions));
    for (std::size_t dt = 0; dt < spec.kernel_time; ++dt) {
      for (std::size_t df = 0; df < spec.kernel_freq; ++df) {
        const auto off = static_cast<Eigen::Index>(grid_.tap_offset(spec, dt, df));
        out.middleCols(first, span).noalias() +=
            tap_weights(spec, params, dt * spec.kernel_freq + df) * in.middleCols(first + off, span);
      }
    }
    out.middleCols(first, span).colwise() +=
        Map<const VectorXd>(params.bias.data(), static_cast<Eigen::Index>(spec.out_channels));
    if (spec.activation == Activation::kRelu)
      out = out.cwiseMax(0.0);
    else
      out = (1.0 + (-out.array()).exp()).inverse().matrix();
    out.array().rowwise() *= grid_.interior.array();
    acts_[l + 1] = std::move(out);
    if (!keep_trace && l > 0) acts_[l].resize(0, 0);
  }
}

void ConvEngine::backward(const Eigen::RowVectorXd& d_output, std::vector<LayerGrads>& grads) const {
  const auto& cfg = model_.config();
  const auto first = static_cast<Eigen::Index>(grid_.first);
  const auto span = static_cast<Eigen::Index>(grid_.span);
  MatrixXd d_act = d_output;
  for (std::size_t l = cfg.layers.size(); l-- > 0;) {
    const ConvLayerSpec& spec = cfg.layers[l];
    const MatrixXd& act = acts_[l + 1];
    MatrixXd d_pre;
    if (spec.activation == Activation::kSigmoid)
      d_pre = (d_act.array() * act.array() * (1.0 - act.array())).matrix();
    else
      d_pre = (d_act.array() * (act.array() > 0.0).cast<double>()).matrix();
    d_pre.array().rowwise() *= grid_.interior.array();

    LayerGrads& g = grads[l];
    Map<VectorXd>(g.bias.data(), static_cast<Eigen::Index>(spec.out_channels)) +=
        d_pre.middleCols(first, span).rowwise().sum();
    const auto block = static_cast<std::ptrdiff_t>(spec.in_channels * spec.out_channels);
    for (std::size_t dt = 0; dt < spec.kernel_time; ++dt) {
      for (std::size_t df = 0; df < spec.kernel_freq; ++df) {
        const std::size_t tap = dt * spec.kernel_freq + df;
        const auto off = static_cast<Eigen::Index>(grid_.tap_offset(spec, dt, df));
        Map<MatrixXd> dw(g.weights.data() + static_cast<std::ptrdiff_t>(tap) * block,
                         static_cast<Eigen::Index>(spec.out_channels),
                         static_cast<Eigen::Index>(spec.in_channels));
        dw.noalias() += d_pre.middleCols(first, span) * acts_[l].middleCols(first + off, span).transpose();
      }
    }
    if (l == 0) break;

    MatrixXd d_prev = MatrixXd::Zero(static_cast<Eigen::Index>(spec.in_channels),
                                     static_cast<Eigen::Index>(grid_.positions));
    for (std::size_t dt = 0; dt < spec.kernel_time; ++dt) {
      for (std::size_t df = 0; df < spec.kernel_freq; ++df) {
        const auto off = static_cast<Eigen::Index>(grid_.tap_offset(spec, dt, df));
        d_prev.middleCols(first + off, span).noalias() +=
            tap_weights(spec, model_.layers()[l], dt * spec.kernel_freq + df).transpose() *
            d_pre.middleCols(first, span);
      }
    }
    d_prev.array().rowwise() *= grid_.interior.array();
    d_act = std::move(d_prev);
  }
}

std::vector<LayerGrads> zero_grads(const MaskModel& model) {
  std::vector<LayerGrads> grads;
  for (const auto& l : model.layers())
    grads.push_back({std::vector<double>(l.weights.size(), 0.0), std::vector<double>(l.bias.size(), 0.0)});
  return grads;
}

}  // namespace speechlift::detail
