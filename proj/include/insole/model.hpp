#pragma once

#include "insole/common.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace insole {

enum class MaskFusion { sum, max };

struct ModelConfig {
  int n_channels = kChannels;
  int window = 20;
  int hidden = 512;
  int mask_hidden = 9;
  int n_layers = 2;
  int n_heads = 4;
  int ffn_dim = 2560;
  int bio_dim = kBioDims;
  int film_hidden = 64;
  int head_hidden = 128;
  int n_muscles = kMuscles;
  double dropout = 0.1;
  double lambda_smooth = 0.1;
  bool use_mask = true;
  bool use_film = true;
  MaskFusion fusion = MaskFusion::sum;
  std::uint64_t seed = 7;

  void validate() const;
  /// Closed-form count of learnable scalars.
  std::int64_t parameter_count() const;
  /// Forward-pass floating point operations for one window (2 per multiply-add).
  double flops_per_window() const;
};

/// Dense layer applied to row-major token batches: y = x * weight + bias.
template <typename Scalar>
struct Linear {
  Mat<Scalar> weight;  // in x out
  Mat<Scalar> bias;    // 1 x out
};

template <typename Scalar>
struct LayerNormParams {
  Mat<Scalar> gain;  // 1 x D
  Mat<Scalar> bias;  // 1 x D
};

template <typename Scalar>
struct EncoderLayerParams {
  LayerNormParams<Scalar> norm1;
  Linear<Scalar> query, key, value, out;
  LayerNormParams<Scalar> norm2;
  Linear<Scalar> ffn1, ffn2;
};

enum class TensorKind { weight, bias, norm_gain, positional };

template <typename Scalar>
struct ModelParams {
  Linear<Scalar> mask1, mask2;
  Linear<Scalar> embed;
  Mat<Scalar> pos;  // W x D
  Linear<Scalar> film1, film2;
  std::vector<EncoderLayerParams<Scalar>> layers;
  Linear<Scalar> head1, head2;

  /// Shapes from `cfg`, all entries zero.
  static ModelParams zeros(const ModelConfig& cfg);
  /// Fan-in uniform weights, zero biases, N(0, 0.02) positions, identity FiLM.
  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);

  /// Visits every tensor in checkpoint order as f(name, tensor, kind).
  template <typename F>
  void visit(F&& f);
  template <typename F>
  void visit(F&& f) const;

  std::int64_t size() const;

  template <typename Other>
  ModelParams<Other> cast() const;
};

/// Intermediates retained by `forward` for the backward pass. Token rows are
/// ordered (window, time): row b*W + t.
template <typename Scalar>
struct ForwardCache {
  struct Norm {
    Mat<Scalar> xhat;
    Vec<Scalar> rstd;
  };
  struct Layer {
    Mat<Scalar> input;
    Norm norm1;
    Mat<Scalar> a, q, k, v;
    Mat<Scalar> probs;  // (B * heads * W) x W
    Mat<Scalar> attn_concat;
    Mat<Scalar> drop1;  // empty when dropout is inactive
    Mat<Scalar> h1;
    Norm norm2;
    Mat<Scalar> c, ffn_pre, ffn_act;
    Mat<Scalar> drop2;
  };

  int batch = 0;
  int window = 0;
  Mat<Scalar> x;  // N x C
  Mat<Scalar> bio;
  Mat<Scalar> z_avg, z_max;
  Eigen::MatrixXi argmax;
  Mat<Scalar> mask_pre_avg, mask_pre_max, mask_out_avg, mask_out_max;
  Mat<Scalar> mask;      // B x C, ones when the mask is disabled
  Mat<Scalar> x_masked;  // N x C
  Mat<Scalar> embedded;  // N x D
  Mat<Scalar> film_pre, film_out;  // B x Fh, B x 2D
  Mat<Scalar> conditioned;  // N x D, after FiLM
  std::vector<Layer> layers;
  Mat<Scalar> encoded;  // N x D
  Mat<Scalar> head_pre;
  Mat<Scalar> output;  // N x M in (0,1)
};

/// Packs per-window C x W matrices into an (B*W) x C token matrix.
template <typename Scalar>
Mat<Scalar> pack_tokens(const std::vector<const MatXd*>& windows);

/// Inverse of pack_tokens for one window: returns the M x W block of window b.
template <typename Scalar>
Mat<Scalar> unpack_window(const Mat<Scalar>& tokens, int window, int b);

/// Importance mask for a single C x W window.
template <typename Scalar>
Vec<Scalar> region_importance_mask(const ModelParams<Scalar>& params, const ModelConfig& cfg, const Mat<Scalar>& x);

/// Runs the network on a token batch. `x` is (B*W) x C, `bio` is B x bio_dim.
/// Dropout is active only when `dropout_rng` is non-null.
template <typename Scalar>
Mat<Scalar> forward(const ModelParams<Scalar>& params, const ModelConfig& cfg, const Mat<Scalar>& x,
                    const Mat<Scalar>& bio, ForwardCache<Scalar>* cache = nullptr,
                    std::mt19937_64* dropout_rng = nullptr);

/// Single-window convenience: x is C x W, returns M x W.
template <typename Scalar>
Mat<Scalar> forward_window(const ModelParams<Scalar>& params, const ModelConfig& cfg, const Mat<Scalar>& x,
                           const Vec<Scalar>& bio);

/// Accumulates parameter gradients given dL/d(output).
template <typename Scalar>
void backward(const ModelParams<Scalar>& params, const ModelConfig& cfg, const ForwardCache<Scalar>& cache,
              const Mat<Scalar>& d_output, ModelParams<Scalar>& grads);

template <typename Scalar>
struct LossAndGrad {
  Scalar loss{};
  ModelParams<Scalar> grads;
};

/// Mean total loss over the batch and its exact gradient for every tensor.
/// `y` is packed like `x`. Throws NumericError on non-finite loss or gradient.
template <typename Scalar>
LossAndGrad<Scalar> gradients(const ModelParams<Scalar>& params, const ModelConfig& cfg, const Mat<Scalar>& x,
                              const Mat<Scalar>& bio, const Mat<Scalar>& y, double lambda_smooth,
                              std::mt19937_64* dropout_rng = nullptr);

// ---- template definitions --------------------------------------------------

template <typename Scalar>
template <typename F>
void ModelParams<Scalar>::visit(F&& f) {
  auto linear = [&](const std::string& name, Linear<Scalar>& l) {
    f(name + ".weight", l.weight, TensorKind::weight);
    f(name + ".bias", l.bias, TensorKind::bias);
  };
  auto norm = [&](const std::string& name, LayerNormParams<Scalar>& n) {
    f(name + ".gain", n.gain, TensorKind::norm_gain);
    f(name + ".bias", n.bias, TensorKind::bias);
  };
  linear("mask1", mask1);
  linear("mask2", mask2);
  linear("embed", embed);
  f(std::string("pos"), pos, TensorKind::positional);
  linear("film1", film1);
  linear("film2", film2);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string p = "layers." + std::to_string(i) + ".";
    auto& l = layers[i];
    norm(p + "norm1", l.norm1);
    linear(p + "query", l.query);
    linear(p + "key", l.key);
    linear(p + "value", l.value);
    linear(p + "out", l.out);
    norm(p + "norm2", l.norm2);
    linear(p + "ffn1", l.ffn1);
    linear(p + "ffn2", l.ffn2);
  }
  linear("head1", head1);
  linear("head2", head2);
}

template <typename Scalar>
template <typename F>
void ModelParams<Scalar>::visit(F&& f) const {
  const_cast<ModelParams*>(this)->visit(
      [&](const std::string& name, Mat<Scalar>& t, TensorKind kind) { f(name, static_cast<const Mat<Scalar>&>(t), kind); });
}

template <typename Scalar>
std::int64_t ModelParams<Scalar>::size() const {
  std::int64_t n = 0;
  visit([&](const std::string&, const Mat<Scalar>& t, TensorKind) { n += t.size(); });
  return n;
}

template <typename Scalar>
template <typename Other>
ModelParams<Other> ModelParams<Scalar>::cast() const {
  ModelParams<Other> out;
  out.layers.resize(layers.size());
  std::vector<const Mat<Scalar>*> src;
  visit([&](const std::string&, const Mat<Scalar>& t, TensorKind) { src.push_back(&t); });
  std::size_t i = 0;
  out.visit([&](const std::string&, Mat<Other>& t, TensorKind) { t = src[i++]->template cast<Other>(); });
  return out;
}

}  // namespace insole
