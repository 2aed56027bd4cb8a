#include "insole/model.hpp"

#include "insole/loss.hpp"

#include <cmath>

namespace insole {

void ModelConfig::validate() const {
  for (int v : {n_channels, window, hidden, mask_hidden, n_layers, n_heads, ffn_dim, bio_dim, film_hidden,
                head_hidden, n_muscles}) {
    if (v < 1) throw ConfigError("model: all dimensions must be >= 1");
  }
  if (window < 2) throw ConfigError("model: window must be >= 2");
  if (hidden % n_heads != 0) throw ConfigError("model: hidden must be divisible by n_heads");
  if (lambda_smooth < 0.0) throw ConfigError("model: lambda_smooth must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model: dropout must lie in [0,1)");
}

std::int64_t ModelConfig::parameter_count() const {
  auto lin = [](std::int64_t in, std::int64_t out) { return in * out + out; };
  const std::int64_t d = hidden;
  std::int64_t n = lin(n_channels, mask_hidden) + lin(mask_hidden, n_channels);
  n += lin(n_channels, d);
  n += static_cast<std::int64_t>(window) * d;
  n += lin(bio_dim, film_hidden) + lin(film_hidden, 2 * d);
  const std::int64_t layer = 4 * lin(d, d) + lin(d, ffn_dim) + lin(ffn_dim, d) + 4 * d;
  n += n_layers * layer;
  n += lin(d, head_hidden) + lin(head_hidden, n_muscles);
  return n;
}

double ModelConfig::flops_per_window() const {
  const double w = window, c = n_channels, d = hidden;
  double macs = 2.0 * (c * mask_hidden + mask_hidden * c);  // shared MLP on both pooled vectors
  macs += w * c * d;                                          // embedding
  macs += bio_dim * film_hidden + film_hidden * 2.0 * d;      // FiLM generator
  const double per_layer = w * 4.0 * d * d                    // q, k, v, out projections
                           + 2.0 * w * w * d                  // scores and weighted values
                           + 2.0 * w * d * ffn_dim;           // feed-forward
  macs += n_layers * per_layer;
  macs += w * (d * head_hidden + head_hidden * static_cast<double>(n_muscles));
  return 2.0 * macs;
}

namespace {

template <typename S>
Linear<S> make_linear(int in, int out) {
  return {Mat<S>::Zero(in, out), Mat<S>::Zero(1, out)};
}

template <typename S>
LayerNormParams<S> make_norm(int d) {
  return {Mat<S>::Zero(1, d), Mat<S>::Zero(1, d)};
}

template <typename S>
Mat<S> affine(const Mat<S>& x, const Linear<S>& l) {
  Mat<S> y(x.rows(), l.weight.cols());
  y.noalias() = x * l.weight;
  y.rowwise() += l.bias.row(0);
  return y;
}

template <typename S>
void affine_backward(const Mat<S>& x, const Mat<S>& dy, Linear<S>& g) {
  g.weight.noalias() += x.transpose() * dy;
  g.bias += dy.colwise().sum();
}

template <typename S>
Mat<S> relu(const Mat<S>& x) {
  return x.cwiseMax(S(0));
}

template <typename S>
Mat<S> relu_grad(const Mat<S>& dy, const Mat<S>& pre) {
  return (pre.array() > S(0)).select(dy, S(0));
}

template <typename S>
Mat<S> sigmoid(const Mat<S>& x) {
  return (S(1) + (-x.array()).exp()).inverse().matrix();
}

constexpr double kNormEps = 1e-5;

template <typename S>
Mat<S> layer_norm(const Mat<S>& x, const LayerNormParams<S>& p, typename ForwardCache<S>::Norm* cache) {
  const auto d = static_cast<S>(x.cols());
  const Vec<S> mean = x.rowwise().sum() / d;
  Mat<S> centered = x.colwise() - mean;
  const Vec<S> var = centered.array().square().rowwise().sum() / d;
  const Vec<S> rstd = (var.array() + S(kNormEps)).rsqrt();
  Mat<S> xhat = centered.array().colwise() * rstd.array();
  Mat<S> y = xhat.array().rowwise() * p.gain.row(0).array();
  y.rowwise() += p.bias.row(0);
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->rstd = rstd;
  }
  return y;
}

template <typename S>
Mat<S> layer_norm_backward(const Mat<S>& dy, const LayerNormParams<S>& p, const typename ForwardCache<S>::Norm& c,
                           LayerNormParams<S>& g) {
  g.gain += (dy.array() * c.xhat.array()).colwise().sum().matrix();
  g.bias += dy.colwise().sum();
  const Mat<S> dxhat = dy.array().rowwise() * p.gain.row(0).array();
  const auto d = static_cast<S>(dy.cols());
  const Vec<S> sum_dxhat = dxhat.rowwise().sum();
  const Vec<S> sum_dxhat_xhat = (dxhat.array() * c.xhat.array()).rowwise().sum();
  Mat<S> dx = (d * dxhat.array()).colwise() - sum_dxhat.array();
  dx.array() -= c.xhat.array().colwise() * sum_dxhat_xhat.array();
  dx.array().colwise() *= c.rstd.array() / d;
  return dx;
}

template <typename S>
Mat<S> dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const S scale = static_cast<S>(1.0 / (1.0 - rate));
  Mat<S> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = keep(rng) ? scale : S(0);
  }
  return m;
}

template <typename S>
void check_input(const ModelConfig& cfg, const Mat<S>& x, const Mat<S>& bio) {
  if (x.cols() != cfg.n_channels || x.rows() == 0 || x.rows() % cfg.window != 0) {
    throw ConfigError("forward: input must be (B*W) x n_channels");
  }
  if (bio.rows() != x.rows() / cfg.window || bio.cols() != cfg.bio_dim) {
    throw ConfigError("forward: bio must be B x bio_dim");
  }
  if (!x.allFinite() || !bio.allFinite()) throw NumericError("forward: non-finite input");
}

}  // namespace

template <typename S>
ModelParams<S> ModelParams<S>::zeros(const ModelConfig& cfg) {
  cfg.validate();
  ModelParams p;
  const int d = cfg.hidden;
  p.mask1 = make_linear<S>(cfg.n_channels, cfg.mask_hidden);
  p.mask2 = make_linear<S>(cfg.mask_hidden, cfg.n_channels);
  p.embed = make_linear<S>(cfg.n_channels, d);
  p.pos = Mat<S>::Zero(cfg.window, d);
  p.film1 = make_linear<S>(cfg.bio_dim, cfg.film_hidden);
  p.film2 = make_linear<S>(cfg.film_hidden, 2 * d);
  p.layers.resize(static_cast<std::size_t>(cfg.n_layers));
  for (auto& l : p.layers) {
    l.norm1 = make_norm<S>(d);
    l.query = make_linear<S>(d, d);
    l.key = make_linear<S>(d, d);
    l.value = make_linear<S>(d, d);
    l.out = make_linear<S>(d, d);
    l.norm2 = make_norm<S>(d);
    l.ffn1 = make_linear<S>(d, cfg.ffn_dim);
    l.ffn2 = make_linear<S>(cfg.ffn_dim, d);
  }
  p.head1 = make_linear<S>(d, cfg.head_hidden);
  p.head2 = make_linear<S>(cfg.head_hidden, cfg.n_muscles);
  return p;
}

// Both pooled branches add this bias, so the mask starts near sigmoid(3) ~ 0.95.
constexpr double kMaskOpenBias = 1.5;

template <typename S>
ModelParams<S> ModelParams<S>::init(const ModelConfig& cfg, std::uint64_t seed) {
  ModelParams p = zeros(cfg);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.02);
  p.visit([&](const std::string& name, Mat<S>& t, TensorKind kind) {
    switch (kind) {
      case TensorKind::weight: {
        if (name == "film2.weight") break;  // identity conditioning at start
        const double bound = 1.0 / std::sqrt(static_cast<double>(t.rows()));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (Eigen::Index j = 0; j < t.cols(); ++j)
          for (Eigen::Index i = 0; i < t.rows(); ++i) t(i, j) = static_cast<S>(u(rng));
        break;
      }
      case TensorKind::norm_gain:
        t.setOnes();
        break;
      case TensorKind::positional:
        for (Eigen::Index j = 0; j < t.cols(); ++j)
          for (Eigen::Index i = 0; i < t.rows(); ++i) t(i, j) = static_cast<S>(normal(rng));
        break;
      case TensorKind::bias:
        if (name == "mask2.bias") t.setConstant(static_cast<S>(kMaskOpenBias));
        break;
    }
  });
  return p;
}

template <typename S>
Mat<S> pack_tokens(const std::vector<const MatXd*>& windows) {
  if (windows.empty()) return {};
  const auto c = windows.front()->rows();
  const auto w = windows.front()->cols();
  Mat<S> out(static_cast<Eigen::Index>(windows.size()) * w, c);
  for (std::size_t b = 0; b < windows.size(); ++b) {
    if (windows[b]->rows() != c || windows[b]->cols() != w) throw ConfigError("pack_tokens: ragged windows");
    out.middleRows(static_cast<Eigen::Index>(b) * w, w) = windows[b]->transpose().template cast<S>();
  }
  return out;
}

template <typename S>
Mat<S> unpack_window(const Mat<S>& tokens, int window, int b) {
  return tokens.middleRows(static_cast<Eigen::Index>(b) * window, window).transpose();
}

template <typename S>
Vec<S> region_importance_mask(const ModelParams<S>& params, const ModelConfig& cfg, const Mat<S>& x) {
  if (x.rows() != cfg.n_channels || x.cols() != cfg.window) throw ConfigError("mask: input must be C x W");
  if (!x.allFinite()) throw NumericError("mask: non-finite input");
  const Mat<S> z_avg = x.rowwise().mean().transpose();
  const Mat<S> z_max = x.rowwise().maxCoeff().transpose();
  const Mat<S> a = affine(relu(affine(z_avg, params.mask1)), params.mask2);
  const Mat<S> m = affine(relu(affine(z_max, params.mask1)), params.mask2);
  const Mat<S> logits = cfg.fusion == MaskFusion::sum ? Mat<S>(a + m) : Mat<S>(a.cwiseMax(m));
  return sigmoid(logits).transpose();
}

template <typename S>
Mat<S> forward(const ModelParams<S>& params, const ModelConfig& cfg, const Mat<S>& x, const Mat<S>& bio,
               ForwardCache<S>* cache, std::mt19937_64* dropout_rng) {
  check_input(cfg, x, bio);
  const int w = cfg.window;
  const int d = cfg.hidden;
  const auto batch = static_cast<int>(x.rows() / w);
  const bool training = dropout_rng != nullptr && cfg.dropout > 0.0;

  ForwardCache<S> local;
  ForwardCache<S>& c = cache ? *cache : local;
  c.batch = batch;
  c.window = w;
  c.x = x;
  c.bio = bio;

  // Region importance: pool over time, shared MLP, fuse, sigmoid.
  if (cfg.use_mask) {
    c.z_avg.resize(batch, cfg.n_channels);
    c.z_max.resize(batch, cfg.n_channels);
    c.argmax.resize(batch, cfg.n_channels);
    for (int b = 0; b < batch; ++b) {
      const auto xb = x.middleRows(static_cast<Eigen::Index>(b) * w, w);
      for (int ch = 0; ch < cfg.n_channels; ++ch) {
        Eigen::Index t_max = 0;
        c.z_max(b, ch) = xb.col(ch).maxCoeff(&t_max);
        c.argmax(b, ch) = static_cast<int>(t_max);
        c.z_avg(b, ch) = xb.col(ch).mean();
      }
    }
    c.mask_pre_avg = affine(c.z_avg, params.mask1);
    c.mask_pre_max = affine(c.z_max, params.mask1);
    c.mask_out_avg = affine(relu(c.mask_pre_avg), params.mask2);
    c.mask_out_max = affine(relu(c.mask_pre_max), params.mask2);
    const Mat<S> logits = cfg.fusion == MaskFusion::sum ? Mat<S>(c.mask_out_avg + c.mask_out_max)
                                                        : Mat<S>(c.mask_out_avg.cwiseMax(c.mask_out_max));
    c.mask = sigmoid(logits);
    c.x_masked.resize(x.rows(), x.cols());
    for (int b = 0; b < batch; ++b) {
      c.x_masked.middleRows(static_cast<Eigen::Index>(b) * w, w) =
          x.middleRows(static_cast<Eigen::Index>(b) * w, w).array().rowwise() * c.mask.row(b).array();
    }
  } else {
    c.mask = Mat<S>::Ones(batch, cfg.n_channels);
    c.x_masked = x;
  }

  c.embedded = affine(c.x_masked, params.embed);

  // FiLM: X_bio = (1 + dgamma) * X + beta, per window.
  if (cfg.use_film) {
    c.film_pre = affine(bio, params.film1);
    c.film_out = affine(relu(c.film_pre), params.film2);
    c.conditioned.resize(c.embedded.rows(), d);
    for (int b = 0; b < batch; ++b) {
      const auto gamma = (c.film_out.row(b).leftCols(d).array() + S(1));
      const auto beta = c.film_out.row(b).rightCols(d).array();
      c.conditioned.middleRows(static_cast<Eigen::Index>(b) * w, w) =
          (c.embedded.middleRows(static_cast<Eigen::Index>(b) * w, w).array().rowwise() * gamma).rowwise() + beta;
    }
  } else {
    c.conditioned = c.embedded;
  }

  Mat<S> h = c.conditioned;
  for (int b = 0; b < batch; ++b) h.middleRows(static_cast<Eigen::Index>(b) * w, w) += params.pos;

  const int heads = cfg.n_heads;
  const int dh = d / heads;
  const S scale = S(1) / std::sqrt(static_cast<S>(dh));
  c.layers.resize(params.layers.size());
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    const auto& p = params.layers[li];
    auto& lc = c.layers[li];
    lc.input = h;
    lc.a = layer_norm(h, p.norm1, &lc.norm1);
    lc.q = affine(lc.a, p.query);
    lc.k = affine(lc.a, p.key);
    lc.v = affine(lc.a, p.value);
    lc.probs.resize(static_cast<Eigen::Index>(batch) * heads * w, w);
    lc.attn_concat.resize(h.rows(), d);
    for (int b = 0; b < batch; ++b) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(b) * w;
      for (int hd = 0; hd < heads; ++hd) {
        const auto qb = lc.q.block(r0, hd * dh, w, dh);
        const auto kb = lc.k.block(r0, hd * dh, w, dh);
        const auto vb = lc.v.block(r0, hd * dh, w, dh);
        Mat<S> scores = (qb * kb.transpose()) * scale;
        const Vec<S> row_max = scores.rowwise().maxCoeff();
        scores = (scores.colwise() - row_max).array().exp();
        const Vec<S> row_sum = scores.rowwise().sum();
        scores.array().colwise() /= row_sum.array();
        lc.probs.middleRows((static_cast<Eigen::Index>(b) * heads + hd) * w, w) = scores;
        lc.attn_concat.block(r0, hd * dh, w, dh).noalias() = scores * vb;
      }
    }
    Mat<S> attn = affine(lc.attn_concat, p.out);
    if (training) {
      lc.drop1 = dropout_mask<S>(attn.rows(), attn.cols(), cfg.dropout, *dropout_rng);
      attn.array() *= lc.drop1.array();
    } else {
      lc.drop1.resize(0, 0);
    }
    lc.h1 = h + attn;
    lc.c = layer_norm(lc.h1, p.norm2, &lc.norm2);
    lc.ffn_pre = affine(lc.c, p.ffn1);
    lc.ffn_act = relu(lc.ffn_pre);
    Mat<S> ff = affine(lc.ffn_act, p.ffn2);
    if (training) {
      lc.drop2 = dropout_mask<S>(ff.rows(), ff.cols(), cfg.dropout, *dropout_rng);
      ff.array() *= lc.drop2.array();
    } else {
      lc.drop2.resize(0, 0);
    }
    h = lc.h1 + ff;
  }
  c.encoded = std::move(h);
  c.head_pre = affine(c.encoded, params.head1);
  c.output = sigmoid(affine(relu(c.head_pre), params.head2));
  return c.output;
}

template <typename S>
Mat<S> forward_window(const ModelParams<S>& params, const ModelConfig& cfg, const Mat<S>& x, const Vec<S>& bio) {
  const Mat<S> tokens = x.transpose();
  const Mat<S> b = bio.transpose();
  return forward(params, cfg, tokens, b).transpose();
}

template <typename S>
void backward(const ModelParams<S>& params, const ModelConfig& cfg, const ForwardCache<S>& c,
              const Mat<S>& d_output, ModelParams<S>& g) {
  const int w = c.window;
  const int batch = c.batch;
  const int d = cfg.hidden;

  // Head.
  const Mat<S> d_logits = d_output.array() * c.output.array() * (S(1) - c.output.array());
  const Mat<S> head_act = relu(c.head_pre);
  affine_backward(head_act, d_logits, g.head2);
  const Mat<S> d_head_pre = relu_grad(Mat<S>(d_logits * params.head2.weight.transpose()), c.head_pre);
  affine_backward(c.encoded, d_head_pre, g.head1);
  Mat<S> dh = d_head_pre * params.head1.weight.transpose();

  const int heads = cfg.n_heads;
  const int dh_size = d / heads;
  const S scale = S(1) / std::sqrt(static_cast<S>(dh_size));
  for (std::size_t li = params.layers.size(); li-- > 0;) {
    const auto& p = params.layers[li];
    const auto& lc = c.layers[li];
    auto& gl = g.layers[li];

    // Feed-forward residual branch.
    Mat<S> d_ff = dh;
    if (lc.drop2.size() > 0) d_ff.array() *= lc.drop2.array();
    affine_backward(lc.ffn_act, d_ff, gl.ffn2);
    const Mat<S> d_ffn_pre = relu_grad(Mat<S>(d_ff * p.ffn2.weight.transpose()), lc.ffn_pre);
    affine_backward(lc.c, d_ffn_pre, gl.ffn1);
    const Mat<S> d_c = d_ffn_pre * p.ffn1.weight.transpose();
    Mat<S> d_h1 = dh + layer_norm_backward(d_c, p.norm2, lc.norm2, gl.norm2);

    // Attention residual branch.
    Mat<S> d_attn = d_h1;
    if (lc.drop1.size() > 0) d_attn.array() *= lc.drop1.array();
    affine_backward(lc.attn_concat, d_attn, gl.out);
    const Mat<S> d_concat = d_attn * p.out.weight.transpose();
    Mat<S> dq(d_concat.rows(), d), dk(d_concat.rows(), d), dv(d_concat.rows(), d);
    for (int b = 0; b < batch; ++b) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(b) * w;
      for (int hd = 0; hd < heads; ++hd) {
        const auto probs = lc.probs.middleRows((static_cast<Eigen::Index>(b) * heads + hd) * w, w);
        const auto d_o = d_concat.block(r0, hd * dh_size, w, dh_size);
        const auto qb = lc.q.block(r0, hd * dh_size, w, dh_size);
        const auto kb = lc.k.block(r0, hd * dh_size, w, dh_size);
        const auto vb = lc.v.block(r0, hd * dh_size, w, dh_size);
        const Mat<S> d_probs = d_o * vb.transpose();
        dv.block(r0, hd * dh_size, w, dh_size).noalias() = probs.transpose() * d_o;
        const Vec<S> row_dot = (d_probs.array() * probs.array()).rowwise().sum();
        const Mat<S> d_scores = (probs.array() * (d_probs.colwise() - row_dot).array()) * scale;
        dq.block(r0, hd * dh_size, w, dh_size).noalias() = d_scores * kb;
        dk.block(r0, hd * dh_size, w, dh_size).noalias() = d_scores.transpose() * qb;
      }
    }
    affine_backward(lc.a, dq, gl.query);
    affine_backward(lc.a, dk, gl.key);
    affine_backward(lc.a, dv, gl.value);
    Mat<S> d_a = dq * p.query.weight.transpose();
    d_a.noalias() += dk * p.key.weight.transpose();
    d_a.noalias() += dv * p.value.weight.transpose();
    dh = d_h1 + layer_norm_backward(d_a, p.norm1, lc.norm1, gl.norm1);
  }

  // Positional table receives the summed gradient over windows.
  for (int b = 0; b < batch; ++b) g.pos += dh.middleRows(static_cast<Eigen::Index>(b) * w, w);

  Mat<S> d_embedded;
  if (cfg.use_film) {
    d_embedded.resize(dh.rows(), d);
    Mat<S> d_film_out(batch, 2 * d);
    for (int b = 0; b < batch; ++b) {
      const Eigen::Index r0 = static_cast<Eigen::Index>(b) * w;
      const auto dxb = dh.middleRows(r0, w);
      const auto gamma = (c.film_out.row(b).leftCols(d).array() + S(1));
      d_embedded.middleRows(r0, w) = dxb.array().rowwise() * gamma;
      d_film_out.row(b).leftCols(d) = (dxb.array() * c.embedded.middleRows(r0, w).array()).colwise().sum();
      d_film_out.row(b).rightCols(d) = dxb.colwise().sum();
    }
    affine_backward(Mat<S>(relu(c.film_pre)), d_film_out, g.film2);
    const Mat<S> d_film_pre = relu_grad(Mat<S>(d_film_out * params.film2.weight.transpose()), c.film_pre);
    affine_backward(c.bio, d_film_pre, g.film1);
  } else {
    d_embedded = std::move(dh);
  }

  affine_backward(c.x_masked, d_embedded, g.embed);
  if (!cfg.use_mask) return;

  const Mat<S> d_x_masked = d_embedded * params.embed.weight.transpose();
  Mat<S> d_mask(batch, cfg.n_channels);
  for (int b = 0; b < batch; ++b) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(b) * w;
    d_mask.row(b) = (d_x_masked.middleRows(r0, w).array() * c.x.middleRows(r0, w).array()).colwise().sum();
  }
  const Mat<S> d_logits_mask = d_mask.array() * c.mask.array() * (S(1) - c.mask.array());
  Mat<S> d_out_avg = d_logits_mask;
  Mat<S> d_out_max = d_logits_mask;
  if (cfg.fusion == MaskFusion::max) {
    const auto avg_wins = (c.mask_out_avg.array() >= c.mask_out_max.array());
    d_out_avg = avg_wins.select(d_logits_mask, S(0));
    d_out_max = avg_wins.select(S(0), d_logits_mask);
  }
  affine_backward(Mat<S>(relu(c.mask_pre_avg)), d_out_avg, g.mask2);
  affine_backward(Mat<S>(relu(c.mask_pre_max)), d_out_max, g.mask2);
  const Mat<S> d_pre_avg = relu_grad(Mat<S>(d_out_avg * params.mask2.weight.transpose()), c.mask_pre_avg);
  const Mat<S> d_pre_max = relu_grad(Mat<S>(d_out_max * params.mask2.weight.transpose()), c.mask_pre_max);
  affine_backward(c.z_avg, d_pre_avg, g.mask1);
  affine_backward(c.z_max, d_pre_max, g.mask1);
}

template <typename S>
LossAndGrad<S> gradients(const ModelParams<S>& params, const ModelConfig& cfg, const Mat<S>& x, const Mat<S>& bio,
                         const Mat<S>& y, double lambda_smooth, std::mt19937_64* dropout_rng) {
  ForwardCache<S> cache;
  const Mat<S> pred = forward(params, cfg, x, bio, &cache, dropout_rng);
  Mat<S> d_pred;
  LossAndGrad<S> out;
  out.loss = batch_loss(pred, y, cfg.window, lambda_smooth, &d_pred);
  if (!std::isfinite(static_cast<double>(out.loss))) throw NumericError("gradients: non-finite loss");
  out.grads = ModelParams<S>::zeros(cfg);
  backward(params, cfg, cache, d_pred, out.grads);
  out.grads.visit([](const std::string& name, const Mat<S>& t, TensorKind) {
    if (!t.allFinite()) throw NumericError("gradients: non-finite gradient in " + name);
  });
  return out;
}

#define INSOLE_INSTANTIATE_MODEL(S)                                                                              \
  template struct ModelParams<S>;                                                                                \
  template Mat<S> pack_tokens<S>(const std::vector<const MatXd*>&);                                              \
  template Mat<S> unpack_window<S>(const Mat<S>&, int, int);                                                     \
  template Vec<S> region_importance_mask<S>(const ModelParams<S>&, const ModelConfig&, const Mat<S>&);          \
  template Mat<S> forward<S>(const ModelParams<S>&, const ModelConfig&, const Mat<S>&, const Mat<S>&,            \
                             ForwardCache<S>*, std::mt19937_64*);                                                \
  template Mat<S> forward_window<S>(const ModelParams<S>&, const ModelConfig&, const Mat<S>&, const Vec<S>&);   \
  template void backward<S>(const ModelParams<S>&, const ModelConfig&, const ForwardCache<S>&, const Mat<S>&,    \
                            ModelParams<S>&);                                                                    \
  template LossAndGrad<S> gradients<S>(const ModelParams<S>&, const ModelConfig&, const Mat<S>&, const Mat<S>&,  \
                                       const Mat<S>&, double, std::mt19937_64*);

INSOLE_INSTANTIATE_MODEL(float)
INSOLE_INSTANTIATE_MODEL(double)

#undef INSOLE_INSTANTIATE_MODEL

}  // namespace insole
