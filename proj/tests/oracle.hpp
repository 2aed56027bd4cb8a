#pragma once

// Independent test-side checks shared by the unit tests and the acceptance run.

#include "insole/loss.hpp"
#include "insole/model.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace insole::testing {

inline ModelConfig toy_config() {
  ModelConfig cfg;
  cfg.hidden = 8;
  cfg.window = 4;
  cfg.n_heads = 2;
  cfg.ffn_dim = 16;
  cfg.film_hidden = 6;
  cfg.head_hidden = 12;
  cfg.dropout = 0.0;
  return cfg;
}

/// Initial weights plus noise on every tensor, so FiLM and biases are live.
inline ModelParams<double> perturbed_params(const ModelConfig& cfg, std::uint64_t seed, double sigma = 0.2) {
  auto p = ModelParams<double>::init(cfg, seed);
  std::mt19937_64 rng(seed * 7919 + 1);
  std::normal_distribution<double> n(0.0, sigma);
  p.visit([&](const std::string&, Mat<double>& t, TensorKind) { t = t.unaryExpr([&](double v) { return v + n(rng); }); });
  return p;
}

struct ToyBatch {
  Mat<double> x, bio, y;
};

inline ToyBatch toy_batch(const ModelConfig& cfg, int batch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.05, 0.95), b(0.0, 1.0);
  ToyBatch out;
  out.x = Mat<double>::NullaryExpr(batch * cfg.window, cfg.n_channels, [&] { return u(rng); });
  out.bio = Mat<double>::NullaryExpr(batch, cfg.bio_dim, [&] { return b(rng); });
  out.y = Mat<double>::NullaryExpr(batch * cfg.window, cfg.n_muscles, [&] { return a(rng); });
  return out;
}

struct TensorCheck {
  std::string name;
  double rel_error = 0.0;
};

/// Central differences of the batch loss against the analytic gradient.
/// Relative error per tensor is |g_a - g_fd| / max(|g_a| + |g_fd|, 1e-6). The
/// floor covers tensors whose exact gradient is zero (the key bias only shifts
/// each softmax row by a constant), where the ratio is otherwise pure rounding.
inline std::vector<TensorCheck> finite_difference_check(const ModelParams<double>& params, const ModelConfig& cfg,
                                                        const ToyBatch& batch, double lambda, double eps = 1e-5) {
  const auto analytic = gradients(params, cfg, batch.x, batch.bio, batch.y, lambda);
  auto loss_at = [&](const ModelParams<double>& p) {
    const Mat<double> pred = forward(p, cfg, batch.x, batch.bio);
    return batch_loss<double>(pred, batch.y, cfg.window, lambda, nullptr);
  };

  std::vector<const Mat<double>*> grads;
  analytic.grads.visit([&](const std::string&, const Mat<double>& g, TensorKind) { grads.push_back(&g); });

  std::vector<TensorCheck> out;
  ModelParams<double> probe = params;
  std::size_t index = 0;
  probe.visit([&](const std::string& name, Mat<double>& t, TensorKind) {
    const Mat<double>& g = *grads[index++];
    Mat<double> fd(t.rows(), t.cols());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double orig = t.data()[i];
      t.data()[i] = orig + eps;
      const double up = loss_at(probe);
      t.data()[i] = orig - eps;
      const double down = loss_at(probe);
      t.data()[i] = orig;
      fd.data()[i] = (up - down) / (2.0 * eps);
    }
    const double denom = std::max(g.norm() + fd.norm(), 1e-6);
    out.push_back({name, (g - fd).norm() / denom});
  });
  return out;
}

}  // namespace insole::testing
