/*
 * Copyright 2026 The semibal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SEMIBAL_LOGREG_HPP
#define SEMIBAL_LOGREG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "semibal/dataset.hpp"
#include "semibal/errors.hpp"

namespace semibal {

struct LogRegHyper {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::size_t max_epochs = 2000;
  double tolerance = 1e-7;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
inline double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

namespace detail {

// Four interleaved partial sums, combined in a fixed order.
inline double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += a[j] * b[j];
    s1 += a[j + 1] * b[j + 1];
    s2 += a[j + 2] * b[j + 2];
    s3 += a[j + 3] * b[j + 3];
  }
  for (; j < n; ++j) s0 += a[j] * b[j];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace detail

/// Dense design matrix with 0/1 targets (1 = label 1).
struct TrainingData {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;  // row-major n x d
  std::vector<double> y;

  static TrainingData from(const VectorDataset& ds) {
    if (!is_labeled(ds.role())) throw UsageError("training data must be labeled");
    TrainingData t{ds.size(), ds.dimension(), flatten(ds), {}};
    t.y.reserve(ds.size());
    for (const auto& s : ds) t.y.push_back(static_cast<double>(label_value(*s.label)));
    return t;
  }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * d, d);
  }
};

/// Mean negative log-likelihood plus (l2/2)|w|^2; the bias is not
/// regularized. Fills the gradient when grad_w is non-empty.
inline double logistic_loss(const TrainingData& data, std::span<const double> w, double b,
                            double l2, std::span<double> grad_w = {},
                            double* grad_b = nullptr) {
  const bool want_grad = !grad_w.empty();
  if (want_grad) std::fill(grad_w.begin(), grad_w.end(), 0.0);
  double gb = 0.0;
  double nll = 0.0;
  for (std::size_t i = 0; i < data.n; ++i) {
    const double* xi = data.x.data() + i * data.d;
    const double z = b + detail::dot(w.data(), xi, data.d);
    // One exponential serves both softplus(z) and sigmoid(z).
    const double t = std::exp(-std::abs(z));
    nll += (z > 0 ? z : 0.0) + std::log1p(t) - data.y[i] * z;
    if (want_grad) {
      const double p = z >= 0 ? 1.0 / (1.0 + t) : t / (1.0 + t);
      const double r = p - data.y[i];
      for (std::size_t j = 0; j < data.d; ++j) grad_w[j] += r * xi[j];
      gb += r;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(data.n);
  double reg = 0.0;
  for (std::size_t j = 0; j < data.d; ++j) reg += w[j] * w[j];
  if (want_grad) {
    for (std::size_t j = 0; j < data.d; ++j) grad_w[j] = grad_w[j] * inv_n + l2 * w[j];
    if (grad_b) *grad_b = gb * inv_n;
  }
  return nll * inv_n + 0.5 * l2 * reg;
}

/// Upper bound on the gradient's Lipschitz constant: l2 + |[X 1]|_F^2 / 4n.
/// The Frobenius norm bounds the spectral norm, so 1/bound is a safe step.
inline double lipschitz_bound(const TrainingData& data, double l2) {
  double fro = static_cast<double>(data.n);  // bias column of ones
  for (double v : data.x) fro += v * v;
  return l2 + fro / (4.0 * static_cast<double>(data.n));
}

class LogRegModel {
 public:
  LogRegModel() = default;
  LogRegModel(std::vector<double> weights, double bias)
      : weights_(std::move(weights)), bias_(bias) {
    for (double w : weights_) {
      if (!std::isfinite(w)) throw DataError("model weights must be finite");
    }
    if (!std::isfinite(bias_)) throw DataError("model bias must be finite");
  }

  std::size_t dimension() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  std::size_t epochs_run() const { return epochs_run_; }
  double final_loss() const { return final_loss_; }

  double decision(std::span<const double> x) const {
    if (x.size() != weights_.size()) {
      throw DataError("input has dimension " + std::to_string(x.size()) + ", model has " +
                      std::to_string(weights_.size()));
    }
    return bias_ + detail::dot(weights_.data(), x.data(), x.size());
  }

  /// Probability of label 1.
  double predict_proba(std::span<const double> x) const { return sigmoid(decision(x)); }

  int predict(std::span<const double> x, double threshold = 0.5) const {
    return predict_proba(x) >= threshold ? 1 : 0;
  }

  std::vector<int> predict(const VectorDataset& ds, double threshold = 0.5) const {
    std::vector<int> out;
    out.reserve(ds.size());
    for (const auto& s : ds) out.push_back(predict(s.vector, threshold));
    return out;
  }

  nlohmann::json to_json() const {
    return {{"dimension", dimension()}, {"weights", weights_}, {"bias", bias_},
            {"epochs_run", epochs_run_}, {"final_loss", final_loss_}};
  }

  static LogRegModel from_json(const nlohmann::json& j) {
    try {
      LogRegModel m(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>());
      if (j.contains("dimension") && j["dimension"].get<std::size_t>() != m.dimension()) {
        throw DataError("model dimension does not match its weight count");
      }
      m.epochs_run_ = j.value("epochs_run", std::size_t{0});
      m.final_loss_ = j.value("final_loss", 0.0);
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("bad model json: ") + e.what());
    }
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << to_json().dump(2) << '\n';
  }

  static LogRegModel load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("bad model json: ") + e.what());
    }
    return from_json(j);
  }

 private:
  friend LogRegModel train(const VectorDataset&, const LogRegHyper&, std::uint64_t);

  std::vector<double> weights_;
  double bias_ = 0.0;
  std::size_t epochs_run_ = 0;
  double final_loss_ = 0.0;
};

/// Full-batch gradient descent from zero weights. Stops after max_epochs or
/// when one epoch improves the loss by less than the tolerance. The seed is
/// unused (zero init is deterministic) and kept for a uniform interface.
inline LogRegModel train(const VectorDataset& lb, const LogRegHyper& hyper,
                         std::uint64_t /*seed*/ = 0) {
  if (lb.size() < 2) throw UsageError("training needs at least 2 samples");
  if (lb.count(Label::kMajority) == 0 || lb.count(Label::kMinority) == 0) {
    throw UsageError("training set holds a single class");
  }
  const TrainingData data = TrainingData::from(lb);
  std::vector<double> w(data.d, 0.0), g(data.d, 0.0);
  double b = 0.0, gb = 0.0;
  double loss = logistic_loss(data, w, b, hyper.l2, g, &gb);
  std::size_t epoch = 0;
  while (epoch < hyper.max_epochs) {
    for (std::size_t j = 0; j < data.d; ++j) w[j] -= hyper.learning_rate * g[j];
    b -= hyper.learning_rate * gb;
    ++epoch;
    const double next = logistic_loss(data, w, b, hyper.l2, g, &gb);
    if (!std::isfinite(next)) {
      throw DataError("training loss became non-finite at epoch " + std::to_string(epoch));
    }
    const double improvement = loss - next;
    loss = next;
    if (improvement < hyper.tolerance) break;
  }
  LogRegModel model(std::move(w), b);
  model.epochs_run_ = epoch;
  model.final_loss_ = loss;
  return model;
}

}  // namespace semibal

#endif  // SEMIBAL_LOGREG_HPP
