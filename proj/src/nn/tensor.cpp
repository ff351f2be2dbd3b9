#include "selfprompt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt::nn {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw_validation("matrix value count mismatch");
}

Matrix Matrix::uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (auto& v : m.values_) v = dist(rng);
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Tensor3::Tensor3(std::size_t depth, std::size_t tokens, std::size_t channels, double fill)
    : depth_(depth), tokens_(tokens), channels_(channels), values_(depth * tokens * channels, fill) {
  if (depth == 0 || tokens == 0 || channels == 0) throw_validation("Tensor3 shape must be positive");
}

Tensor3::Tensor3(std::size_t depth, std::size_t tokens, std::size_t channels,
                 std::vector<double> values)
    : depth_(depth), tokens_(tokens), channels_(channels), values_(std::move(values)) {
  if (depth == 0 || tokens == 0 || channels == 0) throw_validation("Tensor3 shape must be positive");
  if (values_.size() != depth * tokens * channels) throw_validation("Tensor3 value count mismatch");
  if (!all_finite()) throw_validation("Tensor3 contains NaN or Inf");
}

Tensor3 Tensor3::uniform(std::size_t depth, std::size_t tokens, std::size_t channels, double lo,
                         double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor3 t(depth, tokens, channels);
  for (auto& v : t.values_) v = dist(rng);
  return t;
}

bool Tensor3::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

FeatureMap::FeatureMap(std::size_t channels, std::size_t height, std::size_t width, double fill)
    : channels_(channels), height_(height), width_(width), values_(channels * height * width, fill) {}

FeatureMap::FeatureMap(std::size_t channels, std::size_t height, std::size_t width,
                       std::vector<double> values)
    : channels_(channels), height_(height), width_(width), values_(std::move(values)) {
  if (values_.size() != channels * height * width) throw_validation("FeatureMap value count mismatch");
}

FeatureMap FeatureMap::uniform(std::size_t channels, std::size_t height, std::size_t width,
                               double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  FeatureMap f(channels, height, width);
  for (auto& v : f.values_) v = dist(rng);
  return f;
}

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw_validation("cannot concatenate feature maps of different spatial size");
  }
  std::vector<double> values(a.values().begin(), a.values().end());
  values.insert(values.end(), b.values().begin(), b.values().end());
  return FeatureMap(a.channels() + b.channels(), a.height(), a.width(), std::move(values));
}

Tensor3 channel_matmul(const Tensor3& x, const Matrix& w) {
  if (w.rows() != x.channels()) {
    throw_validation("channel projection expects " + std::to_string(w.rows()) +
                     " input channels, got " + std::to_string(x.channels()));
  }
  Tensor3 out(x.depth(), x.tokens(), w.cols());
  for (std::size_t d = 0; d < x.depth(); ++d) {
    for (std::size_t n = 0; n < x.tokens(); ++n) {
      for (std::size_t c = 0; c < x.channels(); ++c) {
        const double xv = x.at(d, n, c);
        for (std::size_t j = 0; j < w.cols(); ++j) out.at(d, n, j) += xv * w.at(c, j);
      }
    }
  }
  return out;
}

Tensor3 depth_matmul(const Tensor3& x, const Matrix& w) {
  if (w.rows() != x.depth()) {
    throw_validation("depth projection expects depth " + std::to_string(w.rows()) + ", got " +
                     std::to_string(x.depth()));
  }
  Tensor3 out(w.cols(), x.tokens(), x.channels());
  for (std::size_t d = 0; d < x.depth(); ++d) {
    for (std::size_t e = 0; e < w.cols(); ++e) {
      const double wv = w.at(d, e);
      for (std::size_t n = 0; n < x.tokens(); ++n) {
        for (std::size_t c = 0; c < x.channels(); ++c) out.at(e, n, c) += x.at(d, n, c) * wv;
      }
    }
  }
  return out;
}

}  // namespace selfprompt::nn
