#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace selfprompt::nn {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  // Entries drawn uniformly from [lo, hi].
  static Matrix uniform(std::size_t rows, std::size_t cols, double lo, double hi,
                        std::mt19937_64& rng);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Rank-3 array indexed (depth frame, token, channel); channels fastest.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t depth, std::size_t tokens, std::size_t channels, double fill = 0.0);
  // Throws ValidationError on a size mismatch or non-finite entries.
  Tensor3(std::size_t depth, std::size_t tokens, std::size_t channels, std::vector<double> values);

  static Tensor3 uniform(std::size_t depth, std::size_t tokens, std::size_t channels, double lo,
                         double hi, std::mt19937_64& rng);

  std::size_t depth() const { return depth_; }
  std::size_t tokens() const { return tokens_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return values_.size(); }
  double& at(std::size_t d, std::size_t n, std::size_t c) {
    return values_[(d * tokens_ + n) * channels_ + c];
  }
  double at(std::size_t d, std::size_t n, std::size_t c) const {
    return values_[(d * tokens_ + n) * channels_ + c];
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  bool same_shape(const Tensor3& other) const {
    return depth_ == other.depth_ && tokens_ == other.tokens_ && channels_ == other.channels_;
  }
  bool all_finite() const;

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t depth_ = 0;
  std::size_t tokens_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> values_;
};

// Image-like stack indexed (channel, row, column); columns fastest.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width, double fill = 0.0);
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width, std::vector<double> values);

  static FeatureMap uniform(std::size_t channels, std::size_t height, std::size_t width, double lo,
                            double hi, std::mt19937_64& rng);

  std::size_t channels() const { return channels_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return values_[(c * height_ + y) * width_ + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values_[(c * height_ + y) * width_ + x];
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const FeatureMap&) const = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> values_;
};

// Concatenates along the channel axis; spatial dims must agree.
FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b);

// out[d,n,:] = x[d,n,:] * w  (w has x.channels() rows).
Tensor3 channel_matmul(const Tensor3& x, const Matrix& w);
// out[e,n,c] = sum_d x[d,n,c] * w[d,e]  (w has x.depth() rows).
Tensor3 depth_matmul(const Tensor3& x, const Matrix& w);

}  // namespace selfprompt::nn
