#include "selfprompt/conv.hpp"

#include <algorithm>
#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt::nn {

ConvLayer ConvLayer::conv(std::size_t in, std::size_t out, std::size_t kernel, Activation act) {
  ConvLayer l;
  l.kind = ConvKind::kConv;
  l.in_channels = in;
  l.out_channels = out;
  l.kernel = kernel;
  l.stride = 1;
  l.padding = kernel / 2;
  l.weights.assign(out * in * kernel * kernel, 0.0);
  l.bias.assign(out, 0.0);
  l.activation = act;
  l.validate();
  return l;
}

ConvLayer ConvLayer::upsample2x(std::size_t in, std::size_t out, Activation act) {
  ConvLayer l;
  l.kind = ConvKind::kTransposed;
  l.in_channels = in;
  l.out_channels = out;
  l.kernel = 3;
  l.stride = 2;
  l.padding = 1;
  l.output_padding = 1;
  l.weights.assign(in * out * 9, 0.0);
  l.bias.assign(out, 0.0);
  l.activation = act;
  l.validate();
  return l;
}

double& ConvLayer::weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) {
  const std::size_t outer = kind == ConvKind::kConv ? o * in_channels + i : i * out_channels + o;
  return weights[(outer * kernel + ky) * kernel + kx];
}

double ConvLayer::weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const {
  const std::size_t outer = kind == ConvKind::kConv ? o * in_channels + i : i * out_channels + o;
  return weights[(outer * kernel + ky) * kernel + kx];
}

std::size_t ConvLayer::output_size(std::size_t input) const {
  if (kind == ConvKind::kConv) {
    if (input + 2 * padding < kernel) throw ValidationError("convolution input smaller than kernel");
    return (input + 2 * padding - kernel) / stride + 1;
  }
  return (input - 1) * stride + kernel + output_padding - 2 * padding;
}

void ConvLayer::validate() const {
  if (in_channels == 0 || out_channels == 0) throw ValidationError("conv channels must be positive");
  if (kernel % 2 == 0) throw ValidationError("conv kernels must be odd-sized");
  if (stride == 0) throw ValidationError("conv stride must be positive");
  if (kind == ConvKind::kTransposed && output_padding >= stride) {
    throw ValidationError("output padding must be smaller than stride");
  }
  if (weights.size() != in_channels * out_channels * kernel * kernel) {
    throw ValidationError("conv weight count mismatch");
  }
  if (bias.size() != out_channels) throw ValidationError("conv bias count mismatch");
}

void ConvLayer::randomize(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (auto& w : weights) w = dist(rng);
  for (auto& b : bias) b = dist(rng);
}

FeatureMap ConvLayer::forward(const FeatureMap& input) const {
  validate();
  if (input.channels() != in_channels) {
    throw ValidationError("conv expects " + std::to_string(in_channels) + " channels, got " +
                          std::to_string(input.channels()));
  }
  const std::size_t h = input.height();
  const std::size_t w = input.width();
  const std::size_t oh = output_size(h);
  const std::size_t ow = output_size(w);
  FeatureMap out(out_channels, oh, ow);
  for (std::size_t o = 0; o < out_channels; ++o) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) out.at(o, y, x) = bias[o];
    }
  }

  const auto pad = static_cast<std::ptrdiff_t>(padding);
  const auto st = static_cast<std::ptrdiff_t>(stride);
  if (kind == ConvKind::kConv) {
    for (std::size_t o = 0; o < out_channels; ++o) {
      for (std::size_t i = 0; i < in_channels; ++i) {
        for (std::size_t ky = 0; ky < kernel; ++ky) {
          for (std::size_t kx = 0; kx < kernel; ++kx) {
            const double wv = weight(o, i, ky, kx);
            if (wv == 0.0) continue;
            for (std::size_t y = 0; y < oh; ++y) {
              const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y) * st - pad + static_cast<std::ptrdiff_t>(ky);
              if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
              for (std::size_t x = 0; x < ow; ++x) {
                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(x) * st - pad + static_cast<std::ptrdiff_t>(kx);
                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                out.at(o, y, x) += wv * input.at(i, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
              }
            }
          }
        }
      }
    }
  } else {
    // Scatter form: input pixel (iy, ix) lands on output (iy*s - p + ky, ix*s - p + kx).
    for (std::size_t i = 0; i < in_channels; ++i) {
      for (std::size_t o = 0; o < out_channels; ++o) {
        for (std::size_t ky = 0; ky < kernel; ++ky) {
          for (std::size_t kx = 0; kx < kernel; ++kx) {
            const double wv = weight(o, i, ky, kx);
            if (wv == 0.0) continue;
            for (std::size_t iy = 0; iy < h; ++iy) {
              const std::ptrdiff_t y = static_cast<std::ptrdiff_t>(iy) * st - pad + static_cast<std::ptrdiff_t>(ky);
              if (y < 0 || y >= static_cast<std::ptrdiff_t>(oh)) continue;
              for (std::size_t ix = 0; ix < w; ++ix) {
                const std::ptrdiff_t x = static_cast<std::ptrdiff_t>(ix) * st - pad + static_cast<std::ptrdiff_t>(kx);
                if (x < 0 || x >= static_cast<std::ptrdiff_t>(ow)) continue;
                out.at(o, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) += wv * input.at(i, iy, ix);
              }
            }
          }
        }
      }
    }
  }
  if (activation != Activation::kIdentity) {
    for (auto& v : out.values()) v = activate(activation, v);
  }
  return out;
}

ConvStack::ConvStack(std::vector<ConvLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ValidationError("conv stack needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].validate();
    if (i > 0 && layers_[i - 1].out_channels != layers_[i].in_channels) {
      throw ValidationError("conv stack layer " + std::to_string(i) + " expects " +
                            std::to_string(layers_[i].in_channels) + " channels but receives " +
                            std::to_string(layers_[i - 1].out_channels));
    }
  }
}

std::size_t ConvStack::in_channels() const { return layers_.empty() ? 0 : layers_.front().in_channels; }
std::size_t ConvStack::out_channels() const { return layers_.empty() ? 0 : layers_.back().out_channels; }

FeatureMap ConvStack::forward(const FeatureMap& input) const {
  if (layers_.empty()) throw ValidationError("empty conv stack");
  FeatureMap x = layers_.front().forward(input);
  for (std::size_t i = 1; i < layers_.size(); ++i) x = layers_[i].forward(x);
  return x;
}

void ConvStack::add_named_arrays(Checkpoint& ckpt, const std::string& prefix) const {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    const std::string base = prefix + "layer" + std::to_string(i) + ".";
    NamedArray w;
    w.dims = l.kind == ConvKind::kConv
                 ? std::vector<std::uint64_t>{l.out_channels, l.in_channels, l.kernel, l.kernel}
                 : std::vector<std::uint64_t>{l.in_channels, l.out_channels, l.kernel, l.kernel};
    w.values = l.weights;
    ckpt[base + "weight"] = std::move(w);
    ckpt[base + "bias"] = NamedArray::from(l.bias);
  }
}

ConvStack make_invert_bottleneck(std::size_t in, std::size_t out, std::size_t kernel,
                                 std::mt19937_64& rng) {
  const std::size_t hidden = 4 * std::max(in, out);
  ConvLayer expand = ConvLayer::conv(in, hidden, kernel, Activation::kGelu);
  ConvLayer project = ConvLayer::conv(hidden, out, 1);
  expand.randomize(rng);
  project.randomize(rng);
  return ConvStack({std::move(expand), std::move(project)});
}

ConvStack make_identity_stack(std::size_t channels) {
  ConvLayer expand = ConvLayer::conv(channels, 4 * channels, 1);
  ConvLayer project = ConvLayer::conv(4 * channels, channels, 1);
  for (std::size_t c = 0; c < channels; ++c) {
    expand.weight(c, c, 0, 0) = 1.0;
    project.weight(c, c, 0, 0) = 1.0;
  }
  return ConvStack({std::move(expand), std::move(project)});
}

ConvStack make_madapter(std::size_t modalities, std::mt19937_64& rng) {
  return make_invert_bottleneck(modalities, 3, 3, rng);
}

FeatureMap madapter_forward(const FeatureMap& image, const ConvStack& stack) {
  if (stack.in_channels() != image.channels()) {
    throw ValidationError("MAdapter stack expects " + std::to_string(stack.in_channels()) +
                          " modalities, image has " + std::to_string(image.channels()));
  }
  if (stack.out_channels() != 3) throw ValidationError("MAdapter stack must emit 3 channels");
  if (stack.layers().front().out_channels != 4 * std::max<std::size_t>(image.channels(), 3)) {
    throw ValidationError("MAdapter hidden width must be 4 * max(M, 3)");
  }
  FeatureMap out = stack.forward(image);
  if (out.height() != image.height() || out.width() != image.width()) {
    throw ValidationError("MAdapter stack must preserve spatial size");
  }
  return out;
}

}  // namespace selfprompt::nn
