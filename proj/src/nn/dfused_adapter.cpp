#include "selfprompt/dfused_adapter.hpp"

#include <string>

#include "selfprompt/checkpoint.hpp"
#include "selfprompt/errors.hpp"

namespace selfprompt::nn {

namespace {

void check_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ValidationError(std::string(name) + " must be " + std::to_string(rows) + "x" +
                          std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

void check_input(const Tensor3& x, const AdapterParams& p) {
  p.validate();
  if (x.channels() != p.channels()) {
    throw ValidationError("adapter expects " + std::to_string(p.channels()) + " channels, got " +
                          std::to_string(x.channels()));
  }
  if (x.depth() != p.depth()) {
    throw ValidationError("adapter expects depth " + std::to_string(p.depth()) + ", got " +
                          std::to_string(x.depth()));
  }
  if (!x.all_finite()) throw ValidationError("adapter input contains NaN or Inf");
}

Tensor3 map_activation(const Tensor3& t, Activation act) {
  Tensor3 out = t;
  for (auto& v : out.values()) v = activate(act, v);
  return out;
}

// Intermediates of one forward pass, kept for the backward pass.
struct Trace {
  Tensor3 down;      // X Wdn
  Tensor3 hidden;    // s(down)
  Tensor3 expanded;  // hidden Wdup (depth 4D)
  Tensor3 gated;     // s(expanded)
  Tensor3 mixed;     // hidden + gated Wddn
};

Trace trace_forward(const Tensor3& x, const AdapterParams& p) {
  Trace t;
  t.down = channel_matmul(x, p.w_dn);
  t.hidden = map_activation(t.down, p.activation);
  t.expanded = depth_matmul(t.hidden, p.w_dup);
  t.gated = map_activation(t.expanded, p.activation);
  t.mixed = depth_matmul(t.gated, p.w_ddn);
  auto mixed = t.mixed.values();
  const auto hidden = t.hidden.values();
  for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] += hidden[i];
  return t;
}

}  // namespace

void AdapterParams::validate() const {
  const std::size_t c = w_dn.rows();
  const std::size_t d = w_dup.rows();
  if (c == 0 || c % 4 != 0) {
    throw ValidationError("adapter channels must be a positive multiple of 4, got " +
                          std::to_string(c));
  }
  if (d == 0) throw ValidationError("adapter depth must be positive");
  check_shape(w_dn, c, c / 4, "w_dn");
  check_shape(w_up, c / 4, c, "w_up");
  check_shape(w_dup, d, 4 * d, "w_dup");
  check_shape(w_ddn, 4 * d, d, "w_ddn");
}

AdapterParams AdapterParams::init(std::size_t channels, std::size_t depth, std::mt19937_64& rng,
                                  bool zero_up, double scale) {
  AdapterParams p;
  p.w_dn = Matrix::uniform(channels, channels / 4, -scale, scale, rng);
  p.w_up = zero_up ? Matrix(channels / 4, channels)
                   : Matrix::uniform(channels / 4, channels, -scale, scale, rng);
  p.w_dup = Matrix::uniform(depth, 4 * depth, -scale, scale, rng);
  p.w_ddn = Matrix::uniform(4 * depth, depth, -scale, scale, rng);
  p.validate();
  return p;
}

std::map<std::string, NamedArray> AdapterParams::named_arrays(const std::string& prefix) const {
  std::map<std::string, NamedArray> out;
  out.emplace(prefix + "w_dn", NamedArray::from(w_dn));
  out.emplace(prefix + "w_up", NamedArray::from(w_up));
  out.emplace(prefix + "w_dup", NamedArray::from(w_dup));
  out.emplace(prefix + "w_ddn", NamedArray::from(w_ddn));
  return out;
}

Tensor3 dfused_delta(const Tensor3& x, const AdapterParams& p) {
  check_input(x, p);
  return channel_matmul(trace_forward(x, p).mixed, p.w_up);
}

Tensor3 dfused_forward(const Tensor3& x, const AdapterParams& p) {
  Tensor3 out = dfused_delta(x, p);
  auto o = out.values();
  const auto xv = x.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += xv[i];
  return out;
}

AdapterGrads dfused_backward(const Tensor3& x, const AdapterParams& p, const Tensor3& upstream) {
  check_input(x, p);
  if (!upstream.same_shape(x)) throw ValidationError("upstream gradient shape must match output");

  const std::size_t depth = x.depth();
  const std::size_t tokens = x.tokens();
  const std::size_t channels = x.channels();
  const std::size_t bottleneck = channels / 4;
  const std::size_t wide = 4 * depth;
  const Trace t = trace_forward(x, p);

  AdapterGrads g;
  g.x = upstream;  // skip connection
  g.w_dn = Matrix(channels, bottleneck);
  g.w_up = Matrix(bottleneck, channels);
  g.w_dup = Matrix(depth, wide);
  g.w_ddn = Matrix(wide, depth);

  // out = X + mixed Wup
  Tensor3 d_mixed(depth, tokens, bottleneck);
  for (std::size_t d = 0; d < depth; ++d) {
    for (std::size_t n = 0; n < tokens; ++n) {
      for (std::size_t j = 0; j < bottleneck; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
          const double up = upstream.at(d, n, c);
          acc += up * p.w_up.at(j, c);
          g.w_up.at(j, c) += t.mixed.at(d, n, j) * up;
        }
        d_mixed.at(d, n, j) = acc;
      }
    }
  }

  // mixed = hidden + gated Wddn (depth axis)
  Tensor3 d_hidden = d_mixed;
  Tensor3 d_expanded(wide, tokens, bottleneck);
  for (std::size_t e = 0; e < wide; ++e) {
    for (std::size_t n = 0; n < tokens; ++n) {
      for (std::size_t j = 0; j < bottleneck; ++j) {
        double acc = 0.0;
        for (std::size_t d = 0; d < depth; ++d) {
          const double dm = d_mixed.at(d, n, j);
          acc += dm * p.w_ddn.at(e, d);
          g.w_ddn.at(e, d) += t.gated.at(e, n, j) * dm;
        }
        // gated = s(expanded)
        d_expanded.at(e, n, j) = acc * activate_derivative(p.activation, t.expanded.at(e, n, j));
      }
    }
  }

  // expanded = hidden Wdup (depth axis)
  for (std::size_t d = 0; d < depth; ++d) {
    for (std::size_t n = 0; n < tokens; ++n) {
      for (std::size_t j = 0; j < bottleneck; ++j) {
        double acc = 0.0;
        for (std::size_t e = 0; e < wide; ++e) {
          const double de = d_expanded.at(e, n, j);
          acc += de * p.w_dup.at(d, e);
          g.w_dup.at(d, e) += t.hidden.at(d, n, j) * de;
        }
        d_hidden.at(d, n, j) += acc;
      }
    }
  }

  // hidden = s(X Wdn)
  for (std::size_t d = 0; d < depth; ++d) {
    for (std::size_t n = 0; n < tokens; ++n) {
      for (std::size_t j = 0; j < bottleneck; ++j) {
        const double dd = d_hidden.at(d, n, j) * activate_derivative(p.activation, t.down.at(d, n, j));
        for (std::size_t c = 0; c < channels; ++c) {
          g.x.at(d, n, c) += dd * p.w_dn.at(c, j);
          g.w_dn.at(c, j) += x.at(d, n, c) * dd;
        }
      }
    }
  }
  return g;
}

}  // namespace selfprompt::nn
