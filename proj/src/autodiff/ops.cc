// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dereverb/autodiff/ops.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dereverb/common/error.h"

namespace dereverb::ad {
namespace {

bool Tracks(Tape* tape, std::initializer_list<const Tensor*> inputs) {
  if (tape == nullptr) return false;
  for (const Tensor* t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

void CheckMatrix(const Tensor& x, const char* op) {
  DEREVERB_CHECK(x.defined() && x.dim() == 2,
                 std::string(op) + ": expected a [T x F] tensor");
}

void CheckSameShape(const Tensor& a, const Tensor& b, const char* op) {
  DEREVERB_CHECK(a.shape() == b.shape(),
                 std::string(op) + ": shape mismatch " +
                     ShapeString(a.shape()) + " vs " + ShapeString(b.shape()));
}

// Backward steps skip outputs that received no gradient.
bool Reached(const Tensor& out) { return out.has_grad(); }

}  // namespace

Tensor Linear(Tape* tape, const Tensor& x, const Tensor& w, const Tensor& b) {
  CheckMatrix(x, "Linear");
  CheckMatrix(w, "Linear");
  const std::size_t rows = x.rows(), in = x.cols(), out_dim = w.cols();
  DEREVERB_CHECK(w.rows() == in, "Linear: input width " + std::to_string(in) +
                                     " does not match weight " +
                                     ShapeString(w.shape()));
  DEREVERB_CHECK(b.size() == out_dim, "Linear: bias size mismatch");
  const bool track = Tracks(tape, {&x, &w, &b});
  Tensor out = Tensor::Zeros({rows, out_dim}, track);
  {
    auto xv = x.values();
    auto wv = w.values();
    auto bv = b.values();
    auto ov = out.mutable_values();
    for (std::size_t t = 0; t < rows; ++t) {
      double* o = ov.data() + t * out_dim;
      for (std::size_t j = 0; j < out_dim; ++j) o[j] = bv[j];
      for (std::size_t i = 0; i < in; ++i) {
        const double xi = xv[t * in + i];
        if (xi == 0.0) continue;
        const double* wr = wv.data() + i * out_dim;
        for (std::size_t j = 0; j < out_dim; ++j) o[j] += xi * wr[j];
      }
    }
  }
  if (track) {
    tape->Record([x, w, b, out, rows, in, out_dim]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      if (x.requires_grad()) {
        // dx = g W^T, accumulated row-wise against a transposed copy of W so
        // the inner loop is a contiguous axpy.
        auto gx = x.mutable_grad();
        auto wv = w.values();
        std::vector<double> wt(in * out_dim);
        for (std::size_t i = 0; i < in; ++i) {
          for (std::size_t j = 0; j < out_dim; ++j) {
            wt[j * in + i] = wv[i * out_dim + j];
          }
        }
        for (std::size_t t = 0; t < rows; ++t) {
          const double* gr = g.data() + t * out_dim;
          double* gxr = gx.data() + t * in;
          for (std::size_t j = 0; j < out_dim; ++j) {
            const double gj = gr[j];
            if (gj == 0.0) continue;
            const double* wtr = wt.data() + j * in;
            for (std::size_t i = 0; i < in; ++i) gxr[i] += gj * wtr[i];
          }
        }
      }
      if (w.requires_grad()) {
        auto gw = w.mutable_grad();
        auto xv = x.values();
        for (std::size_t t = 0; t < rows; ++t) {
          const double* gr = g.data() + t * out_dim;
          for (std::size_t i = 0; i < in; ++i) {
            const double xi = xv[t * in + i];
            if (xi == 0.0) continue;
            double* gwr = gw.data() + i * out_dim;
            for (std::size_t j = 0; j < out_dim; ++j) gwr[j] += xi * gr[j];
          }
        }
      }
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        for (std::size_t t = 0; t < rows; ++t) {
          for (std::size_t j = 0; j < out_dim; ++j) gb[j] += g[t * out_dim + j];
        }
      }
    });
  }
  return out;
}

Tensor PRelu(Tape* tape, const Tensor& x, const Tensor& slope) {
  CheckMatrix(x, "PRelu");
  const std::size_t rows = x.rows(), cols = x.cols();
  DEREVERB_CHECK(slope.size() == cols, "PRelu: one slope per feature required");
  const bool track = Tracks(tape, {&x, &slope});
  Tensor out = Tensor::Zeros(x.shape(), track);
  auto xv = x.values();
  auto sv = slope.values();
  auto ov = out.mutable_values();
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t f = 0; f < cols; ++f) {
      const double v = xv[t * cols + f];
      ov[t * cols + f] = v > 0.0 ? v : sv[f] * v;
    }
  }
  if (track) {
    tape->Record([x, slope, out, rows, cols]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      auto xv = x.values();
      auto sv = slope.values();
      if (x.requires_grad()) {
        auto gx = x.mutable_grad();
        for (std::size_t t = 0; t < rows; ++t) {
          for (std::size_t f = 0; f < cols; ++f) {
            const std::size_t i = t * cols + f;
            gx[i] += xv[i] > 0.0 ? g[i] : sv[f] * g[i];
          }
        }
      }
      if (slope.requires_grad()) {
        auto gs = slope.mutable_grad();
        for (std::size_t t = 0; t < rows; ++t) {
          for (std::size_t f = 0; f < cols; ++f) {
            const std::size_t i = t * cols + f;
            if (xv[i] <= 0.0) gs[f] += xv[i] * g[i];
          }
        }
      }
    });
  }
  return out;
}

Tensor Relu(Tape* tape, const Tensor& x) {
  const bool track = Tracks(tape, {&x});
  Tensor out = Tensor::Zeros(x.shape(), track);
  auto xv = x.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < xv.size(); ++i) ov[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  if (track) {
    tape->Record([x, out]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      auto xv = x.values();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < xv.size(); ++i) {
        if (xv[i] > 0.0) gx[i] += g[i];
      }
    });
  }
  return out;
}

Tensor Tanh(Tape* tape, const Tensor& x) {
  const bool track = Tracks(tape, {&x});
  Tensor out = Tensor::Zeros(x.shape(), track);
  auto xv = x.values();
  auto ov = out.mutable_values();
  // Saturated tanh rounds to +-1 in double; keep outputs in the open interval.
  const double limit = std::nextafter(1.0, 0.0);
  for (std::size_t i = 0; i < xv.size(); ++i) {
    ov[i] = std::clamp(std::tanh(xv[i]), -limit, limit);
  }
  if (track) {
    tape->Record([x, out]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      auto y = out.values();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < y.size(); ++i) {
        gx[i] += g[i] * (1.0 - y[i] * y[i]);
      }
    });
  }
  return out;
}

Tensor Add(Tape* tape, const Tensor& a, const Tensor& b) {
  CheckSameShape(a, b, "Add");
  const bool track = Tracks(tape, {&a, &b});
  Tensor out = Tensor::Zeros(a.shape(), track);
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < av.size(); ++i) ov[i] = av[i] + bv[i];
  if (track) {
    tape->Record([a, b, out]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      for (const Tensor* t : {&a, &b}) {
        if (!t->requires_grad()) continue;
        auto gt = t->mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) gt[i] += g[i];
      }
    });
  }
  return out;
}

Tensor Mul(Tape* tape, const Tensor& a, const Tensor& b) {
  CheckSameShape(a, b, "Mul");
  const bool track = Tracks(tape, {&a, &b});
  Tensor out = Tensor::Zeros(a.shape(), track);
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < av.size(); ++i) ov[i] = av[i] * bv[i];
  if (track) {
    tape->Record([a, b, out]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      if (a.requires_grad()) {
        auto ga = a.mutable_grad();
        auto bv = b.values();
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
      }
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        auto av = a.values();
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
      }
    });
  }
  return out;
}

Tensor Scale(Tape* tape, const Tensor& x, double factor) {
  const bool track = Tracks(tape, {&x});
  Tensor out = Tensor::Zeros(x.shape(), track);
  auto xv = x.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < xv.size(); ++i) ov[i] = factor * xv[i];
  if (track) {
    tape->Record([x, out, factor]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += factor * g[i];
    });
  }
  return out;
}

Tensor MeanOverChannels(Tape* tape, std::span<const Tensor> xs) {
  DEREVERB_CHECK(!xs.empty(), "MeanOverChannels: no channels");
  bool track = false;
  for (const auto& x : xs) {
    CheckSameShape(xs[0], x, "MeanOverChannels");
    track = track || Tracks(tape, {&x});
  }
  const double inv = 1.0 / static_cast<double>(xs.size());
  Tensor out = Tensor::Zeros(xs[0].shape(), track);
  auto ov = out.mutable_values();
  for (const auto& x : xs) {
    auto xv = x.values();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] += xv[i];
  }
  for (double& v : ov) v *= inv;
  if (track) {
    std::vector<Tensor> inputs(xs.begin(), xs.end());
    tape->Record([inputs, out, inv]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      for (auto& x : inputs) {
        if (!x.requires_grad()) continue;
        auto gx = x.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += inv * g[i];
      }
    });
  }
  return out;
}

Tensor ConcatFeatures(Tape* tape, std::span<const Tensor> xs) {
  DEREVERB_CHECK(!xs.empty(), "ConcatFeatures: nothing to concatenate");
  const std::size_t rows = xs[0].rows();
  std::size_t total = 0;
  bool track = false;
  for (const auto& x : xs) {
    CheckMatrix(x, "ConcatFeatures");
    DEREVERB_CHECK(x.rows() == rows, "ConcatFeatures: frame counts differ");
    total += x.cols();
    track = track || Tracks(tape, {&x});
  }
  Tensor out = Tensor::Zeros({rows, total}, track);
  auto ov = out.mutable_values();
  std::size_t offset = 0;
  for (const auto& x : xs) {
    const std::size_t c = x.cols();
    auto xv = x.values();
    for (std::size_t t = 0; t < rows; ++t) {
      std::copy(xv.begin() + t * c, xv.begin() + (t + 1) * c,
                ov.begin() + t * total + offset);
    }
    offset += c;
  }
  if (track) {
    std::vector<Tensor> inputs(xs.begin(), xs.end());
    tape->Record([inputs, out, rows, total]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      std::size_t offset = 0;
      for (auto& x : inputs) {
        const std::size_t c = x.cols();
        if (x.requires_grad()) {
          auto gx = x.mutable_grad();
          for (std::size_t t = 0; t < rows; ++t) {
            for (std::size_t f = 0; f < c; ++f) {
              gx[t * c + f] += g[t * total + offset + f];
            }
          }
        }
        offset += c;
      }
    });
  }
  return out;
}

Tensor ConcatFeatures(Tape* tape, const Tensor& a, const Tensor& b) {
  const Tensor both[] = {a, b};
  return ConcatFeatures(tape, both);
}

Tensor SliceFeatures(Tape* tape, const Tensor& x, std::size_t begin,
                     std::size_t end) {
  CheckMatrix(x, "SliceFeatures");
  const std::size_t rows = x.rows(), cols = x.cols();
  DEREVERB_CHECK(begin < end && end <= cols, "SliceFeatures: bad range");
  const std::size_t width = end - begin;
  const bool track = Tracks(tape, {&x});
  Tensor out = Tensor::Zeros({rows, width}, track);
  auto xv = x.values();
  auto ov = out.mutable_values();
  for (std::size_t t = 0; t < rows; ++t) {
    std::copy(xv.begin() + t * cols + begin, xv.begin() + t * cols + end,
              ov.begin() + t * width);
  }
  if (track) {
    tape->Record([x, out, rows, cols, begin, width]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      auto gx = x.mutable_grad();
      for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t f = 0; f < width; ++f) {
          gx[t * cols + begin + f] += g[t * width + f];
        }
      }
    });
  }
  return out;
}

Tensor SliceFrames(Tape* tape, const Tensor& x, std::size_t begin,
                   std::size_t end) {
  CheckMatrix(x, "SliceFrames");
  const std::size_t cols = x.cols();
  DEREVERB_CHECK(begin < end && end <= x.rows(), "SliceFrames: bad range");
  const bool track = Tracks(tape, {&x});
  auto xv = x.values();
  Tensor out = Tensor::FromData(
      {end - begin, cols},
      std::vector<double>(xv.begin() + begin * cols, xv.begin() + end * cols),
      track);
  if (track) {
    tape->Record([x, out, begin, cols]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[begin * cols + i] += g[i];
    });
  }
  return out;
}

Tensor CausalMemory(Tape* tape, const Tensor& p, const Tensor& w) {
  CheckMatrix(p, "CausalMemory");
  CheckMatrix(w, "CausalMemory");
  const std::size_t rows = p.rows(), cols = p.cols();
  DEREVERB_CHECK(w.cols() == cols && w.rows() >= 1,
                 "CausalMemory: weights must be [(order + 1) x F]");
  const std::size_t taps = w.rows();
  const bool track = Tracks(tape, {&p, &w});
  Tensor out = Tensor::Zeros(p.shape(), track);
  auto pv = p.values();
  auto wv = w.values();
  auto ov = out.mutable_values();
  for (std::size_t t = 0; t < rows; ++t) {
    double* o = ov.data() + t * cols;
    for (std::size_t tau = 0; tau < taps && tau <= t; ++tau) {
      const double* pr = pv.data() + (t - tau) * cols;
      const double* wr = wv.data() + tau * cols;
      for (std::size_t f = 0; f < cols; ++f) o[f] += wr[f] * pr[f];
    }
  }
  if (track) {
    tape->Record([p, w, out, rows, cols, taps]() mutable {
      if (!Reached(out)) return;
      auto g = out.grad();
      if (p.requires_grad()) {
        auto gp = p.mutable_grad();
        auto wv = w.values();
        for (std::size_t t = 0; t < rows; ++t) {
          const double* gr = g.data() + t * cols;
          for (std::size_t tau = 0; tau < taps && tau <= t; ++tau) {
            double* gpr = gp.data() + (t - tau) * cols;
            const double* wr = wv.data() + tau * cols;
            for (std::size_t f = 0; f < cols; ++f) gpr[f] += wr[f] * gr[f];
          }
        }
      }
      if (w.requires_grad()) {
        auto gw = w.mutable_grad();
        auto pv = p.values();
        for (std::size_t t = 0; t < rows; ++t) {
          const double* gr = g.data() + t * cols;
          for (std::size_t tau = 0; tau < taps && tau <= t; ++tau) {
            const double* pr = pv.data() + (t - tau) * cols;
            double* gwr = gw.data() + tau * cols;
            for (std::size_t f = 0; f < cols; ++f) gwr[f] += pr[f] * gr[f];
          }
        }
      }
    });
  }
  return out;
}

Tensor Sum(Tape* tape, const Tensor& x) {
  const bool track = Tracks(tape, {&x});
  double s = 0.0;
  for (double v : x.values()) s += v;
  Tensor out = Tensor::Scalar(s, track);
  if (track) {
    tape->Record([x, out]() mutable {
      if (!Reached(out)) return;
      const double g = out.grad()[0];
      for (double& v : x.mutable_grad()) v += g;
    });
  }
  return out;
}

Tensor WeightedSquaredError(Tape* tape, const Tensor& pred,
                            const Tensor& target,
                            std::span<const double> row_weights) {
  CheckSameShape(pred, target, "WeightedSquaredError");
  const std::size_t rows = pred.rows(), cols = pred.cols();
  DEREVERB_CHECK(row_weights.empty() || row_weights.size() == rows,
                 "WeightedSquaredError: one weight per row required");
  const bool track = Tracks(tape, {&pred});
  std::vector<double> weights(row_weights.begin(), row_weights.end());
  if (weights.empty()) weights.assign(rows, 1.0);
  auto pv = pred.values();
  auto tv = target.values();
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (weights[r] == 0.0) continue;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = pv[r * cols + c] - tv[r * cols + c];
      acc += d * d;
    }
    loss += weights[r] * acc;
  }
  Tensor out = Tensor::Scalar(loss, track);
  if (track) {
    tape->Record([pred, target, out, weights, rows, cols]() mutable {
      if (!Reached(out)) return;
      const double g = out.grad()[0];
      auto gp = pred.mutable_grad();
      auto pv = pred.values();
      auto tv = target.values();
      for (std::size_t r = 0; r < rows; ++r) {
        const double scale = 2.0 * g * weights[r];
        if (scale == 0.0) continue;
        for (std::size_t c = 0; c < cols; ++c) {
          const std::size_t i = r * cols + c;
          gp[i] += scale * (pv[i] - tv[i]);
        }
      }
    });
  }
  return out;
}

}  // namespace dereverb::ad
