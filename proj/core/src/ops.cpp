#include "flowgnn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "flowgnn/errors.hpp"

namespace flowgnn::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Data = std::shared_ptr<detail::TensorData>;

Eigen::Map<RowMat> view(std::vector<double>& v, std::size_t r, std::size_t c) {
  return {v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)};
}

void require_matrix(const Tensor& t, const char* op) {
  if (!t.defined()) throw DimensionError(std::string(op) + ": undefined tensor");
  if (t.rank() != 2) throw DimensionError(std::string(op) + ": expected a rank-2 tensor");
}

std::string dims(const Tensor& t) {
  return "[" + std::to_string(t.rows()) + " x " + std::to_string(t.cols()) + "]";
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  require_matrix(a, op);
  require_matrix(b, op);
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + dims(a) + " vs " + dims(b));
  }
}

bool tracks(const Tape& tape, std::initializer_list<const Tensor*> inputs) {
  if (!tape.recording()) return false;
  return std::any_of(inputs.begin(), inputs.end(), [](const Tensor* t) { return t->requires_grad(); });
}

void require_index(const Index& idx, std::size_t rows, std::size_t bound, const char* op) {
  if (!idx || idx->size() != rows) {
    throw DimensionError(std::string(op) + ": index length does not match row count");
  }
  for (int s : *idx) {
    if (s < 0 || static_cast<std::size_t>(s) >= bound) {
      throw DimensionError(std::string(op) + ": index " + std::to_string(s) + " out of range");
    }
  }
}

}  // namespace

Index make_index(std::vector<int> ids) {
  return std::make_shared<const std::vector<int>>(std::move(ids));
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  if (b.rows() != k) throw DimensionError("matmul: " + dims(a) + " x " + dims(b));
  const bool rg = tracks(tape, {&a, &b});
  Tensor out = make_result({n, m}, rg);
  Data ad = a.impl(), bd = b.impl(), od = out.impl();
  view(od->value, n, m).noalias() = view(ad->value, n, k) * view(bd->value, k, m);
  if (rg) {
    tape.record([ad, bd, od, n, k, m] {
      const auto g = view(od->grad, n, m);
      if (ad->requires_grad) view(ad->grad, n, k).noalias() += g * view(bd->value, k, m).transpose();
      if (bd->requires_grad) view(bd->grad, k, m).noalias() += view(ad->value, n, k).transpose() * g;
    });
  }
  return out;
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  const bool rg = tracks(tape, {&a, &b});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), bd = b.impl(), od = out.impl();
  for (std::size_t i = 0; i < od->value.size(); ++i) od->value[i] = ad->value[i] + bd->value[i];
  if (rg) {
    tape.record([ad, bd, od] {
      for (std::size_t i = 0; i < od->grad.size(); ++i) {
        if (ad->requires_grad) ad->grad[i] += od->grad[i];
        if (bd->requires_grad) bd->grad[i] += od->grad[i];
      }
    });
  }
  return out;
}

Tensor sub(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  const bool rg = tracks(tape, {&a, &b});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), bd = b.impl(), od = out.impl();
  for (std::size_t i = 0; i < od->value.size(); ++i) od->value[i] = ad->value[i] - bd->value[i];
  if (rg) {
    tape.record([ad, bd, od] {
      for (std::size_t i = 0; i < od->grad.size(); ++i) {
        if (ad->requires_grad) ad->grad[i] += od->grad[i];
        if (bd->requires_grad) bd->grad[i] -= od->grad[i];
      }
    });
  }
  return out;
}

Tensor mul(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  const bool rg = tracks(tape, {&a, &b});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), bd = b.impl(), od = out.impl();
  for (std::size_t i = 0; i < od->value.size(); ++i) od->value[i] = ad->value[i] * bd->value[i];
  if (rg) {
    tape.record([ad, bd, od] {
      for (std::size_t i = 0; i < od->grad.size(); ++i) {
        if (ad->requires_grad) ad->grad[i] += od->grad[i] * bd->value[i];
        if (bd->requires_grad) bd->grad[i] += od->grad[i] * ad->value[i];
      }
    });
  }
  return out;
}

Tensor add_bias(Tape& tape, const Tensor& a, const Tensor& bias) {
  require_matrix(a, "add_bias");
  require_matrix(bias, "add_bias");
  const std::size_t n = a.rows(), m = a.cols();
  if (bias.rows() != 1 || bias.cols() != m) {
    throw DimensionError("add_bias: " + dims(a) + " + " + dims(bias));
  }
  const bool rg = tracks(tape, {&a, &bias});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), bd = bias.impl(), od = out.impl();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) od->value[r * m + c] = ad->value[r * m + c] + bd->value[c];
  }
  if (rg) {
    tape.record([ad, bd, od, n, m] {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          const double g = od->grad[r * m + c];
          if (ad->requires_grad) ad->grad[r * m + c] += g;
          if (bd->requires_grad) bd->grad[c] += g;
        }
      }
    });
  }
  return out;
}

Tensor scalar_mul(Tape& tape, const Tensor& a, double s) {
  require_matrix(a, "scalar_mul");
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), od = out.impl();
  for (std::size_t i = 0; i < od->value.size(); ++i) od->value[i] = s * ad->value[i];
  if (rg) {
    tape.record([ad, od, s] {
      for (std::size_t i = 0; i < od->grad.size(); ++i) ad->grad[i] += s * od->grad[i];
    });
  }
  return out;
}

Tensor scale_rows(Tape& tape, const Tensor& a, const Tensor& w) {
  require_matrix(a, "scale_rows");
  require_matrix(w, "scale_rows");
  const std::size_t n = a.rows(), m = a.cols();
  if (w.rows() != n || w.cols() != 1) throw DimensionError("scale_rows: " + dims(a) + " by " + dims(w));
  const bool rg = tracks(tape, {&a, &w});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), wd = w.impl(), od = out.impl();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) od->value[r * m + c] = wd->value[r] * ad->value[r * m + c];
  }
  if (rg) {
    tape.record([ad, wd, od, n, m] {
      for (std::size_t r = 0; r < n; ++r) {
        double gw = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
          const double g = od->grad[r * m + c];
          if (ad->requires_grad) ad->grad[r * m + c] += g * wd->value[r];
          gw += g * ad->value[r * m + c];
        }
        if (wd->requires_grad) wd->grad[r] += gw;
      }
    });
  }
  return out;
}

Tensor concat_rows(Tape& tape, const Tensor& a, const Tensor& b) {
  require_matrix(a, "concat_rows");
  require_matrix(b, "concat_rows");
  const std::size_t n = a.rows(), p = a.cols(), q = b.cols();
  if (b.rows() != n) throw DimensionError("concat_rows: " + dims(a) + " with " + dims(b));
  const bool rg = tracks(tape, {&a, &b});
  Tensor out = make_result({n, p + q}, rg);
  Data ad = a.impl(), bd = b.impl(), od = out.impl();
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(ad->value.begin() + r * p, p, od->value.begin() + r * (p + q));
    std::copy_n(bd->value.begin() + r * q, q, od->value.begin() + r * (p + q) + p);
  }
  if (rg) {
    tape.record([ad, bd, od, n, p, q] {
      for (std::size_t r = 0; r < n; ++r) {
        const double* g = od->grad.data() + r * (p + q);
        if (ad->requires_grad) {
          for (std::size_t c = 0; c < p; ++c) ad->grad[r * p + c] += g[c];
        }
        if (bd->requires_grad) {
          for (std::size_t c = 0; c < q; ++c) bd->grad[r * q + c] += g[p + c];
        }
      }
    });
  }
  return out;
}

Tensor gather_rows(Tape& tape, const Tensor& a, const Index& rows) {
  require_matrix(a, "gather_rows");
  if (!rows) throw DimensionError("gather_rows: null index");
  const std::size_t m = a.cols(), n = rows->size();
  for (int r : *rows) {
    if (r < 0 || static_cast<std::size_t>(r) >= a.rows()) {
      throw DimensionError("gather_rows: row " + std::to_string(r) + " out of range");
    }
  }
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result({n, m}, rg);
  Data ad = a.impl(), od = out.impl();
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(ad->value.begin() + static_cast<std::size_t>((*rows)[i]) * m, m,
                od->value.begin() + i * m);
  }
  if (rg) {
    tape.record([ad, od, rows, n, m] {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t base = static_cast<std::size_t>((*rows)[i]) * m;
        for (std::size_t c = 0; c < m; ++c) ad->grad[base + c] += od->grad[i * m + c];
      }
    });
  }
  return out;
}

Tensor relu(Tape& tape, const Tensor& a) { return leaky_relu(tape, a, 0.0); }

Tensor leaky_relu(Tape& tape, const Tensor& a, double slope) {
  require_matrix(a, "leaky_relu");
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), od = out.impl();
  for (std::size_t i = 0; i < od->value.size(); ++i) {
    const double x = ad->value[i];
    od->value[i] = x > 0.0 ? x : slope * x;
  }
  if (rg) {
    tape.record([ad, od, slope] {
      for (std::size_t i = 0; i < od->grad.size(); ++i) {
        ad->grad[i] += ad->value[i] > 0.0 ? od->grad[i] : slope * od->grad[i];
      }
    });
  }
  return out;
}

Tensor row_softmax(Tape& tape, const Tensor& a) {
  require_matrix(a, "row_softmax");
  const std::size_t n = a.rows(), m = a.cols();
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), od = out.impl();
  for (std::size_t r = 0; r < n; ++r) {
    const double* x = ad->value.data() + r * m;
    double* y = od->value.data() + r * m;
    const double mx = *std::max_element(x, x + m);
    double z = 0.0;
    for (std::size_t c = 0; c < m; ++c) z += (y[c] = std::exp(x[c] - mx));
    for (std::size_t c = 0; c < m; ++c) y[c] /= z;
  }
  if (rg) {
    tape.record([ad, od, n, m] {
      for (std::size_t r = 0; r < n; ++r) {
        const double* y = od->value.data() + r * m;
        const double* g = od->grad.data() + r * m;
        double dot = 0.0;
        for (std::size_t c = 0; c < m; ++c) dot += g[c] * y[c];
        for (std::size_t c = 0; c < m; ++c) ad->grad[r * m + c] += y[c] * (g[c] - dot);
      }
    });
  }
  return out;
}

Tensor segment_softmax(Tape& tape, const Tensor& values, const Index& segment_ids,
                       std::size_t num_segments) {
  require_matrix(values, "segment_softmax");
  const std::size_t n = values.rows(), m = values.cols();
  require_index(segment_ids, n, num_segments, "segment_softmax");
  const bool rg = tracks(tape, {&values});
  Tensor out = make_result(values.shape(), rg);
  Data vd = values.impl(), od = out.impl();
  const std::vector<int>& seg = *segment_ids;

  std::vector<double> mx(num_segments * m, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      double& cur = mx[static_cast<std::size_t>(seg[r]) * m + c];
      cur = std::max(cur, vd->value[r * m + c]);
    }
  }
  std::vector<double> z(num_segments * m, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t s = static_cast<std::size_t>(seg[r]) * m + c;
      const double e = std::exp(vd->value[r * m + c] - mx[s]);
      od->value[r * m + c] = e;
      z[s] += e;
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      od->value[r * m + c] /= z[static_cast<std::size_t>(seg[r]) * m + c];
    }
  }
  if (rg) {
    tape.record([vd, od, segment_ids, num_segments, n, m] {
      const std::vector<int>& sg = *segment_ids;
      std::vector<double> dot(num_segments * m, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          dot[static_cast<std::size_t>(sg[r]) * m + c] += od->grad[r * m + c] * od->value[r * m + c];
        }
      }
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          const std::size_t i = r * m + c;
          vd->grad[i] +=
              od->value[i] * (od->grad[i] - dot[static_cast<std::size_t>(sg[r]) * m + c]);
        }
      }
    });
  }
  return out;
}

Tensor segment_sum(Tape& tape, const Tensor& values, const Index& segment_ids,
                   std::size_t num_segments) {
  require_matrix(values, "segment_sum");
  const std::size_t n = values.rows(), m = values.cols();
  require_index(segment_ids, n, num_segments, "segment_sum");
  const bool rg = tracks(tape, {&values});
  Tensor out = make_result({num_segments, m}, rg);
  Data vd = values.impl(), od = out.impl();
  const std::vector<int>& seg = *segment_ids;
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t base = static_cast<std::size_t>(seg[r]) * m;
    for (std::size_t c = 0; c < m; ++c) od->value[base + c] += vd->value[r * m + c];
  }
  if (rg) {
    tape.record([vd, od, segment_ids, n, m] {
      const std::vector<int>& sg = *segment_ids;
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t base = static_cast<std::size_t>(sg[r]) * m;
        for (std::size_t c = 0; c < m; ++c) vd->grad[r * m + c] += od->grad[base + c];
      }
    });
  }
  return out;
}

Tensor mean_rows(Tape& tape, const Tensor& a) {
  require_matrix(a, "mean_rows");
  const std::size_t n = a.rows(), m = a.cols();
  if (n == 0) throw DimensionError("mean_rows: no rows");
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result({1, m}, rg);
  Data ad = a.impl(), od = out.impl();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) od->value[c] += ad->value[r * m + c];
  }
  for (double& v : od->value) v /= static_cast<double>(n);
  if (rg) {
    tape.record([ad, od, n, m] {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) ad->grad[r * m + c] += od->grad[c] / static_cast<double>(n);
      }
    });
  }
  return out;
}

Tensor sum(Tape& tape, const Tensor& a) {
  require_matrix(a, "sum");
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result({1, 1}, rg);
  Data ad = a.impl(), od = out.impl();
  for (double v : ad->value) od->value[0] += v;
  if (rg) {
    tape.record([ad, od] {
      for (double& g : ad->grad) g += od->grad[0];
    });
  }
  return out;
}

Tensor dropout(Tape& tape, const Tensor& a, double p, bool training, std::mt19937_64& rng) {
  require_matrix(a, "dropout");
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("dropout rate must lie in [0, 1)");
  if (!training || p == 0.0) return a;
  const bool rg = tracks(tape, {&a});
  Tensor out = make_result(a.shape(), rg);
  Data ad = a.impl(), od = out.impl();
  auto mask = std::make_shared<std::vector<double>>(ad->value.size());
  std::bernoulli_distribution keep(1.0 - p);
  const double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < mask->size(); ++i) {
    (*mask)[i] = keep(rng) ? scale : 0.0;
    od->value[i] = ad->value[i] * (*mask)[i];
  }
  if (rg) {
    tape.record([ad, od, mask] {
      for (std::size_t i = 0; i < od->grad.size(); ++i) ad->grad[i] += od->grad[i] * (*mask)[i];
    });
  }
  return out;
}

Tensor graph_norm(Tape& tape, const Tensor& x, const Index& graph_ids, std::size_t num_graphs,
                  const Tensor& alpha, const Tensor& gamma, const Tensor& beta) {
  require_matrix(x, "graph_norm");
  const std::size_t n = x.rows(), m = x.cols();
  require_index(graph_ids, n, num_graphs, "graph_norm");
  for (const Tensor* p : {&alpha, &gamma, &beta}) {
    require_matrix(*p, "graph_norm");
    if (p->rows() != 1 || p->cols() != m) {
      throw DimensionError("graph_norm: affine parameter must be [1 x " + std::to_string(m) + "]");
    }
  }
  const bool rg = tracks(tape, {&x, &alpha, &gamma, &beta});
  Tensor out = make_result(x.shape(), rg);
  Data xd = x.impl(), ad = alpha.impl(), gd = gamma.impl(), bd = beta.impl(), od = out.impl();
  const std::vector<int>& gid = *graph_ids;

  std::vector<double> count(num_graphs, 0.0);
  for (int g : gid) count[static_cast<std::size_t>(g)] += 1.0;
  auto mean = std::make_shared<std::vector<double>>(num_graphs * m, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) (*mean)[gid[r] * m + c] += xd->value[r * m + c];
  }
  for (std::size_t i = 0; i < mean->size(); ++i) (*mean)[i] /= count[i / m];
  auto stdev = std::make_shared<std::vector<double>>(num_graphs * m, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double d = xd->value[r * m + c] - ad->value[c] * (*mean)[gid[r] * m + c];
      (*stdev)[gid[r] * m + c] += d * d;
    }
  }
  for (std::size_t i = 0; i < stdev->size(); ++i) {
    (*stdev)[i] = std::sqrt((*stdev)[i] / count[i / m] + kGraphNormEps);
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t s = gid[r] * m + c;
      const double d = xd->value[r * m + c] - ad->value[c] * (*mean)[s];
      od->value[r * m + c] = gd->value[c] * d / (*stdev)[s] + bd->value[c];
    }
  }

  if (rg) {
    tape.record([xd, ad, gd, bd, od, graph_ids, mean, stdev, count, num_graphs, n, m] {
      const std::vector<int>& gi = *graph_ids;
      auto dev = [&](std::size_t r, std::size_t c) {
        return xd->value[r * m + c] - ad->value[c] * (*mean)[gi[r] * m + c];
      };
      // d(loss)/d(stdev) folded into d(loss)/d(var), per graph and channel.
      std::vector<double> g_var(num_graphs * m, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          const std::size_t s = gi[r] * m + c;
          const double g = od->grad[r * m + c];
          const double sd = (*stdev)[s];
          if (bd->requires_grad) bd->grad[c] += g;
          if (gd->requires_grad) gd->grad[c] += g * dev(r, c) / sd;
          g_var[s] += -g * gd->value[c] * dev(r, c) / (sd * sd) / (2.0 * sd);
        }
      }
      std::vector<double> g_dev_sum(num_graphs * m, 0.0);
      std::vector<double> g_dev(n * m);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          const std::size_t s = gi[r] * m + c;
          const double gdv = od->grad[r * m + c] * gd->value[c] / (*stdev)[s] +
                             g_var[s] * 2.0 * dev(r, c) / count[gi[r]];
          g_dev[r * m + c] = gdv;
          g_dev_sum[s] += gdv;
        }
      }
      for (std::size_t s = 0; s < num_graphs * m; ++s) {
        const std::size_t c = s % m;
        if (ad->requires_grad) ad->grad[c] += -(*mean)[s] * g_dev_sum[s];
      }
      if (xd->requires_grad) {
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < m; ++c) {
            const std::size_t s = gi[r] * m + c;
            xd->grad[r * m + c] += g_dev[r * m + c] - ad->value[c] * g_dev_sum[s] / count[gi[r]];
          }
        }
      }
    });
  }
  return out;
}

Tensor cross_entropy_loss(Tape& tape, const Tensor& logits, std::span<const int> labels) {
  require_matrix(logits, "cross_entropy_loss");
  const std::size_t n = logits.rows(), m = logits.cols();
  if (labels.size() != n) throw DimensionError("cross_entropy_loss: label count mismatch");
  if (n == 0) throw DimensionError("cross_entropy_loss: no rows");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= m) {
      throw DomainError("cross_entropy_loss: label " + std::to_string(l) + " outside [0, " +
                        std::to_string(m) + ")");
    }
  }
  const bool rg = tracks(tape, {&logits});
  Tensor out = make_result({1, 1}, rg);
  Data ld = logits.impl(), od = out.impl();
  auto probs = std::make_shared<std::vector<double>>(n * m);
  auto lab = std::make_shared<std::vector<int>>(labels.begin(), labels.end());
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double* x = ld->value.data() + r * m;
    const double mx = *std::max_element(x, x + m);
    double z = 0.0;
    for (std::size_t c = 0; c < m; ++c) z += std::exp(x[c] - mx);
    const double log_z = std::log(z) + mx;
    for (std::size_t c = 0; c < m; ++c) (*probs)[r * m + c] = std::exp(x[c] - log_z);
    total += log_z - x[(*lab)[r]];
  }
  od->value[0] = total / static_cast<double>(n);
  if (rg) {
    tape.record([ld, od, probs, lab, n, m] {
      const double g = od->grad[0] / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          const double onehot = static_cast<int>(c) == (*lab)[r] ? 1.0 : 0.0;
          ld->grad[r * m + c] += g * ((*probs)[r * m + c] - onehot);
        }
      }
    });
  }
  return out;
}

Tensor mse_loss(Tape& tape, const Tensor& pred, std::span<const double> target) {
  require_matrix(pred, "mse_loss");
  const std::size_t n = pred.rows();
  if (pred.cols() != 1 || target.size() != n) throw DimensionError("mse_loss: length mismatch");
  if (n == 0) throw DimensionError("mse_loss: no rows");
  const bool rg = tracks(tape, {&pred});
  Tensor out = make_result({1, 1}, rg);
  Data pd = pred.impl(), od = out.impl();
  auto tgt = std::make_shared<std::vector<double>>(target.begin(), target.end());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pd->value[i] - (*tgt)[i];
    total += d * d;
  }
  od->value[0] = total / static_cast<double>(n);
  if (rg) {
    tape.record([pd, od, tgt, n] {
      for (std::size_t i = 0; i < n; ++i) {
        pd->grad[i] += od->grad[0] * 2.0 * (pd->value[i] - (*tgt)[i]) / static_cast<double>(n);
      }
    });
  }
  return out;
}

}  // namespace flowgnn::ad
