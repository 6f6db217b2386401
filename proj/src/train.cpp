#include "train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "errors.hpp"
#include "sha256.hpp"

namespace szt {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

// Dense y = W x + b with a fixed per-row accumulation order; rows may be
// split across threads without changing any result.
std::vector<double> affine(const Matrix& w, std::span<const double> x,
                           const std::vector<double>& b, int threads) {
  std::vector<double> y(std::size_t(w.rows), 0.0);
  const auto rows = [&](std::int64_t r0, std::int64_t r1) {
    for (std::int64_t i = r0; i < r1; ++i) {
      double acc = 0.0;
      for (std::int64_t j = 0; j < w.cols; ++j) acc += w.at(i, j) * x[std::size_t(j)];
      y[std::size_t(i)] = acc + b[std::size_t(i)];
    }
  };
  if (threads <= 1 || w.rows < 2 * threads) {
    rows(0, w.rows);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (w.rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::int64_t a = t * chunk;
      const std::int64_t b2 = std::min<std::int64_t>(w.rows, a + chunk);
      if (a >= b2) break;
      pool.emplace_back(rows, a, b2);
    }
    for (auto& th : pool) th.join();
  }
  return y;
}

std::vector<TernaryCode> encode_layer(const Matrix& w, double delta, SteKind ste,
                                      RandomSource* sr_rng) {
  std::vector<TernaryCode> codes(w.a.size());
  for (std::size_t i = 0; i < w.a.size(); ++i) {
    switch (ste) {
      case SteKind::BT: codes[i] = encode_bt(w.a[i], delta); break;
      case SteKind::SZT: codes[i] = encode_szt(w.a[i], delta); break;
      case SteKind::SR: codes[i] = sr_round(w.a[i], delta, *sr_rng); break;
    }
  }
  return codes;
}

Matrix decode_layer(const Matrix& w, const std::vector<TernaryCode>& codes, double delta) {
  Matrix out(w.rows, w.cols);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out.a[i] = delta * numeric_value(codes[i]);
  }
  return out;
}

double layer_delta(const Matrix& w) {
  return sample_std(std::span<const double>(w.a.data(), w.a.size()));
}

void count_transitions(const std::vector<TernaryCode>& prev,
                       const std::vector<TernaryCode>& cur,
                       std::uint64_t& numeric, std::uint64_t& representational) {
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (prev[i] == cur[i]) continue;
    if (numeric_value(prev[i]) != numeric_value(cur[i])) {
      ++numeric;
    } else {
      ++representational;
    }
  }
}

}  // namespace

Dataset synth_dataset(Task kind, std::int64_t size, std::uint64_t seed,
                      int in_dim, int out_dim, double noise) {
  if (size < 1) throw std::invalid_argument("dataset size must be >= 1");
  if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("dataset dims must be >= 1");
  Dataset d;
  RandomSource rng(seed);
  if (kind == Task::Regression) {
    Matrix a(out_dim, in_dim);
    for (auto& v : a.a) v = rng.normal() / std::sqrt(double(in_dim));
    for (std::int64_t i = 0; i < size; ++i) {
      std::vector<double> x(static_cast<std::size_t>(in_dim));
      for (auto& v : x) v = rng.normal();
      auto y = matvec(a, x);
      for (auto& v : y) v += noise * rng.normal();
      d.inputs.push_back(std::move(x));
      d.targets.push_back(std::move(y));
    }
  } else {
    const std::int64_t full = in_dim < 62 ? (std::int64_t(1) << in_dim) : -1;
    for (std::int64_t i = 0; i < size; ++i) {
      std::vector<double> x(static_cast<std::size_t>(in_dim));
      std::int64_t bits = (full > 0 && size == full) ? i : std::int64_t(rng.next_u64() >> 2);
      int parity = 0;
      for (int j = 0; j < in_dim; ++j) {
        const int bit = int((bits >> j) & 1);
        x[std::size_t(j)] = bit ? 1.0 : -1.0;
        parity ^= bit;
      }
      d.inputs.push_back(std::move(x));
      d.targets.push_back({double(parity)});
    }
  }
  return d;
}

ToyNet ToyNet::init(int in, int hidden, int out, std::uint64_t seed) {
  if (in < 1 || hidden < 1 || out < 1) throw std::invalid_argument("net dims must be >= 1");
  ToyNet net;
  RandomSource rng(seed);
  net.w1 = Matrix(hidden, in);
  net.w2 = Matrix(out, hidden);
  for (auto& v : net.w1.a) v = rng.normal() / std::sqrt(double(in));
  for (auto& v : net.w2.a) v = rng.normal() / std::sqrt(double(hidden));
  net.b1.assign(std::size_t(hidden), 0.0);
  net.b2.assign(std::size_t(out), 0.0);
  return net;
}

void TrainConfig::validate() const {
  if (epochs < 1 || batch < 1) throw std::invalid_argument("epochs and batch must be >= 1");
  if (lr_schedule.empty()) throw std::invalid_argument("learning-rate schedule is empty");
  for (double a : lr_schedule) {
    if (!(a >= 0.0)) throw std::invalid_argument("learning rates must be >= 0");
  }
  if (!(momentum_beta >= 0.0 && momentum_beta < 1.0)) {
    throw std::invalid_argument("momentum beta must lie in [0, 1)");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (task == Task::Parity && out_dim != 1) {
    throw std::invalid_argument("parity task uses out_dim == 1");
  }
}

double qat_step(ToyNet& net, const Dataset& data, const std::vector<std::size_t>& batch_idx,
                const TrainConfig& config, TrainState& state, double lr,
                RandomSource* sr_rng) {
  // Encode and decode the latent weights of both layers.
  const auto codes1 = encode_layer(net.w1, state.delta1, config.ste, sr_rng);
  const auto codes2 = encode_layer(net.w2, state.delta2, config.ste, sr_rng);
  if (state.step_index > 0) {
    count_transitions(state.codes1, codes1, state.numeric_transitions,
                      state.representational_transitions);
    count_transitions(state.codes2, codes2, state.numeric_transitions,
                      state.representational_transitions);
  }
  state.codes1 = codes1;
  state.codes2 = codes2;
  ++state.step_index;

  const Matrix q1 = decode_layer(net.w1, codes1, state.delta1);
  const Matrix q2 = decode_layer(net.w2, codes2, state.delta2);

  // Accumulate batch gradients with respect to the decoded weights.
  Matrix g1(net.w1.rows, net.w1.cols), g2(net.w2.rows, net.w2.cols);
  std::vector<double> gb1(net.b1.size(), 0.0), gb2(net.b2.size(), 0.0);
  double loss = 0.0;
  const double inv_b = 1.0 / double(batch_idx.size());

  for (const std::size_t idx : batch_idx) {
    const auto& x = data.inputs[idx];
    const auto& y = data.targets[idx];
    const auto z1 = affine(q1, x, net.b1, config.threads);
    std::vector<double> h(z1.size());
    for (std::size_t i = 0; i < z1.size(); ++i) h[i] = relu(z1[i]);
    const auto out = affine(q2, h, net.b2, config.threads);

    std::vector<double> dout(out.size());
    if (config.task == Task::Regression) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double e = out[i] - y[i];
        loss += 0.5 * e * e * inv_b;
        dout[i] = e * inv_b;
      }
    } else {
      // logistic loss on a single logit
      const double logit = out[0];
      const double target = y[0];
      const double p = 1.0 / (1.0 + std::exp(-logit));
      loss += inv_b * (std::log1p(std::exp(-std::fabs(logit))) +
                       (logit > 0.0 ? logit * (1.0 - target) : -logit * target));
      dout[0] = (p - target) * inv_b;
    }

    for (std::int64_t i = 0; i < g2.rows; ++i) {
      for (std::int64_t j = 0; j < g2.cols; ++j) {
        g2.at(i, j) += dout[std::size_t(i)] * h[std::size_t(j)];
      }
      gb2[std::size_t(i)] += dout[std::size_t(i)];
    }
    std::vector<double> dh(h.size(), 0.0);
    for (std::int64_t j = 0; j < q2.cols; ++j) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < q2.rows; ++i) acc += q2.at(i, j) * dout[std::size_t(i)];
      dh[std::size_t(j)] = z1[std::size_t(j)] > 0.0 ? acc : 0.0;
    }
    for (std::int64_t i = 0; i < g1.rows; ++i) {
      for (std::int64_t j = 0; j < g1.cols; ++j) {
        g1.at(i, j) += dh[std::size_t(i)] * x[std::size_t(j)];
      }
      gb1[std::size_t(i)] += dh[std::size_t(i)];
    }
  }

  if (!std::isfinite(loss)) {
    throw DivergedError("training loss is not finite at step " + std::to_string(state.step_index));
  }

  // Straight-through mapping onto the latent weights, then momentum update.
  const auto update_layer = [&](Matrix& w, Matrix& m, const Matrix& g,
                                const std::vector<TernaryCode>& codes, double delta) {
    for (std::size_t i = 0; i < w.a.size(); ++i) {
      double gw = g.a[i];
      if (std::fabs(w.a[i]) <= delta && config.ste == SteKind::SZT) {
        gw *= stored_sign(codes[i]);
      }
      m.a[i] = config.momentum_beta * m.a[i] + gw;
      w.a[i] -= lr * m.a[i];
    }
  };
  update_layer(net.w1, state.m1, g1, codes1, state.delta1);
  update_layer(net.w2, state.m2, g2, codes2, state.delta2);
  for (std::size_t i = 0; i < net.b1.size(); ++i) {
    state.mb1[i] = config.momentum_beta * state.mb1[i] + gb1[i];
    net.b1[i] -= lr * state.mb1[i];
  }
  for (std::size_t i = 0; i < net.b2.size(); ++i) {
    state.mb2[i] = config.momentum_beta * state.mb2[i] + gb2[i];
    net.b2[i] -= lr * state.mb2[i];
  }
  return loss;
}

std::string digest_checkpoint(const ToyNet& net, const TrainState& state) {
  Sha256 h;
  const auto add_doubles = [&h](const std::vector<double>& v) {
    h.update(v.data(), v.size() * sizeof(double));
  };
  add_doubles(net.w1.a);
  add_doubles(net.b1);
  add_doubles(net.w2.a);
  add_doubles(net.b2);
  const auto p1 = pack_codes(state.codes1);
  const auto p2 = pack_codes(state.codes2);
  h.update(p1.data(), p1.size());
  h.update(p2.data(), p2.size());
  return Sha256::hex(h.digest());
}

RunReport train(const TrainConfig& config, const Dataset& data, ToyNet* final_net,
                TrainState* final_state) {
  config.validate();
  if (data.size() == 0) throw std::invalid_argument("dataset is empty");

  ToyNet net = ToyNet::init(config.in_dim, config.hidden_dim, config.out_dim,
                            config.seed ^ 0x746f796e65740000ull);
  TrainState state;
  state.m1 = Matrix(net.w1.rows, net.w1.cols);
  state.m2 = Matrix(net.w2.rows, net.w2.cols);
  state.mb1.assign(net.b1.size(), 0.0);
  state.mb2.assign(net.b2.size(), 0.0);
  state.delta1 = layer_delta(net.w1);
  state.delta2 = layer_delta(net.w2);

  RandomSource order_rng = RandomSource(config.seed).split(1);
  RandomSource sr_rng = RandomSource(config.seed).split(2);

  RunReport report;
  std::vector<std::size_t> perm(data.size());
  std::iota(perm.begin(), perm.end(), std::size_t(0));
  std::uint64_t lr_cursor = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.delta_refresh == DeltaRefresh::PerEpoch) {
      state.delta1 = layer_delta(net.w1);
      state.delta2 = layer_delta(net.w2);
    }
    // Fisher-Yates from the order stream; batch order is part of the seed.
    for (std::size_t i = perm.size(); i > 1; --i) {
      const std::size_t j = std::size_t(order_rng.next_u64() % i);
      std::swap(perm[i - 1], perm[j]);
    }
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < perm.size(); start += std::size_t(config.batch)) {
      const std::size_t end = std::min(perm.size(), start + std::size_t(config.batch));
      const std::vector<std::size_t> batch(perm.begin() + std::ptrdiff_t(start),
                                           perm.begin() + std::ptrdiff_t(end));
      const double lr = config.lr_schedule[lr_cursor % config.lr_schedule.size()];
      ++lr_cursor;
      epoch_loss += qat_step(net, data, batch, config, state, lr,
                             config.ste == SteKind::SR ? &sr_rng : nullptr);
      ++batches;
    }
    report.loss_curve.push_back(epoch_loss / double(batches));
  }

  report.numeric_transitions = state.numeric_transitions;
  report.representational_transitions = state.representational_transitions;
  report.final_loss = report.loss_curve.back();
  report.checkpoint_digest = digest_checkpoint(net, state);
  if (final_net != nullptr) *final_net = net;
  if (final_state != nullptr) *final_state = std::move(state);
  return report;
}

RunReport train(const TrainConfig& config, ToyNet* final_net, TrainState* final_state) {
  const Dataset data =
      synth_dataset(config.task, config.dataset_size, config.seed ^ 0x64617461u,
                    config.in_dim, config.out_dim, config.noise);
  return train(config, data, final_net, final_state);
}

void save_checkpoint(const ToyNet& net, const TrainState& state, const std::string& prefix) {
  const auto save_layer = [&](const Matrix& w, const std::vector<TernaryCode>& codes,
                              double delta, const std::string& name) {
    PackedTernaryTensor t;
    t.dims = {w.rows, w.cols};
    t.granularity = Granularity::per_layer();
    t.thresholds = {delta};
    t.scales = {delta};
    t.payload = pack_codes(codes);
    save_szt(t, prefix + "_" + name + ".szt");

    DenseTensor latent;
    latent.dims = t.dims;
    latent.values.assign(w.a.begin(), w.a.end());
    save_f32_tensor(latent, prefix + "_" + name + ".bin");
  };
  save_layer(net.w1, state.codes1, state.delta1, "w1");
  save_layer(net.w2, state.codes2, state.delta2, "w2");
}

}  // namespace szt
