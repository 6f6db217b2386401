#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grad.hpp"
#include "kernel.hpp"
#include "quantize.hpp"

namespace szt {

// Synthetic desk-scale tasks.
struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
  std::size_t size() const { return inputs.size(); }
};

enum class Task { Regression, Parity };

// Regression: y = A x + noise, A and x drawn from the seed.
// Parity: inputs in {-1,+1}^in_dim, label = XOR of the sign bits; when
// size == 2^in_dim the inputs enumerate the full cube.
Dataset synth_dataset(Task kind, std::int64_t size, std::uint64_t seed,
                      int in_dim, int out_dim, double noise = 0.0);

// Two dense layers (in -> hidden -> out) with ReLU between; latent weights
// are full precision, codes are recomputed every step.
struct ToyNet {
  Matrix w1, w2;
  std::vector<double> b1, b2;

  static ToyNet init(int in, int hidden, int out, std::uint64_t seed);
};

enum class DeltaRefresh { Never, PerEpoch };

struct TrainConfig {
  SteKind ste = SteKind::SZT;
  Task task = Task::Regression;
  int in_dim = 6;
  int hidden_dim = 10;
  int out_dim = 3;
  std::int64_t dataset_size = 256;
  double noise = 0.05;
  int epochs = 3;
  int batch = 32;
  std::vector<double> lr_schedule = {0.05};  // cycled if shorter than steps
  double momentum_beta = 0.9;
  std::uint64_t seed = 0;
  DeltaRefresh delta_refresh = DeltaRefresh::Never;
  int threads = 1;

  void validate() const;
};

struct RunReport {
  std::vector<double> loss_curve;  // one entry per epoch
  std::uint64_t numeric_transitions = 0;         // numeric value changed
  std::uint64_t representational_transitions = 0;  // sign flip, numeric same
  std::string checkpoint_digest;                 // sha256 of latent state + codes
  double final_loss = 0.0;
};

// Optimizer state for the latent weights, classical momentum.
struct TrainState {
  Matrix m1, m2;
  std::vector<double> mb1, mb2;
  std::vector<TernaryCode> codes1, codes2;
  double delta1 = 0.0, delta2 = 0.0;
  std::uint64_t numeric_transitions = 0;
  std::uint64_t representational_transitions = 0;
  std::uint64_t step_index = 0;
};

// Executes one update: encode latent weights, decode, forward, loss,
// straight-through backward, momentum step on the latent weights; counts
// code transitions against the previous step. Returns the batch loss.
// Throws DivergedError when the loss stops being finite.
double qat_step(ToyNet& net, const Dataset& data, const std::vector<std::size_t>& batch_idx,
                const TrainConfig& config, TrainState& state, double lr,
                RandomSource* sr_rng);

// Full loop per the QAT recipe with a seed-derived deterministic batch
// order. Identical config + seed reproduces the digest bit-exactly at any
// thread count. When final_net/final_state are given they receive the
// trained latent weights and the last step's codes and thresholds.
RunReport train(const TrainConfig& config, const Dataset& data,
                ToyNet* final_net = nullptr, TrainState* final_state = nullptr);
RunReport train(const TrainConfig& config, ToyNet* final_net = nullptr,
                TrainState* final_state = nullptr);

// Writes <prefix>_w1.szt / <prefix>_w2.szt plus the latent weights as
// float32 files with sidecars (<prefix>_w1.bin, ...).
void save_checkpoint(const ToyNet& net, const TrainState& state,
                     const std::string& prefix);

// Helpers shared with the verification suites.
std::string digest_checkpoint(const ToyNet& net, const TrainState& state);

}  // namespace szt
