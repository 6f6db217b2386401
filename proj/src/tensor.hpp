#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codes.hpp"

namespace szt {

// Threshold/scale granularity. axis is meaningful only for PerChannel.
struct Granularity {
  enum class Mode { PerLayer, PerChannel };
  Mode mode = Mode::PerLayer;
  int axis = 0;

  static Granularity per_layer() { return {Mode::PerLayer, 0}; }
  static Granularity per_channel(int axis) { return {Mode::PerChannel, axis}; }
  bool per_layer_mode() const { return mode == Mode::PerLayer; }
};

// Shape + per-layer/per-channel thresholds and scales + 2-bit packed payload.
// Payload is row-major, four codes per byte; trailing slots hold the
// ZeroPlus pattern. All thresholds and scales are strictly positive.
struct PackedTernaryTensor {
  std::vector<std::int64_t> dims;
  Granularity granularity;
  std::vector<double> thresholds;  // length 1 or dims[axis]
  std::vector<double> scales;      // same length as thresholds
  std::vector<std::uint8_t> payload;

  std::int64_t numel() const;
  std::vector<TernaryCode> codes() const { return unpack_codes(payload, static_cast<std::size_t>(numel())); }

  // Channel index of flat element i under this granularity (0 if per-layer).
  std::int64_t channel_of(std::int64_t flat_index) const;

  double threshold_of(std::int64_t flat_index) const { return thresholds[static_cast<std::size_t>(channel_of(flat_index))]; }
  double scale_of(std::int64_t flat_index) const { return scales[static_cast<std::size_t>(channel_of(flat_index))]; }

  // Decoded numeric values times the per-channel scale.
  std::vector<double> decode() const;

  void validate() const;  // throws std::invalid_argument on bad invariants
};

// Binary container format, little-endian throughout:
//   "SZT1"                     magic
//   u8 version (= 1)
//   u8 granularity tag: 0 = per-layer, 1 + axis = per-channel along axis
//   u8 rank
//   u64 dims[rank]
//   u64 threshold count, f64 thresholds[count]
//   u64 scale count,     f64 scales[count]
//   payload bytes, ceil(numel / 4)
void save_szt(const PackedTernaryTensor& t, const std::string& path);
PackedTernaryTensor load_szt(const std::string& path);

// Dense float32 weights file (flat, little-endian) with a JSON sidecar
// holding {"dims": [...]}. sidecar_path defaults to data_path + ".json".
struct DenseTensor {
  std::vector<std::int64_t> dims;
  std::vector<float> values;
  std::int64_t numel() const;
};

DenseTensor load_f32_tensor(const std::string& data_path,
                            const std::string& sidecar_path = "");
void save_f32_tensor(const DenseTensor& t, const std::string& data_path,
                     const std::string& sidecar_path = "");

}  // namespace szt
