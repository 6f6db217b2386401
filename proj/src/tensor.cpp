#include "tensor.hpp"

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "errors.hpp"

namespace szt {

namespace {

void write_bytes(std::ofstream& f, const void* p, std::size_t n) {
  f.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& f, void* p, std::size_t n, const char* what) {
  f.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(f.gcount()) != n) {
    throw IoError(std::string("truncated szt file while reading ") + what);
  }
}

void write_u64(std::ofstream& f, std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = std::uint8_t(v >> (8 * i));
  write_bytes(f, b, 8);
}

std::uint64_t read_u64(std::ifstream& f, const char* what) {
  std::uint8_t b[8];
  read_bytes(f, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ofstream& f, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  write_u64(f, v);
}

double read_f64(std::ifstream& f, const char* what) {
  const std::uint64_t v = read_u64(f, what);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

std::int64_t PackedTernaryTensor::numel() const {
  std::int64_t n = 1;
  for (auto d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

std::int64_t PackedTernaryTensor::channel_of(std::int64_t flat_index) const {
  if (granularity.per_layer_mode()) return 0;
  // Row-major: stride of `axis` is the product of trailing dims.
  std::int64_t stride = 1;
  for (std::size_t d = static_cast<std::size_t>(granularity.axis) + 1; d < dims.size(); ++d) {
    stride *= dims[d];
  }
  return (flat_index / stride) % dims[static_cast<std::size_t>(granularity.axis)];
}

std::vector<double> PackedTernaryTensor::decode() const {
  const auto cs = codes();
  std::vector<double> out(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out[i] = scale_of(static_cast<std::int64_t>(i)) * numeric_value(cs[i]);
  }
  return out;
}

void PackedTernaryTensor::validate() const {
  if (dims.empty()) throw std::invalid_argument("tensor has no dims");
  for (auto d : dims) {
    if (d <= 0) throw std::invalid_argument("tensor dims must be positive");
  }
  std::size_t expect = 1;
  if (!granularity.per_layer_mode()) {
    if (granularity.axis < 0 || granularity.axis >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("per-channel axis out of range");
    }
    expect = static_cast<std::size_t>(dims[static_cast<std::size_t>(granularity.axis)]);
  }
  if (thresholds.size() != expect || scales.size() != expect) {
    throw std::invalid_argument("threshold/scale count does not match granularity");
  }
  for (double t : thresholds) {
    if (!(t > 0.0)) throw std::invalid_argument("thresholds must be strictly positive");
  }
  for (double s : scales) {
    if (!(s > 0.0)) throw std::invalid_argument("scales must be strictly positive");
  }
  const auto need = static_cast<std::size_t>((numel() + 3) / 4);
  if (payload.size() != need) {
    throw std::invalid_argument("payload length must be ceil(numel/4) bytes");
  }
}

void save_szt(const PackedTernaryTensor& t, const std::string& path) {
  t.validate();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  write_bytes(f, "SZT1", 4);
  const std::uint8_t version = 1;
  write_bytes(f, &version, 1);
  const std::uint8_t tag = t.granularity.per_layer_mode()
                               ? std::uint8_t(0)
                               : std::uint8_t(1 + t.granularity.axis);
  write_bytes(f, &tag, 1);
  const std::uint8_t rank = std::uint8_t(t.dims.size());
  write_bytes(f, &rank, 1);
  for (auto d : t.dims) write_u64(f, std::uint64_t(d));
  write_u64(f, t.thresholds.size());
  for (double v : t.thresholds) write_f64(f, v);
  write_u64(f, t.scales.size());
  for (double v : t.scales) write_f64(f, v);
  write_bytes(f, t.payload.data(), t.payload.size());
  if (!f) throw IoError("short write: " + path);
}

PackedTernaryTensor load_szt(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  char magic[4];
  read_bytes(f, magic, 4, "magic");
  if (std::memcmp(magic, "SZT1", 4) != 0) throw IoError("bad magic, not an szt file: " + path);
  std::uint8_t version, tag, rank;
  read_bytes(f, &version, 1, "version");
  if (version != 1) throw IoError("unsupported szt version");
  read_bytes(f, &tag, 1, "granularity");
  read_bytes(f, &rank, 1, "rank");
  PackedTernaryTensor t;
  t.granularity = tag == 0 ? Granularity::per_layer() : Granularity::per_channel(int(tag) - 1);
  t.dims.resize(rank);
  for (auto& d : t.dims) d = std::int64_t(read_u64(f, "dims"));
  const auto nt = read_u64(f, "threshold count");
  t.thresholds.resize(nt);
  for (auto& v : t.thresholds) v = read_f64(f, "thresholds");
  const auto ns = read_u64(f, "scale count");
  t.scales.resize(ns);
  for (auto& v : t.scales) v = read_f64(f, "scales");
  t.payload.resize(static_cast<std::size_t>((t.numel() + 3) / 4));
  read_bytes(f, t.payload.data(), t.payload.size(), "payload");
  t.validate();
  return t;
}

std::int64_t DenseTensor::numel() const {
  std::int64_t n = 1;
  for (auto d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

DenseTensor load_f32_tensor(const std::string& data_path, const std::string& sidecar_path) {
  const std::string side = sidecar_path.empty() ? data_path + ".json" : sidecar_path;
  std::ifstream sj(side);
  if (!sj) throw IoError("cannot open sidecar: " + side);
  nlohmann::json j;
  sj >> j;
  if (!j.contains("dims") || !j["dims"].is_array()) {
    throw IoError("sidecar missing dims array: " + side);
  }
  DenseTensor t;
  for (const auto& d : j["dims"]) t.dims.push_back(d.get<std::int64_t>());
  const auto n = t.numel();
  if (n <= 0) throw IoError("sidecar dims describe an empty tensor: " + side);
  std::ifstream f(data_path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + data_path);
  t.values.resize(static_cast<std::size_t>(n));
  f.read(reinterpret_cast<char*>(t.values.data()),
         static_cast<std::streamsize>(sizeof(float) * t.values.size()));
  if (static_cast<std::size_t>(f.gcount()) != sizeof(float) * t.values.size()) {
    throw IoError("weights file shorter than sidecar dims imply: " + data_path);
  }
  return t;
}

void save_f32_tensor(const DenseTensor& t, const std::string& data_path, const std::string& sidecar_path) {
  std::ofstream f(data_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + data_path);
  f.write(reinterpret_cast<const char*>(t.values.data()),
          static_cast<std::streamsize>(sizeof(float) * t.values.size()));
  if (!f) throw IoError("short write: " + data_path);
  const std::string side = sidecar_path.empty() ? data_path + ".json" : sidecar_path;
  std::ofstream sj(side, std::ios::trunc);
  if (!sj) throw IoError("cannot open for writing: " + side);
  nlohmann::json j;
  j["dims"] = t.dims;
  sj << j.dump(2) << "\n";
}

}  // namespace szt
