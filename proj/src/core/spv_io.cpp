#include "selfprompt/spv_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'V', '1'};
constexpr std::uint8_t kDtypeLabels = 0;
constexpr std::uint8_t kDtypeScalars = 1;

class Writer {
 public:
  explicit Writer(std::size_t reserve) { bytes_.reserve(reserve); }

  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::byte*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  template <typename T>
  void le(T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                                       std::uint8_t>>>;
    auto bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes_.push_back(static_cast<std::byte>(bits & 0xFFu));
      if constexpr (sizeof(T) > 1) bits = static_cast<U>(bits >> 8);
    }
  }
  std::vector<std::byte> take() { return std::move(bytes_); }

 private:
  std::vector<std::byte> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  template <typename T>
  T le() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                                       std::uint8_t>>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits = static_cast<U>(bits | (static_cast<U>(std::to_integer<std::uint8_t>(bytes_[pos_ + i]))
                                    << (8 * i)));
    }
    pos_ += sizeof(T);
    return std::bit_cast<T>(bits);
  }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, std::uint8_t dtype, std::size_t channels, std::uint64_t k,
                  const Dims& dims, const Spacing& spacing) {
  w.raw(kMagic, 4);
  w.le<std::uint32_t>(kSpvVersion);
  w.le<std::uint8_t>(dtype);
  w.le<std::uint8_t>(channels == 1 ? 3 : 4);
  w.le<std::uint16_t>(0);
  w.le<std::uint64_t>(dims.nx);
  w.le<std::uint64_t>(dims.ny);
  w.le<std::uint64_t>(dims.nz);
  w.le<std::uint64_t>(channels);
  w.le<std::uint64_t>(k);
  w.le<double>(spacing.sx);
  w.le<double>(spacing.sy);
  w.le<double>(spacing.sz);
}

// Multiplies with overflow detection; overflow means the header cannot
// describe any real file.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw CorruptionError("SPV header describes an impossibly large payload");
  }
  return a * b;
}

void write_bytes(const std::vector<std::byte>& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::vector<std::byte> encode_spv(const LabelVolume& volume) {
  Writer w(kSpvHeaderSize + volume.labels().size());
  write_header(w, kDtypeLabels, 1, static_cast<std::uint64_t>(volume.num_classes()), volume.dims(),
               volume.spacing());
  w.raw(volume.labels().data(), volume.labels().size());
  return w.take();
}

std::vector<std::byte> encode_spv(const ScalarVolume& volume) {
  // Re-validate: a moved-from or default volume must not reach disk.
  for (const double v : volume.values()) {
    if (!std::isfinite(v)) throw ValidationError("refusing to write non-finite scalar volume");
  }
  Writer w(kSpvHeaderSize + volume.values().size() * 8);
  write_header(w, kDtypeScalars, volume.channels(), 0, volume.dims(), volume.spacing());
  for (const double v : volume.values()) w.le<double>(v);
  return w.take();
}

SpvVolume decode_spv(std::span<const std::byte> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("not an SPV file (bad magic)");
  }
  if (bytes.size() < kSpvHeaderSize) {
    throw CorruptionError("SPV header truncated: " + std::to_string(bytes.size()) + " bytes");
  }
  Reader r(bytes.subspan(4));
  const auto version = r.le<std::uint32_t>();
  if (version != kSpvVersion) {
    throw FormatError("unsupported SPV version " + std::to_string(version));
  }
  const auto dtype = r.le<std::uint8_t>();
  const auto rank = r.le<std::uint8_t>();
  const auto reserved = r.le<std::uint16_t>();
  Dims dims;
  dims.nx = r.le<std::uint64_t>();
  dims.ny = r.le<std::uint64_t>();
  dims.nz = r.le<std::uint64_t>();
  const auto channels = r.le<std::uint64_t>();
  const auto k = r.le<std::uint64_t>();
  Spacing spacing;
  spacing.sx = r.le<double>();
  spacing.sy = r.le<double>();
  spacing.sz = r.le<double>();

  if (dtype != kDtypeLabels && dtype != kDtypeScalars) {
    throw FormatError("unknown SPV dtype " + std::to_string(dtype));
  }
  if (rank != 3 && rank != 4) throw FormatError("unsupported SPV rank " + std::to_string(rank));
  if (reserved != 0) throw FormatError("SPV reserved field must be zero");
  if (channels == 0 || rank != (channels == 1 ? 3 : 4)) {
    throw FormatError("SPV channel count inconsistent with rank");
  }
  if (dtype == kDtypeLabels && (rank != 3 || k == 0)) {
    throw FormatError("SPV label volume must be rank 3 with K >= 1");
  }
  if (dtype == kDtypeScalars && k != 0) throw FormatError("SPV scalar volume must have K = 0");

  const std::uint64_t elements = checked_mul(checked_mul(checked_mul(dims.nx, dims.ny), dims.nz), channels);
  const std::uint64_t payload = checked_mul(elements, dtype == kDtypeLabels ? 1 : 8);
  const std::uint64_t available = bytes.size() - kSpvHeaderSize;
  if (payload != available) {
    throw CorruptionError("SPV payload is " + std::to_string(available) + " bytes, header implies " +
                          std::to_string(payload));
  }

  const auto body = bytes.subspan(kSpvHeaderSize);
  if (dtype == kDtypeLabels) {
    if (k > 256) throw ValidationError("SPV label volume declares K > 256");
    std::vector<std::uint8_t> labels(elements);
    std::memcpy(labels.data(), body.data(), elements);
    return LabelVolume(dims, spacing, static_cast<int>(k), std::move(labels));
  }
  std::vector<double> values(elements);
  Reader pr(body);
  for (auto& v : values) v = pr.le<double>();
  return ScalarVolume(dims, spacing, channels, std::move(values));
}

SpvVolume read_spv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_spv(std::as_bytes(std::span<const char>(raw)));
}

void write_spv(const LabelVolume& volume, const std::filesystem::path& path) {
  write_bytes(encode_spv(volume), path);
}

void write_spv(const ScalarVolume& volume, const std::filesystem::path& path) {
  write_bytes(encode_spv(volume), path);
}

void write_spv(const SpvVolume& volume, const std::filesystem::path& path) {
  std::visit([&path](const auto& v) { write_spv(v, path); }, volume);
}

LabelVolume read_label_spv(const std::filesystem::path& path) {
  auto volume = read_spv(path);
  if (auto* labels = std::get_if<LabelVolume>(&volume)) return std::move(*labels);
  throw FormatError("'" + path.string() + "' holds a scalar volume, expected labels");
}

ScalarVolume read_scalar_spv(const std::filesystem::path& path) {
  auto volume = read_spv(path);
  if (auto* scalars = std::get_if<ScalarVolume>(&volume)) return std::move(*scalars);
  throw FormatError("'" + path.string() + "' holds a label volume, expected scalars");
}

}  // namespace selfprompt
