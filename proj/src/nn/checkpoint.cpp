#include "selfprompt/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>

#include "selfprompt/errors.hpp"

namespace selfprompt::nn {

namespace {

template <typename U>
void put(std::vector<std::byte>& out, U bits) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<std::byte>(bits & 0xFFu));
    if constexpr (sizeof(U) > 1) bits = static_cast<U>(bits >> 8);
  }
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::byte> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  template <typename U>
  U get() {
    need(sizeof(U));
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bits = static_cast<U>(bits | (static_cast<U>(std::to_integer<std::uint8_t>(bytes_[pos_ + i]))
                                    << (8 * i)));
    }
    pos_ += sizeof(U);
    return bits;
  }

  std::string string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw CorruptionError("checkpoint truncated");
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

NamedArray NamedArray::from(const Matrix& m) {
  return {{m.rows(), m.cols()}, {m.values().begin(), m.values().end()}};
}

NamedArray NamedArray::from(const Tensor3& t) {
  return {{t.depth(), t.tokens(), t.channels()}, {t.values().begin(), t.values().end()}};
}

NamedArray NamedArray::from(const std::vector<double>& v) { return {{v.size()}, v}; }

Matrix NamedArray::to_matrix() const {
  if (dims.size() != 2) throw ValidationError("array is not rank 2");
  return Matrix(dims[0], dims[1], values);
}

std::vector<std::byte> encode_checkpoint(const Checkpoint& ckpt) {
  std::vector<std::byte> out;
  for (const auto& [name, array] : ckpt) {
    std::uint64_t expected = 1;
    for (const auto d : array.dims) expected *= d;
    if (expected != array.values.size()) throw ValidationError("array '" + name + "' size mismatch");
    if (array.dims.size() > 255) throw ValidationError("array '" + name + "' rank too large");
    put(out, static_cast<std::uint32_t>(name.size()));
    const auto* p = reinterpret_cast<const std::byte*>(name.data());
    out.insert(out.end(), p, p + name.size());
    put(out, static_cast<std::uint8_t>(array.dims.size()));
    for (const auto d : array.dims) put(out, d);
    for (const double v : array.values) put(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Checkpoint decode_checkpoint(std::span<const std::byte> bytes) {
  Checkpoint ckpt;
  Cursor in(bytes);
  while (!in.done()) {
    const auto len = in.get<std::uint32_t>();
    std::string name = in.string(len);
    NamedArray array;
    const auto rank = in.get<std::uint8_t>();
    std::uint64_t count = 1;
    for (std::uint8_t r = 0; r < rank; ++r) {
      const auto d = in.get<std::uint64_t>();
      if (d != 0 && count > std::numeric_limits<std::uint64_t>::max() / 8 / d) {
        throw CorruptionError("checkpoint array '" + name + "' is impossibly large");
      }
      count *= d;
      array.dims.push_back(d);
    }
    if (count > bytes.size()) throw CorruptionError("checkpoint truncated");
    array.values.resize(count);
    for (auto& v : array.values) v = std::bit_cast<double>(in.get<std::uint64_t>());
    if (!ckpt.emplace(std::move(name), std::move(array)).second) {
      throw FormatError("duplicate array name in checkpoint");
    }
  }
  return ckpt;
}

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(std::as_bytes(std::span<const char>(raw)));
}

}  // namespace selfprompt::nn
