#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "selfprompt/errors.hpp"
#include "selfprompt/spv_io.hpp"
#include "selfprompt/synth.hpp"
#include "selfprompt/volume.hpp"

namespace selfprompt {
namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("selfprompt_core_" + name);
}

std::vector<std::byte> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

std::uint64_t u64_at(const std::vector<std::byte>& b, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | std::to_integer<std::uint64_t>(b[off + static_cast<std::size_t>(i)]);
  return v;
}

TEST(LabelVolumeTest, RejectsLabelsAtOrAboveK) {
  EXPECT_THROW(LabelVolume({2, 1, 1}, {}, 2, {0, 2}), ValidationError);
  EXPECT_THROW(LabelVolume({2, 1, 1}, {}, 2, {0}), ValidationError);
  EXPECT_THROW(LabelVolume({2, 1, 1}, {0.0, 1.0, 1.0}, 2), ValidationError);
  EXPECT_THROW(LabelVolume({0, 1, 1}, {}, 2), ValidationError);
}

TEST(ScalarVolumeTest, RejectsNonFiniteValues) {
  EXPECT_THROW(ScalarVolume({1, 1, 1}, {}, 1, {std::numeric_limits<double>::quiet_NaN()}),
               ValidationError);
  EXPECT_THROW(ScalarVolume({1, 1, 1}, {}, 1, {std::numeric_limits<double>::infinity()}),
               ValidationError);
  EXPECT_THROW(ScalarVolume({2, 1, 1}, {}, 2, {1.0, 2.0, 3.0}), ValidationError);
}

TEST(OneHotTest, MarksExactlyTheClassVoxels) {
  const LabelVolume v({3, 1, 1}, {}, 3, {0, 2, 1});
  const BinaryMask m = one_hot(v, 2);
  EXPECT_FALSE(m.at(0));
  EXPECT_TRUE(m.at(1));
  EXPECT_FALSE(m.at(2));
}

TEST(OneHotTest, OutOfRangeClassThrows) {
  const LabelVolume v({3, 1, 1}, {}, 3, {0, 2, 1});
  EXPECT_THROW(one_hot(v, 3), RangeError);
  EXPECT_THROW(one_hot(v, -1), RangeError);
}

TEST(OneHotTest, AllBackgroundGivesEmptyMask) {
  const LabelVolume v({4, 4, 2}, {}, 3);
  EXPECT_TRUE(one_hot(v, 1).empty());
}

TEST(OneHotTest, MasksPartitionEveryVoxel) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + trial % 7;
    const Dims dims{1 + rng() % 9, 1 + rng() % 9, 1 + rng() % 9};
    std::vector<std::uint8_t> labels(dims.count());
    for (auto& l : labels) l = static_cast<std::uint8_t>(rng() % static_cast<unsigned>(k));
    const LabelVolume v(dims, {}, k, labels);
    std::vector<int> hits(dims.count(), 0);
    for (int c = 0; c < k; ++c) {
      const auto m = one_hot(v, c);
      for (std::size_t i = 0; i < dims.count(); ++i) hits[i] += m.at(i);
    }
    for (const int h : hits) ASSERT_EQ(h, 1);
  }
}

TEST(SpvTest, SingleVoxelLabelFileIsHeaderPlusOneByte) {
  const auto bytes = encode_spv(LabelVolume({1, 1, 1}, {1.0, 1.0, 1.0}, 1));
  ASSERT_EQ(bytes.size(), kSpvHeaderSize + 1);
  EXPECT_EQ(kSpvHeaderSize, 76u);
}

TEST(SpvTest, HeaderFieldsSitAtFrozenOffsets) {
  const LabelVolume v({3, 2, 5}, {0.5, 1.25, 3.0}, 7);
  const auto b = encode_spv(v);
  EXPECT_EQ(std::memcmp(b.data(), "SPV1", 4), 0);
  EXPECT_EQ(u64_at(b, 4) & 0xFFFFFFFFu, 1u);  // version
  EXPECT_EQ(std::to_integer<int>(b[8]), 0);   // dtype u8 labels
  EXPECT_EQ(std::to_integer<int>(b[9]), 3);   // rank
  EXPECT_EQ(std::to_integer<int>(b[10]), 0);  // reserved
  EXPECT_EQ(std::to_integer<int>(b[11]), 0);
  EXPECT_EQ(u64_at(b, 12), 3u);
  EXPECT_EQ(u64_at(b, 20), 2u);
  EXPECT_EQ(u64_at(b, 28), 5u);
  EXPECT_EQ(u64_at(b, 36), 1u);  // C
  EXPECT_EQ(u64_at(b, 44), 7u);  // K
  EXPECT_EQ(std::bit_cast<double>(u64_at(b, 52)), 0.5);
  EXPECT_EQ(std::bit_cast<double>(u64_at(b, 60)), 1.25);
  EXPECT_EQ(std::bit_cast<double>(u64_at(b, 68)), 3.0);
  EXPECT_EQ(b.size(), 76u + 30u);

  const ScalarVolume s({2, 1, 1}, {}, 3, {1, 2, 3, 4, 5, 6});
  const auto sb = encode_spv(s);
  EXPECT_EQ(std::to_integer<int>(sb[8]), 1);
  EXPECT_EQ(std::to_integer<int>(sb[9]), 4);
  EXPECT_EQ(u64_at(sb, 36), 3u);
  EXPECT_EQ(u64_at(sb, 44), 0u);
  EXPECT_EQ(std::bit_cast<double>(u64_at(sb, 76 + 8 * 5)), 6.0);
}

TEST(SpvTest, BadMagicIsFormatError) {
  auto b = encode_spv(LabelVolume({1, 1, 1}, {}, 1));
  std::memcpy(b.data(), "XXXX", 4);
  EXPECT_THROW(decode_spv(b), FormatError);
}

TEST(SpvTest, TruncatedPayloadIsCorruption) {
  auto b = encode_spv(LabelVolume({2, 2, 2}, {}, 2));
  b.resize(kSpvHeaderSize + 7);
  EXPECT_THROW(decode_spv(b), CorruptionError);
  auto longer = encode_spv(LabelVolume({2, 2, 2}, {}, 2));
  longer.push_back(std::byte{0});
  EXPECT_THROW(decode_spv(longer), CorruptionError);
  auto header_only = encode_spv(LabelVolume({2, 2, 2}, {}, 2));
  header_only.resize(40);
  EXPECT_THROW(decode_spv(header_only), CorruptionError);
}

TEST(SpvTest, LabelAboveDeclaredKIsValidationError) {
  auto b = encode_spv(LabelVolume({2, 1, 1}, {}, 3, {0, 2}));
  b[kSpvHeaderSize + 1] = std::byte{3};
  EXPECT_THROW(decode_spv(b), ValidationError);
}

TEST(SpvTest, UnknownVersionAndDtypeAreFormatErrors) {
  auto b = encode_spv(LabelVolume({1, 1, 1}, {}, 1));
  b[4] = std::byte{2};
  EXPECT_THROW(decode_spv(b), FormatError);
  b = encode_spv(LabelVolume({1, 1, 1}, {}, 1));
  b[8] = std::byte{9};
  EXPECT_THROW(decode_spv(b), FormatError);
}

TEST(SpvTest, RankMustMatchChannelCount) {
  auto b = encode_spv(LabelVolume({1, 1, 1}, {}, 1));
  b[9] = std::byte{4};
  EXPECT_THROW(decode_spv(b), FormatError);
  auto s = encode_spv(ScalarVolume({1, 1, 1}, {}, 2, {0.0, 1.0}));
  s[9] = std::byte{3};
  EXPECT_THROW(decode_spv(s), FormatError);
}

TEST(SpvTest, WritingTwiceIsByteIdentical) {
  std::mt19937_64 rng(3);
  std::vector<double> values(4 * 3 * 2 * 2);
  for (auto& v : values) v = std::uniform_real_distribution<double>(-5, 5)(rng);
  const ScalarVolume s({4, 3, 2}, {0.7, 0.7, 2.5}, 2, values);
  const auto a = temp_path("twice_a.spv");
  const auto b = temp_path("twice_b.spv");
  write_spv(s, a);
  write_spv(s, b);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(SpvTest, UnwritablePathIsIoError) {
  EXPECT_THROW(write_spv(LabelVolume({1, 1, 1}, {}, 1), "/nonexistent_dir/x/y.spv"), IoError);
  EXPECT_THROW(read_spv("/nonexistent_dir/x/y.spv"), IoError);
}

TEST(SpvTest, KindMismatchIsFormatError) {
  const auto p = temp_path("kind.spv");
  write_spv(ScalarVolume({1, 1, 1}, {}, 1, {0.5}), p);
  EXPECT_THROW(read_label_spv(p), FormatError);
}

// 200 random volumes of both kinds survive a file round trip field for field.
TEST(SpvTest, RandomRoundTripProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> spacing(0.1, 4.0);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  const auto path = temp_path("roundtrip.spv");
  for (int trial = 0; trial < 200; ++trial) {
    const Dims dims{1 + rng() % 16, 1 + rng() % 16, 1 + rng() % 16};
    const Spacing sp{spacing(rng), spacing(rng), spacing(rng)};
    if (trial % 2 == 0) {
      const int k = 1 + static_cast<int>(rng() % 256);
      std::vector<std::uint8_t> labels(dims.count());
      for (auto& l : labels) l = static_cast<std::uint8_t>(rng() % static_cast<unsigned>(k));
      const LabelVolume v(dims, sp, k, labels);
      write_spv(v, path);
      const auto back = read_spv(path);
      ASSERT_TRUE(std::holds_alternative<LabelVolume>(back));
      ASSERT_EQ(std::get<LabelVolume>(back), v);
    } else {
      const std::size_t channels = 1 + rng() % 4;
      std::vector<double> values(dims.count() * channels);
      for (auto& x : values) x = value(rng);
      const ScalarVolume v(dims, sp, channels, values);
      write_spv(v, path);
      const auto back = read_spv(path);
      ASSERT_TRUE(std::holds_alternative<ScalarVolume>(back));
      ASSERT_EQ(std::get<ScalarVolume>(back), v);
    }
  }
}

TEST(SynthTest, EmptySphereListIsAllBackground) {
  const auto v = synth_spheres({8, 8, 8}, {}, 3, {});
  EXPECT_EQ(v.histogram()[0], 512u);
}

TEST(SynthTest, NonPositiveRadiusIsRejected) {
  EXPECT_THROW(synth_spheres({8, 8, 8}, {}, 3, {Sphere{{4, 4, 4}, 0.0, 1}}), ValidationError);
  EXPECT_THROW(synth_spheres({8, 8, 8}, {}, 3, {Sphere{{4, 4, 4}, -1.0, 1}}), ValidationError);
  EXPECT_THROW(synth_spheres({8, 8, 8}, {}, 3, {Sphere{{4, 4, 4}, 2.0, 3}}), ValidationError);
  EXPECT_THROW(synth_spheres({8, 8, 8}, {}, 3, {Sphere{{4, 4, 4}, 2.0, 0}}), ValidationError);
}

TEST(SynthTest, CenteredSphereIsConnectedBlob) {
  const std::size_t n = 20;
  const auto v = synth_spheres({n, n, n}, {}, 2, {Sphere{{9.5, 9.5, 9.5}, 0.4 * 20, 1}});
  const auto hist = v.histogram();
  ASSERT_GT(hist[1], 0u);
  // Flood fill from the first foreground voxel reaches every foreground voxel.
  const auto mask = one_hot(v, 1);
  std::vector<std::uint8_t> seen(mask.dims().count(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < mask.dims().count(); ++i) {
    if (mask.at(i)) {
      stack.push_back(i);
      seen[i] = 1;
      break;
    }
  }
  std::size_t reached = 0;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    ++reached;
    const auto p = unravel(mask.dims(), i);
    for (int a = 0; a < 3; ++a) {
      for (const int step : {-1, 1}) {
        auto q = p;
        q[a] += step;
        if (q[a] < 0 || q[a] >= static_cast<std::int64_t>(mask.dims()[a])) continue;
        const auto j = mask.dims().index(static_cast<std::size_t>(q[0]), static_cast<std::size_t>(q[1]),
                                         static_cast<std::size_t>(q[2]));
        if (mask.at(j) && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  EXPECT_EQ(reached, hist[1]);
}

TEST(SynthTest, VoxelCountsTrackAnalyticVolume) {
  const Spacing sp{1.0, 0.8, 1.5};
  const std::vector<Sphere> spheres{Sphere{{12, 12, 10}, 7.0, 1}, Sphere{{34, 34, 20}, 9.0, 2}};
  const auto v = synth_spheres({48, 48, 32}, sp, 3, spheres);
  const auto hist = v.histogram();
  for (const auto& s : spheres) {
    // Independent count of voxels satisfying the inclusion inequality.
    std::size_t count = 0;
    for (std::size_t z = 0; z < 32; ++z) {
      for (std::size_t y = 0; y < 48; ++y) {
        for (std::size_t x = 0; x < 48; ++x) {
          const double dx = (x - s.center[0]) * sp.sx, dy = (y - s.center[1]) * sp.sy,
                       dz = (z - s.center[2]) * sp.sz;
          count += std::sqrt(dx * dx + dy * dy + dz * dz) <= s.radius;
        }
      }
    }
    EXPECT_EQ(hist[static_cast<std::size_t>(s.class_id)], count);
    const double analytic = 4.0 / 3.0 * std::numbers::pi * std::pow(s.radius, 3) / (sp.sx * sp.sy * sp.sz);
    EXPECT_NEAR(static_cast<double>(count), analytic, 0.15 * analytic);
  }
}

TEST(SynthTest, LaterSpheresOverwriteEarlierOnes) {
  const auto v = synth_spheres({9, 9, 9}, {}, 3, {Sphere{{4, 4, 4}, 3.0, 1}, Sphere{{4, 4, 4}, 1.0, 2}});
  EXPECT_EQ(v.at(4, 4, 4), 2);
  EXPECT_EQ(v.at(4, 4, 6), 1);
}

TEST(SynthTest, RandomSpheresAreDeterministicPerSeed) {
  const auto a = random_spheres({32, 32, 32}, 4, 5, 2.0, 6.0, 11);
  const auto b = random_spheres({32, 32, 32}, 4, 5, 2.0, 6.0, 11);
  const auto c = random_spheres({32, 32, 32}, 4, 5, 2.0, 6.0, 12);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].center, b[i].center);
    EXPECT_EQ(a[i].radius, b[i].radius);
  }
  EXPECT_NE(a[0].radius, c[0].radius);
  EXPECT_EQ(synth_spheres({32, 32, 32}, {}, 4, a), synth_spheres({32, 32, 32}, {}, 4, b));
}

}  // namespace
}  // namespace selfprompt
