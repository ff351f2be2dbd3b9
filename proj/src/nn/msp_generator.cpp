#include "selfprompt/msp_generator.hpp"

#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt::nn {

MspGenerator MspGenerator::init(std::size_t enc_channels, std::size_t dec_channels,
                                std::size_t num_classes, std::mt19937_64& rng, double scale) {
  MspGenerator g;
  g.enc_channels = enc_channels;
  g.dec_channels = dec_channels;
  g.num_classes = num_classes;

  auto init_layer = [&](ConvLayer layer) {
    if (scale > 0.0) layer.randomize(rng, scale);
    return layer;
  };

  g.stem = init_layer(ConvLayer::conv(enc_channels, dec_channels, 3, Activation::kGelu));
  for (std::size_t stage = 1; stage < kMspLevels; ++stage) {
    g.upsample.push_back(init_layer(ConvLayer::upsample2x(dec_channels, dec_channels, Activation::kGelu)));
    std::vector<ConvLayer> chain;
    for (std::size_t step = 0; step < stage; ++step) {
      chain.push_back(init_layer(
          ConvLayer::upsample2x(step == 0 ? enc_channels : dec_channels, dec_channels, Activation::kGelu)));
    }
    g.skip.emplace_back(std::move(chain));
    g.fuse.push_back(init_layer(ConvLayer::conv(2 * dec_channels, dec_channels, 3, Activation::kGelu)));
  }
  for (std::size_t level = 0; level < kMspLevels; ++level) {
    g.heads.push_back(init_layer(ConvLayer::conv(dec_channels, num_classes, 1)));
  }
  return g;
}

Checkpoint MspGenerator::named_arrays() const {
  Checkpoint ckpt;
  ConvStack({stem}).add_named_arrays(ckpt, "msp.stem.");
  for (std::size_t i = 0; i < upsample.size(); ++i) {
    const std::string s = std::to_string(i + 2);
    ConvStack({upsample[i]}).add_named_arrays(ckpt, "msp.stage" + s + ".up.");
    skip[i].add_named_arrays(ckpt, "msp.stage" + s + ".skip.");
    ConvStack({fuse[i]}).add_named_arrays(ckpt, "msp.stage" + s + ".fuse.");
  }
  for (std::size_t i = 0; i < heads.size(); ++i) {
    ConvStack({heads[i]}).add_named_arrays(ckpt, "msp.head" + std::to_string(i + 1) + ".");
  }
  return ckpt;
}

MspOutput mspgenerator_forward(const MspGenerator& gen, const std::vector<FeatureMap>& features) {
  if (features.size() != kMspLevels) {
    throw ValidationError("MSPGenerator expects 5 feature maps, got " + std::to_string(features.size()));
  }
  for (const auto& f : features) {
    if (f.channels() != gen.enc_channels || f.height() != features.front().height() ||
        f.width() != features.front().width() || f.height() == 0 || f.width() == 0) {
      throw ValidationError("MSPGenerator feature maps must all be (" +
                            std::to_string(gen.enc_channels) + ", h, w) with one shared h, w");
    }
  }
  if (gen.upsample.size() != kMspLevels - 1 || gen.skip.size() != kMspLevels - 1 ||
      gen.fuse.size() != kMspLevels - 1 || gen.heads.size() != kMspLevels) {
    throw ValidationError("MSPGenerator is not fully initialized");
  }

  MspOutput out;
  FeatureMap x = gen.stem.forward(features[kMspLevels - 1]);
  out.levels.push_back(gen.heads[0].forward(x));
  for (std::size_t stage = 1; stage < kMspLevels; ++stage) {
    const FeatureMap up = gen.upsample[stage - 1].forward(x);
    const FeatureMap shallow = gen.skip[stage - 1].forward(features[kMspLevels - 1 - stage]);
    x = gen.fuse[stage - 1].forward(concat_channels(up, shallow));
    out.levels.push_back(gen.heads[stage].forward(x));
  }
  return out;
}

}  // namespace selfprompt::nn
