#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace ionage {

/// Seeded deterministic generator for campaign noise. The raw stream is
/// std::mt19937_64, whose output sequence is pinned by the C++ standard, so
/// identical (algorithm, seed) pairs reproduce across platforms. Gaussians
/// come from an explicit Box-Muller transform (cosine branch, two fresh
/// uniforms per call) rather than std::normal_distribution, whose mapping is
/// implementation-defined.
class CampaignRng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64/box-muller";

  explicit CampaignRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1]; 53-bit mantissa.
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via z = sqrt(-2 ln u1) cos(2 pi u2).
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ionage
