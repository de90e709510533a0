#pragma once

#include <sgec/linalg.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace sgec {

struct BlobSpec {
  Index samples = 300;
  int clusters = 3;
  Index features = 50;      // ambient dimension
  Index informative = 10;   // leading features that carry the cluster signal
  double sigma = 0.1;       // within-cluster spread on informative features
  double center_box = 5.0;  // centers uniform in [-box, box] on informative features
  double noise = -1.0;      // spread of the uninformative features; negative reuses sigma
  std::uint64_t seed = 0;
};

struct LabeledData {
  Matrix X;
  std::vector<long long> labels;
};

/// Isotropic Gaussian blobs padded with pure-noise features. Sample i belongs to blob i mod c.
inline LabeledData make_blobs(const BlobSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const auto unit = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  // Box-Muller keeps the stream identical across standard libraries.
  const auto gauss = [&] { return std::sqrt(-2.0 * std::log(unit())) * std::cos(2.0 * std::numbers::pi * unit()); };

  Matrix centers(spec.clusters, spec.informative);
  for (Index c = 0; c < centers.rows(); ++c)
    for (Index f = 0; f < centers.cols(); ++f) centers(c, f) = (2.0 * unit() - 1.0) * spec.center_box;

  const double noise = spec.noise < 0.0 ? spec.sigma : spec.noise;
  LabeledData out{Matrix(spec.samples, spec.features), {}};
  out.labels.reserve(static_cast<std::size_t>(spec.samples));
  for (Index i = 0; i < spec.samples; ++i) {
    const int label = static_cast<int>(i % spec.clusters);
    out.labels.push_back(label);
    for (Index f = 0; f < spec.features; ++f)
      out.X(i, f) = f < spec.informative ? centers(label, f) + spec.sigma * gauss() : noise * gauss();
  }
  return out;
}

}  // namespace sgec
