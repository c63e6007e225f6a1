#include "sparserec/function_classes.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sparserec {

void ClassSpec::validate() const {
  if (!(r > 0.0)) throw std::invalid_argument("ClassSpec: r must be > 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("ClassSpec: beta must be in (0, 1]");
  if (J < 0) throw std::invalid_argument("ClassSpec: J must be >= 0");
  if (dim < 1) throw std::invalid_argument("ClassSpec: dim must be >= 1");
}

double ClassSpec::budget(int j) const { return std::exp2(-r * j); }

int default_truncation_level(int v) {
  if (v < 1) throw std::invalid_argument("default_truncation_level: v must be >= 1");
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(v)))) + 2;
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::SaturatedSpread:
      return "saturated-spread";
    case ProfileKind::SingleSpike:
      return "single-spike";
    case ProfileKind::RandomSupport:
      return "random-support";
  }
  return "saturated-spread";
}

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "saturated-spread") return ProfileKind::SaturatedSpread;
  if (name == "single-spike") return ProfileKind::SingleSpike;
  if (name == "random-support") return ProfileKind::RandomSupport;
  throw std::invalid_argument("unknown profile '" + name + "'");
}

std::vector<double> membership_margin(const TrigPolynomial& f, const ClassSpec& spec) {
  spec.validate();
  if (f.dim() != spec.dim) throw std::invalid_argument("membership_margin: dimension mismatch");
  if (spec.J < 30 && f.degree() >= (1 << (spec.J + 1)))
    throw std::invalid_argument("membership_margin: degree(f) must be < 2^{J+1}");
  std::vector<double> sums(static_cast<std::size_t>(spec.J) + 1, 0.0);
  for (const auto& [k, c] : f.coeffs()) {
    const int j = spec.blocks.block_of(k);
    if (j <= spec.J) sums[static_cast<std::size_t>(j)] += std::pow(std::abs(c), spec.beta);
  }
  std::vector<double> slack(sums.size());
  for (std::size_t j = 0; j < sums.size(); ++j)
    slack[j] = spec.budget(static_cast<int>(j)) - std::pow(sums[j], 1.0 / spec.beta);
  return slack;
}

namespace {

Complex random_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  return std::polar(1.0, angle(rng));
}

// Equal magnitudes on `support` with the l_beta norm equal to `budget`:
// (n a^beta)^{1/beta} = budget  =>  a = budget / n^{1/beta}.
void fill_saturated(TrigPolynomial& f, const std::vector<MultiIndex>& support, double budget,
                    double beta, std::mt19937_64& rng) {
  const double n = static_cast<double>(support.size());
  const double magnitude = budget / std::pow(n, 1.0 / beta);
  for (const auto& k : support) f.set(k, magnitude * random_phase(rng));
}

}  // namespace

TrigPolynomial sample_class_function(const ClassSpec& spec, const Profile& profile,
                                     std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  TrigPolynomial f(spec.dim);
  switch (profile.kind) {
    case ProfileKind::SaturatedSpread:
      for (int j = 0; j <= spec.J; ++j)
        fill_saturated(f, spec.blocks.block(j, spec.dim), spec.budget(j), spec.beta, rng);
      break;
    case ProfileKind::RandomSupport: {
      if (!(profile.density > 0.0 && profile.density <= 1.0))
        throw std::invalid_argument("sample_class_function: density must be in (0, 1]");
      std::bernoulli_distribution keep(profile.density);
      for (int j = 0; j <= spec.J; ++j) {
        const auto block = spec.blocks.block(j, spec.dim);
        std::vector<MultiIndex> chosen;
        for (const auto& k : block)
          if (keep(rng)) chosen.push_back(k);
        if (chosen.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, block.size() - 1);
          chosen.push_back(block[pick(rng)]);
        }
        fill_saturated(f, chosen, spec.budget(j), spec.beta, rng);
      }
      break;
    }
    case ProfileKind::SingleSpike: {
      const int j = profile.spike_block < 0 ? spec.J : profile.spike_block;
      if (j > spec.J) throw std::invalid_argument("sample_class_function: spike block exceeds J");
      const auto block = spec.blocks.block(j, spec.dim);
      std::uniform_int_distribution<std::size_t> pick(0, block.size() - 1);
      const auto& k = block[pick(rng)];
      f.set(k, spec.budget(j) * random_phase(rng));
      break;
    }
  }
  return f;
}

TrigPolynomial spike_instance(double r, int j, int dim) {
  if (!(r > dim / 2.0)) throw std::invalid_argument("spike_instance: requires r > d/2");
  const auto block = dyadic_block(j, dim);
  return TrigPolynomial::monomial(block.front(), std::exp2(-(r - dim / 2.0) * j));
}

TrigPolynomial spike_instance(double r, int j, int dim, std::uint64_t seed) {
  if (!(r > dim / 2.0)) throw std::invalid_argument("spike_instance: requires r > d/2");
  const auto block = dyadic_block(j, dim);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, block.size() - 1);
  return TrigPolynomial::monomial(block[pick(rng)], std::exp2(-(r - dim / 2.0) * j));
}

}  // namespace sparserec
