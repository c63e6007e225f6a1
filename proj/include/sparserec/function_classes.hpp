#pragma once

// Finite members of the classes A^r_beta: polynomials whose dyadic coefficient
// blocks satisfy (sum_{k in block j} |a_k|^beta)^{1/beta} <= 2^{-rj}, checked up
// to a truncation level J.

#include <cstdint>
#include <string>
#include <vector>

#include "sparserec/trig.hpp"

namespace sparserec {

struct ClassSpec {
  double r = 1.0;
  double beta = 1.0;
  int J = 2;
  int dim = 1;
  BlockFamily blocks{};

  /// Throws std::invalid_argument unless r > 0, 0 < beta <= 1, J >= 0, dim >= 1.
  void validate() const;
  /// 2^{-r j}
  double budget(int j) const;
};

/// Default truncation level ceil(log2 v) + 2.
int default_truncation_level(int v);

enum class ProfileKind { SaturatedSpread, SingleSpike, RandomSupport };

struct Profile {
  ProfileKind kind = ProfileKind::SaturatedSpread;
  double density = 0.5;  // RandomSupport only, in (0, 1]
  int spike_block = -1;  // SingleSpike only; -1 selects block J

  static Profile saturated_spread() { return {}; }
  static Profile single_spike(int block) { return {ProfileKind::SingleSpike, 0.5, block}; }
  static Profile random_support(double density) { return {ProfileKind::RandomSupport, density, -1}; }
};

std::string to_string(ProfileKind kind);
ProfileKind parse_profile_kind(const std::string& name);

/// Per-block slack 2^{-rj} - ||(a_k)_{k in block j}||_beta for j = 0..J.
/// Requires degree(f) < 2^{J+1}.
std::vector<double> membership_margin(const TrigPolynomial& f, const ClassSpec& spec);

/// Deterministic in (spec, profile, seed). Every block slack is >= 0 and at
/// least one block is saturated. Phases are uniform on the circle.
TrigPolynomial sample_class_function(const ClassSpec& spec, const Profile& profile,
                                     std::uint64_t seed);

/// 2^{-(r - d/2) j} e^{i(k,x)} for a k in block j (the lexicographically
/// first one, unless a seed picks another). Requires r > d/2.
TrigPolynomial spike_instance(double r, int j, int dim);
TrigPolynomial spike_instance(double r, int j, int dim, std::uint64_t seed);

}  // namespace sparserec
