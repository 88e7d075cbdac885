#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infladiff/inflation.hpp"

namespace infladiff {

enum class PvStatus { PisotUnit, Integer, NonPisot };
enum class SpectralType { PurePoint, TrivialBraggPlusContinuous };

const char* to_string(PvStatus s) noexcept;
const char* to_string(SpectralType s) noexcept;

/// Constant-length substitution over a small alphabet; letter k of the
/// alphabet maps to images[k], and all images have the same length.
struct ConstantLengthSub {
  std::string alphabet;
  std::vector<std::string> images;

  std::size_t length() const { return images.empty() ? 0 : images.front().size(); }
  int letter_index(char c) const;
  std::string apply(const std::string& word, int times = 1) const;
  /// Validates alphabet/image consistency; throws InvalidArgument.
  void validate() const;
};

struct CoincidenceResult {
  bool found = false;
  std::vector<std::size_t> witness;  // column positions leading to a singleton
};

struct SpectrumReport {
  std::int64_t m = 0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  PvStatus pv_status = PvStatus::NonPisot;
  SpectralType spectral_type = SpectralType::TrivialBraggPlusContinuous;
  std::optional<std::int64_t> ell;
  std::optional<bool> coincidence;
  std::optional<std::vector<std::size_t>> coincidence_witness;
  std::optional<std::int64_t> height;
};

SpectrumReport spectral_type(std::int64_t m);

/// a -> a b^ell, b -> a^{ell+1}, obtained from rho_{ell(ell+1)} through
/// a = 0, b = 1^{ell+1}. Checked against rho on rho^4(0); throws
/// RecodingMismatch if the two disagree.
ConstantLengthSub recode_constant_length(std::int64_t ell);

std::string encode_recoded(const Word& word, std::int64_t ell);
Word decode_recoded(const std::string& word, std::int64_t ell);

/// Breadth-first search over column subsets.
CoincidenceResult has_coincidence(const ConstantLengthSub& sub);

/// Height of the fixed point starting with alphabet[0], using a prefix of at
/// least q^3 letters that is doubled until the return-time gcd is stable.
std::int64_t height(const ConstantLengthSub& sub, std::size_t fixed_point_prefix_length = 0);

}  // namespace infladiff
