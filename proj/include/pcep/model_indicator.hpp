#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pcep {

/// Inclusion mask over p candidate covariates. Bit j set means covariate j
/// (0-based) is in the model. The intercept is always present, so the model
/// dimension is popcount + 1.
class ModelIndicator {
 public:
  static constexpr int kMaxCovariates = 64;

  ModelIndicator() = default;
  ModelIndicator(std::uint64_t bits, int p);

  static ModelIndicator null_model(int p) { return ModelIndicator(0, p); }
  static ModelIndicator full_model(int p);
  /// Covariates given by 1-based index, matching the X1..Xp labelling.
  static ModelIndicator from_one_based(std::initializer_list<int> covariates, int p);
  static ModelIndicator from_names(std::span<const std::string> selected,
                                   std::span<const std::string> all_names);

  std::uint64_t bits() const { return bits_; }
  int p() const { return p_; }
  int size() const { return std::popcount(bits_); }
  int dim() const { return size() + 1; }
  bool includes(int j) const { return (bits_ >> j) & 1u; }
  ModelIndicator flipped(int j) const;

  /// 0-based covariate indices in increasing order.
  std::vector<int> covariates() const;
  std::vector<std::string> names(std::span<const std::string> all_names) const;
  /// "X1+X3+X13" style label; "(null)" for the intercept-only model.
  std::string label(std::span<const std::string> all_names) const;

  friend bool operator==(const ModelIndicator&, const ModelIndicator&) = default;
  friend std::strong_ordering operator<=>(const ModelIndicator& a, const ModelIndicator& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
  int p_ = 0;
};

}  // namespace pcep
