#include "pcep/model_indicator.hpp"

#include <algorithm>

#include "pcep/errors.hpp"

namespace pcep {

ModelIndicator::ModelIndicator(std::uint64_t bits, int p) : bits_(bits), p_(p) {
  if (p < 0 || p > kMaxCovariates) throw DimensionError("p must lie in [0, 64]");
  if (p < kMaxCovariates && (bits >> p) != 0)
    throw DimensionError("model bitmask has bits beyond p");
}

ModelIndicator ModelIndicator::full_model(int p) {
  const std::uint64_t bits = p == kMaxCovariates ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1;
  return ModelIndicator(bits, p);
}

ModelIndicator ModelIndicator::from_one_based(std::initializer_list<int> covariates, int p) {
  std::uint64_t bits = 0;
  for (int j : covariates) {
    if (j < 1 || j > p) throw DimensionError("covariate index out of range");
    bits |= std::uint64_t{1} << (j - 1);
  }
  return ModelIndicator(bits, p);
}

ModelIndicator ModelIndicator::from_names(std::span<const std::string> selected,
                                          std::span<const std::string> all_names) {
  std::uint64_t bits = 0;
  for (const std::string& name : selected) {
    auto it = std::find(all_names.begin(), all_names.end(), name);
    if (it == all_names.end()) throw SchemaError("unknown covariate '" + name + "'");
    bits |= std::uint64_t{1} << (it - all_names.begin());
  }
  return ModelIndicator(bits, static_cast<int>(all_names.size()));
}

ModelIndicator ModelIndicator::flipped(int j) const {
  if (j < 0 || j >= p_) throw DimensionError("covariate index out of range");
  return ModelIndicator(bits_ ^ (std::uint64_t{1} << j), p_);
}

std::vector<int> ModelIndicator::covariates() const {
  std::vector<int> out;
  out.reserve(size());
  for (int j = 0; j < p_; ++j)
    if (includes(j)) out.push_back(j);
  return out;
}

std::vector<std::string> ModelIndicator::names(std::span<const std::string> all_names) const {
  std::vector<std::string> out;
  for (int j : covariates()) out.push_back(all_names[j]);
  return out;
}

std::string ModelIndicator::label(std::span<const std::string> all_names) const {
  if (bits_ == 0) return "(null)";
  std::string out;
  for (const std::string& name : names(all_names)) {
    if (!out.empty()) out += '+';
    out += name;
  }
  return out;
}

}  // namespace pcep
