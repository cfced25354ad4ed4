#pragma once

#include <Eigen/Core>
#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "pcep/model_indicator.hpp"

namespace pcep {

/// Triangular factor of one model's design. `columns` index the full design
/// (0 = intercept, j + 1 = covariate j).
struct ModelFactor {
  std::vector<int> columns;
  Eigen::MatrixXd r;  // upper triangular, X_m = Q r
  double log_det_gram = 0.0;
  bool singular = false;
};

/// Sharded map supporting concurrent insert-or-get. A racing insert of the
/// same key keeps whichever value landed first; callers only insert values
/// that are a pure function of the key.
template <typename Value>
class ConcurrentCache {
 public:
  template <typename Make>
  Value get_or_insert(std::uint64_t key, Make&& make, bool* hit = nullptr) {
    Shard& shard = shards_[mix(key) % kShards];
    {
      std::lock_guard lock(shard.mutex);
      if (auto it = shard.map.find(key); it != shard.map.end()) {
        if (hit) *hit = true;
        return it->second;
      }
    }
    Value value = make();
    std::lock_guard lock(shard.mutex);
    if (hit) *hit = false;
    return shard.map.try_emplace(key, std::move(value)).first->second;
  }

  bool find(std::uint64_t key, Value& out) const {
    const Shard& shard = shards_[mix(key) % kShards];
    std::lock_guard lock(shard.mutex);
    auto it = shard.map.find(key);
    if (it == shard.map.end()) return false;
    out = it->second;
    return true;
  }

  std::size_t size() const {
    std::size_t total = 0;
    for (const Shard& s : shards_) {
      std::lock_guard lock(s.mutex);
      total += s.map.size();
    }
    return total;
  }

 private:
  static constexpr std::size_t kShards = 64;
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
  }
  struct Shard {
    mutable std::mutex mutex;
    std::unordered_map<std::uint64_t, Value> map;
  };
  std::array<Shard, kShards> shards_;
};

/// Covariate-side state shared by every model over one covariate matrix:
/// the intercept-augmented design, its full cross-product, and a per-gamma
/// cache of triangular factors. Immutable apart from the cache; safe to share
/// across threads and across responses drawn on the same X.
class ModelSpace {
 public:
  explicit ModelSpace(const Eigen::MatrixXd& X);

  Eigen::Index n() const { return full_.rows(); }
  int p() const { return static_cast<int>(full_.cols()) - 1; }
  const Eigen::MatrixXd& full_design() const { return full_; }
  /// [1 X]'[1 X].
  const Eigen::MatrixXd& gram() const { return gram_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// Cached factor for `m`; `singular` is set instead of throwing.
  std::shared_ptr<const ModelFactor> factor(const ModelIndicator& m) const;

  /// Number of QR factorizations performed so far.
  std::size_t factorizations() const { return factorizations_.load(); }

 private:
  std::shared_ptr<const ModelFactor> compute(const ModelIndicator& m) const;

  Eigen::MatrixXd full_;
  Eigen::MatrixXd gram_;
  std::uint64_t fingerprint_ = 0;
  mutable ConcurrentCache<std::shared_ptr<const ModelFactor>> cache_;
  mutable std::atomic<std::size_t> factorizations_{0};
};

}  // namespace pcep
