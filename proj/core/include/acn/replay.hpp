#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "acn/rng.hpp"
#include "acn/rollout.hpp"
#include "acn/tensor.hpp"

namespace acn {

/// Column-stacked minibatch ready for network math.
struct TransitionBatch {
  Tensor states;       // n x obs
  Tensor actions;      // n x act
  Tensor rewards;      // n
  Tensor next_states;  // n x obs
  Tensor dones;        // n, 1.0 where terminal

  std::size_t size() const { return rewards.size(); }
};

namespace detail {
struct ReplayBlock;
}

/// Immutable view of the memory contents at the moment it was taken. Later
/// pushes never show up in (or disturb) an existing snapshot.
class ReplaySnapshot {
 public:
  std::size_t size() const { return static_cast<std::size_t>(end_ - begin_); }
  bool empty() const { return begin_ == end_; }
  std::size_t observation_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return act_dim_; }

  /// i-th stored transition, oldest first.
  Transition at(std::size_t i) const;

  /// n uniform draws with replacement. Throws EmptyMemoryError when empty.
  std::vector<Transition> sample_uniform(std::size_t n, Rng& rng) const;
  TransitionBatch sample_batch(std::size_t n, Rng& rng) const;

 private:
  friend class ReplayMemory;
  std::vector<std::shared_ptr<const detail::ReplayBlock>> blocks_;
  std::uint64_t first_block_ = 0;
  std::uint64_t begin_ = 0;
  std::uint64_t end_ = 0;
  std::size_t block_size_ = 0;
  std::size_t obs_dim_ = 0;
  std::size_t act_dim_ = 0;

  std::vector<std::uint64_t> draw(std::size_t n, Rng& rng) const;
  void copy_into(std::uint64_t seq, std::size_t row, TransitionBatch& batch) const;
};

/// Bounded FIFO transition store shared by the whole population.
///
/// Transitions live in fixed-size append-only blocks; eviction only moves the
/// logical start, so snapshots can share blocks with the writer. push_batch is
/// linearizable; samplers see a consistent prefix.
class ReplayMemory {
 public:
  static constexpr std::size_t kDefaultCapacity = 1'000'000;

  ReplayMemory(std::size_t observation_dim, std::size_t action_dim, std::size_t capacity = kDefaultCapacity);

  ReplayMemory(const ReplayMemory&) = delete;
  ReplayMemory& operator=(const ReplayMemory&) = delete;

  void push_batch(std::span<const Transition> transitions);
  void push(const Transition& t) { push_batch(std::span<const Transition>(&t, 1)); }

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::uint64_t total_pushed() const;
  void clear();

  ReplaySnapshot snapshot() const;

  std::vector<Transition> sample_uniform(std::size_t n, Rng& rng) const { return snapshot().sample_uniform(n, rng); }
  TransitionBatch sample_batch(std::size_t n, Rng& rng) const { return snapshot().sample_batch(n, rng); }
  /// Stored transitions, oldest first.
  std::vector<Transition> contents() const;

 private:
  std::size_t obs_dim_;
  std::size_t act_dim_;
  std::size_t capacity_;
  std::size_t block_size_;

  mutable std::mutex mutex_;
  std::deque<std::shared_ptr<detail::ReplayBlock>> blocks_;
  std::uint64_t first_block_ = 0;  // block number of blocks_.front()
  std::uint64_t begin_ = 0;        // sequence number of the oldest stored transition
  std::uint64_t end_ = 0;          // one past the newest
};

}  // namespace acn
