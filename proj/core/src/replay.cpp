#include "acn/replay.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "acn/errors.hpp"

namespace acn {

namespace detail {

// Flat storage for block_size transitions. Slots are written once, in order.
struct ReplayBlock {
  ReplayBlock(std::size_t n, std::size_t obs, std::size_t act)
      : states(n * obs), actions(n * act), rewards(n), next_states(n * obs), dones(n) {}
  std::vector<double> states;
  std::vector<double> actions;
  std::vector<double> rewards;
  std::vector<double> next_states;
  std::vector<double> dones;
};

}  // namespace detail

ReplayMemory::ReplayMemory(std::size_t observation_dim, std::size_t action_dim, std::size_t capacity)
    : obs_dim_(observation_dim),
      act_dim_(action_dim),
      capacity_(capacity),
      block_size_(std::clamp<std::size_t>(capacity, 1, 4096)) {
  if (capacity == 0) throw std::invalid_argument("ReplayMemory: capacity must be positive");
  if (observation_dim == 0 || action_dim == 0) throw std::invalid_argument("ReplayMemory: dims must be positive");
}

void ReplayMemory::push_batch(std::span<const Transition> transitions) {
  for (const Transition& t : transitions) {
    if (t.state.size() != obs_dim_ || t.next_state.size() != obs_dim_ || t.action.size() != act_dim_) {
      throw std::invalid_argument("ReplayMemory: transition dimensions do not match");
    }
  }
  std::lock_guard lock(mutex_);
  for (const Transition& t : transitions) {
    const std::uint64_t block_no = end_ / block_size_;
    const std::size_t slot = static_cast<std::size_t>(end_ % block_size_);
    if (blocks_.empty() || first_block_ + blocks_.size() <= block_no) {
      if (blocks_.empty()) first_block_ = block_no;
      blocks_.push_back(std::make_shared<detail::ReplayBlock>(block_size_, obs_dim_, act_dim_));
    }
    detail::ReplayBlock& b = *blocks_.back();
    std::copy(t.state.begin(), t.state.end(), b.states.begin() + static_cast<std::ptrdiff_t>(slot * obs_dim_));
    std::copy(t.action.begin(), t.action.end(), b.actions.begin() + static_cast<std::ptrdiff_t>(slot * act_dim_));
    b.rewards[slot] = t.reward;
    std::copy(t.next_state.begin(), t.next_state.end(),
              b.next_states.begin() + static_cast<std::ptrdiff_t>(slot * obs_dim_));
    b.dones[slot] = t.done ? 1.0 : 0.0;
    ++end_;
    if (end_ - begin_ > capacity_) begin_ = end_ - capacity_;
    while (!blocks_.empty() && (first_block_ + 1) * block_size_ <= begin_) {
      blocks_.pop_front();
      ++first_block_;
    }
  }
}

std::size_t ReplayMemory::size() const {
  std::lock_guard lock(mutex_);
  return static_cast<std::size_t>(end_ - begin_);
}

std::uint64_t ReplayMemory::total_pushed() const {
  std::lock_guard lock(mutex_);
  return end_;
}

void ReplayMemory::clear() {
  std::lock_guard lock(mutex_);
  blocks_.clear();
  first_block_ = 0;
  begin_ = 0;
  end_ = 0;
}

ReplaySnapshot ReplayMemory::snapshot() const {
  std::lock_guard lock(mutex_);
  ReplaySnapshot s;
  s.blocks_.assign(blocks_.begin(), blocks_.end());
  s.first_block_ = first_block_;
  s.begin_ = begin_;
  s.end_ = end_;
  s.block_size_ = block_size_;
  s.obs_dim_ = obs_dim_;
  s.act_dim_ = act_dim_;
  return s;
}

std::vector<Transition> ReplayMemory::contents() const {
  const ReplaySnapshot s = snapshot();
  std::vector<Transition> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.at(i));
  return out;
}

Transition ReplaySnapshot::at(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("ReplaySnapshot::at: index " + std::to_string(i));
  const std::uint64_t seq = begin_ + i;
  const auto& b = *blocks_[static_cast<std::size_t>(seq / block_size_ - first_block_)];
  const std::size_t slot = static_cast<std::size_t>(seq % block_size_);
  const auto span_of = [&](const std::vector<double>& v, std::size_t dim) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(slot * dim);
    return std::vector<double>(first, first + static_cast<std::ptrdiff_t>(dim));
  };
  return {span_of(b.states, obs_dim_), span_of(b.actions, act_dim_), b.rewards[slot],
          span_of(b.next_states, obs_dim_), b.dones[slot] != 0.0};
}

std::vector<std::uint64_t> ReplaySnapshot::draw(std::size_t n, Rng& rng) const {
  if (empty()) throw EmptyMemoryError("replay memory is empty");
  std::vector<std::uint64_t> idx(n);
  for (auto& i : idx) i = begin_ + rng.uniform_index(size());
  return idx;
}

std::vector<Transition> ReplaySnapshot::sample_uniform(std::size_t n, Rng& rng) const {
  const auto idx = draw(n, rng);
  std::vector<Transition> out;
  out.reserve(n);
  for (std::uint64_t seq : idx) out.push_back(at(static_cast<std::size_t>(seq - begin_)));
  return out;
}

void ReplaySnapshot::copy_into(std::uint64_t seq, std::size_t row, TransitionBatch& batch) const {
  const auto& b = *blocks_[static_cast<std::size_t>(seq / block_size_ - first_block_)];
  const std::size_t slot = static_cast<std::size_t>(seq % block_size_);
  std::copy_n(b.states.begin() + static_cast<std::ptrdiff_t>(slot * obs_dim_), obs_dim_,
              batch.states.row(row).begin());
  std::copy_n(b.actions.begin() + static_cast<std::ptrdiff_t>(slot * act_dim_), act_dim_,
              batch.actions.row(row).begin());
  std::copy_n(b.next_states.begin() + static_cast<std::ptrdiff_t>(slot * obs_dim_), obs_dim_,
              batch.next_states.row(row).begin());
  batch.rewards[row] = b.rewards[slot];
  batch.dones[row] = b.dones[slot];
}

TransitionBatch ReplaySnapshot::sample_batch(std::size_t n, Rng& rng) const {
  const auto idx = draw(n, rng);
  TransitionBatch batch{Tensor::matrix(n, obs_dim_), Tensor::matrix(n, act_dim_), Tensor::vector(n),
                        Tensor::matrix(n, obs_dim_), Tensor::vector(n)};
  for (std::size_t r = 0; r < n; ++r) copy_into(idx[r], r, batch);
  return batch;
}

}  // namespace acn
