#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rlintro/learner.hpp"
#include "rlintro/rng.hpp"

namespace rlintro {

// Fixed-capacity ring buffer of transitions; sampling is uniform with
// replacement.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        storage_.reserve(capacity);
    }

    void push(const Transition& t) {
        if (storage_.size() < capacity_) {
            storage_.push_back(t);
        } else {
            storage_[write_pos_] = t;
        }
        write_pos_ = (write_pos_ + 1) % capacity_;
    }

    const Transition& sample(Rng& rng) const {
        if (storage_.empty()) {
            throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
        }
        return storage_[rng.uniform_index(storage_.size())];
    }

    std::vector<Transition> sample_batch(std::size_t n, Rng& rng) const {
        std::vector<Transition> batch;
        batch.reserve(n);
        for (std::size_t i = 0; i < n; ++i) batch.push_back(sample(rng));
        return batch;
    }

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }

  private:
    std::size_t capacity_;
    std::size_t write_pos_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace rlintro
