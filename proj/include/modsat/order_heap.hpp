#pragma once

#include <cstdint>
#include <vector>

#include "modsat/cnf.hpp"

namespace modsat {

// Indexed binary max-heap of variables keyed by an external activity array.
// Equal activities are ordered by lower variable index first.
class OrderHeap {
public:
  explicit OrderHeap(const std::vector<double>& activity) : act_(&activity) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool in_heap(Var v) const { return static_cast<std::size_t>(v) < index_.size() && index_[v] >= 0; }
  Var top() const { return heap_.empty() ? -1 : heap_.front(); }
  const std::vector<Var>& elements() const { return heap_; }

  void grow(int num_vars) {
    if (static_cast<std::size_t>(num_vars) > index_.size()) index_.resize(static_cast<std::size_t>(num_vars), -1);
  }

  void insert(Var v) {
    grow(v + 1);
    if (in_heap(v)) return;
    index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(index_[v]);
  }

  // Restores the heap property after v's key changed in either direction.
  void update(Var v) {
    if (!in_heap(v)) return;
    sift_up(index_[v]);
    sift_down(index_[v]);
  }

  Var remove_max() {
    const Var v = heap_.front();
    heap_.front() = heap_.back();
    index_[heap_.front()] = 0;
    index_[v] = -1;
    heap_.pop_back();
    if (heap_.size() > 1) sift_down(0);
    return v;
  }

  void clear() {
    for (Var v : heap_) index_[v] = -1;
    heap_.clear();
  }

  void build(const std::vector<Var>& vars) {
    clear();
    for (Var v : vars) {
      grow(v + 1);
      if (in_heap(v)) continue;
      index_[v] = static_cast<int>(heap_.size());
      heap_.push_back(v);
    }
    for (int i = static_cast<int>(heap_.size()) / 2 - 1; i >= 0; --i) sift_down(i);
  }

  // Strict "a goes above b".
  bool before(Var a, Var b) const {
    const double x = (*act_)[a], y = (*act_)[b];
    return x > y || (x == y && a < b);
  }

  bool valid() const {
    for (std::size_t i = 1; i < heap_.size(); ++i)
      if (before(heap_[i], heap_[(i - 1) / 2])) return false;
    for (std::size_t i = 0; i < heap_.size(); ++i)
      if (index_[heap_[i]] != static_cast<int>(i)) return false;
    return true;
  }

private:
  void sift_up(int i) {
    const Var v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) >> 1;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    index_[v] = i;
  }

  void sift_down(int i) {
    const Var v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      index_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    index_[v] = i;
  }

  const std::vector<double>* act_;
  std::vector<Var> heap_;
  std::vector<int> index_;
};

} // namespace modsat
