#pragma once

#include <cstddef>
#include <list>
#include <map>
#include <utility>

namespace manet::routing {

/// Bounded map that evicts the least recently inserted-or-touched key.
template <typename K, typename V>
class BoundedLru {
 public:
  explicit BoundedLru(std::size_t capacity) : capacity_(capacity) {}

  /// Returns the value slot and whether it was newly created.
  std::pair<V&, bool> touch(const K& key) {
    if (auto it = index_.find(key); it != index_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return {it->second->second, false};
    }
    order_.emplace_front(key, V{});
    index_.emplace(key, order_.begin());
    if (order_.size() > capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
    return {order_.front().second, true};
  }

  bool contains(const K& key) const { return index_.contains(key); }
  std::size_t size() const noexcept { return order_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  std::list<std::pair<K, V>> order_;
  std::map<K, typename std::list<std::pair<K, V>>::iterator> index_;
};

}  // namespace manet::routing
