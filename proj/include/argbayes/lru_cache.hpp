#pragma once

#include <cstddef>
#include <functional>
#include <list>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>

namespace argbayes {

// Bounded least-recently-used map, safe for concurrent callers. Values are
// computed outside the lock, so two racing callers may both compute a
// missing entry; the cached functions are pure, so either result is fine.
template <typename Key, typename Value, typename Hash = std::hash<Key>>
class LruCache {
public:
    explicit LruCache(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

    LruCache(const LruCache&) = delete;
    LruCache& operator=(const LruCache&) = delete;

    std::optional<Value> get(const Key& key) {
        std::lock_guard lock(mutex_);
        auto it = index_.find(key);
        if (it == index_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        order_.splice(order_.begin(), order_, it->second);
        return it->second->second;
    }

    void put(const Key& key, Value value) {
        std::lock_guard lock(mutex_);
        auto it = index_.find(key);
        if (it != index_.end()) {
            it->second->second = std::move(value);
            order_.splice(order_.begin(), order_, it->second);
            return;
        }
        order_.emplace_front(key, std::move(value));
        index_.emplace(key, order_.begin());
        if (index_.size() > capacity_) {
            index_.erase(order_.back().first);
            order_.pop_back();
        }
    }

    template <typename Compute>
    Value get_or_compute(const Key& key, Compute&& compute) {
        if (auto cached = get(key)) return *std::move(cached);
        Value value = compute();
        put(key, value);
        return value;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return index_.size();
    }
    std::size_t capacity() const { return capacity_; }
    std::size_t hits() const {
        std::lock_guard lock(mutex_);
        return hits_;
    }
    std::size_t misses() const {
        std::lock_guard lock(mutex_);
        return misses_;
    }

    void clear() {
        std::lock_guard lock(mutex_);
        order_.clear();
        index_.clear();
    }

private:
    using Entry = std::pair<Key, Value>;

    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::list<Entry> order_;
    std::unordered_map<Key, typename std::list<Entry>::iterator, Hash> index_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

}  // namespace argbayes
