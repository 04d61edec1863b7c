#pragma once

#include <condition_variable>
#include <deque>
#include <mutex>
#include <utility>

namespace zeroml {

/// Unbounded multi-producer queue with a blocking receive.
template <class T>
class Channel {
public:
    void send(T value) {
        {
            std::lock_guard lock(mutex_);
            items_.push_back(std::move(value));
        }
        ready_.notify_one();
    }

    T receive() {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [&] { return !items_.empty(); });
        T value = std::move(items_.front());
        items_.pop_front();
        return value;
    }

private:
    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<T> items_;
};

}  // namespace zeroml
