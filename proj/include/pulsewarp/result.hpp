#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace pulsewarp {

// Minimal value-or-error return for paths that must never throw (payload
// parsing, audio-thread calls).
template <typename T, typename E>
class Result {
  public:
    Result(T value) : v_(std::move(value)) {}
    Result(E error) : v_(error) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const {
        assert(ok());
        return std::get<T>(v_);
    }
    T& value() {
        assert(ok());
        return std::get<T>(v_);
    }
    E error() const {
        assert(!ok());
        return std::get<E>(v_);
    }

  private:
    std::variant<T, E> v_;
};

}  // namespace pulsewarp
