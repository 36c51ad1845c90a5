#ifndef ROLLER_EXPECTED_HPP
#define ROLLER_EXPECTED_HPP

#include <stdexcept>
#include <utility>
#include <variant>

namespace roller {

// Minimal value-or-error carrier (std::expected is C++23).
template <typename T, typename E>
class Expected {
public:
    Expected(T value) : data_(std::in_place_index<0>, std::move(value)) {}
    Expected(E error) : data_(std::in_place_index<1>, std::move(error)) {}

    explicit operator bool() const { return data_.index() == 0; }
    bool has_value() const { return data_.index() == 0; }

    const T& value() const {
        if (!has_value()) throw std::logic_error("Expected: no value");
        return std::get<0>(data_);
    }
    T& value() {
        if (!has_value()) throw std::logic_error("Expected: no value");
        return std::get<0>(data_);
    }

    const E& error() const {
        if (has_value()) throw std::logic_error("Expected: no error");
        return std::get<1>(data_);
    }

    const T& operator*() const { return value(); }
    T& operator*() { return value(); }
    const T* operator->() const { return &value(); }
    T* operator->() { return &value(); }

private:
    std::variant<T, E> data_;
};

}  // namespace roller

#endif  // ROLLER_EXPECTED_HPP
