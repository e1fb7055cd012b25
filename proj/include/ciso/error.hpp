#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ciso {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied parameters that violate an operation's preconditions.
class input_error : public error {
public:
    using error::error;
};

class invalid_field_error : public input_error {
public:
    using input_error::input_error;
};

class budget_error : public input_error {
public:
    using input_error::input_error;
};

class dimension_error : public input_error {
public:
    using input_error::input_error;
};

class degenerate_input_error : public input_error {
public:
    using input_error::input_error;
};

class parameter_error : public input_error {
public:
    using input_error::input_error;
};

class size_error : public input_error {
public:
    using input_error::input_error;
};

class improper_colouring_error : public input_error {
public:
    using input_error::input_error;
};

/// Malformed text input. `line()` is 1-based; 0 when not tied to a line.
class parse_error : public input_error {
public:
    parse_error(const std::string& what, std::size_t line = 0)
        : input_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An internal precondition between library stages was broken.
class contract_error : public error {
public:
    using error::error;
};

/// Regularization could not keep a non-trivial subgraph.
class degenerate_output_error : public error {
public:
    using error::error;
};

} // namespace ciso
