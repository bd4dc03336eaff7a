#pragma once

#include <stdexcept>
#include <string>

namespace quatfact {

/// Base of every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class dimension_error : public error {
  public:
    using error::error;
};

/// Input outside an operation's mathematical domain (zero quaternion inverse,
/// non-Hermitian matrix handed to an HPD solve, zero vector in a cosine).
class domain_error : public error {
  public:
    using error::error;
};

/// A real factorization behind a linear solve failed.
class singular_error : public error {
  public:
    using error::error;
};

/// Malformed file contents. Carries the byte offset where parsing stopped.
class parse_error : public error {
  public:
    parse_error(const std::string &what, std::size_t offset)
        : error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

class io_error : public error {
  public:
    using error::error;
};

/// Invalid or contradictory user configuration.
class config_error : public error {
  public:
    using error::error;
};

}  // namespace quatfact
