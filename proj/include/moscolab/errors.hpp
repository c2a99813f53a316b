#ifndef MOSCOLAB_ERRORS_HPP
#define MOSCOLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace moscolab {

struct SpaceMismatch : std::runtime_error {
  explicit SpaceMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct ImproperFunction : std::runtime_error {
  explicit ImproperFunction(const std::string& what) : std::runtime_error(what) {}
};

struct Unconverged : std::runtime_error {
  explicit Unconverged(const std::string& what) : std::runtime_error(what) {}
};

struct NoUniformBound : std::runtime_error {
  explicit NoUniformBound(const std::string& what) : std::runtime_error(what) {}
};

struct NoBound : std::runtime_error {
  explicit NoBound(const std::string& what) : std::runtime_error(what) {}
};

struct NotCauchy : std::runtime_error {
  explicit NotCauchy(const std::string& what) : std::runtime_error(what) {}
};

struct Unbounded : std::runtime_error {
  explicit Unbounded(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionFailed : std::runtime_error {
  explicit PreconditionFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace moscolab

#endif
