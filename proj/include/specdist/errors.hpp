#ifndef SPECDIST_ERRORS_HPP
#define SPECDIST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace specdist {

// Error categories; the C API and CLI map these to stable numeric codes.
enum class ErrorKind {
  invalid_input = 1,  // bad arguments, non-finite data, non-SPD matrices
  parse = 2,          // malformed CSV / JSON
  regime = 3,         // p/n assumption violated
  numeric = 4,        // quadrature or iteration failed to converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) {
  throw Error(ErrorKind::invalid_input, msg);
}
[[noreturn]] inline void throw_parse(const std::string& msg) {
  throw Error(ErrorKind::parse, msg);
}
[[noreturn]] inline void throw_regime(const std::string& msg) {
  throw Error(ErrorKind::regime, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(ErrorKind::numeric, msg);
}

}  // namespace specdist

#endif
