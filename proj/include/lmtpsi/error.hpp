#pragma once

#include <stdexcept>
#include <string>

namespace lmtpsi {

enum class ErrorKind {
  domain,                  // argument outside the operation's domain
  configuration,           // malformed input or missing data tables
  capability,              // request beyond what is implemented
  regime,                  // adiabatic-elimination validity gate violated
  resolution,              // grid or step too coarse for the request
  timing,                  // pulse train does not fit the interrogation time
  detection,               // no signal peak above the noise floor
  numerical_integrity,     // norm drift or non-finite values
  approximation_validity,  // closed-form expansion used outside its range
  truncation,              // thermal tail cut off too early (strict mode)
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::capability: return "capability";
    case ErrorKind::regime: return "regime";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::timing: return "timing";
    case ErrorKind::detection: return "detection";
    case ErrorKind::numerical_integrity: return "numerical-integrity";
    case ErrorKind::approximation_validity: return "approximation-validity";
    case ErrorKind::truncation: return "truncation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lmtpsi
