#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specdrive {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Formula / guard text could not be tokenized or parsed.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t position, const std::string& expected, const std::string& found)
      : Error("syntax error at position " + std::to_string(position) + ": expected " + expected +
              ", found " + found),
        position(position), expected(expected), found(found) {}
  std::size_t position;
  std::string expected;
  std::string found;
};

// An identifier is not among the declared propositions.
class UnknownPropositionError : public Error {
public:
  explicit UnknownPropositionError(const std::string& name, int line = 0)
      : Error(line > 0 ? "unknown proposition '" + name + "' (line " + std::to_string(line) + ")"
                       : "unknown proposition '" + name + "'"),
        name(name), line(line) {}
  std::string name;
  int line;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

class TooManyPropsError : public Error {
public:
  explicit TooManyPropsError(std::size_t n)
      : Error("proposition set too large for state enumeration: " + std::to_string(n)) {}
};

class DuplicateStateError : public Error {
public:
  explicit DuplicateStateError(const std::string& name) : Error("duplicate state '" + name + "'") {}
};

class StepSyntaxError : public Error {
public:
  StepSyntaxError(int line, const std::string& what)
      : Error("step syntax error (line " + std::to_string(line) + "): " + what), line(line) {}
  int line;
};

class EmptyStepListError : public Error {
public:
  EmptyStepListError() : Error("step list is empty") {}
};

class PropMismatchError : public Error {
public:
  explicit PropMismatchError(const std::string& what) : Error(what) {}
};

class ExplosionGuardError : public Error {
public:
  explicit ExplosionGuardError(std::size_t bound)
      : Error("path enumeration exceeded configured bound of " + std::to_string(bound)) {}
};

class FormulaTooLargeError : public Error {
public:
  explicit FormulaTooLargeError(std::size_t bound)
      : Error("automaton construction exceeded node bound of " + std::to_string(bound)) {}
};

class IncompleteWorldError : public Error {
public:
  IncompleteWorldError() : Error("world dynamics are not derived from a scenario model") {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class EndpointUnreachableError : public Error {
public:
  explicit EndpointUnreachableError(const std::string& what) : Error(what) {}
};

class AuthError : public Error {
public:
  explicit AuthError(const std::string& what) : Error(what) {}
};

class MalformedResponseError : public Error {
public:
  explicit MalformedResponseError(const std::string& what) : Error(what) {}
};

}  // namespace specdrive
