#pragma once

#include <stdexcept>
#include <string>

namespace saad {

// Exit status classes used by the command-line front end.
enum class ErrorClass { Validation = 2, Consistency = 3, Io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorClass::Validation, what) {}
};

class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& what) : Error(ErrorClass::Consistency, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorClass::Io, what) {}
};

// Raised when a numeric routine is called outside its domain.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace saad
