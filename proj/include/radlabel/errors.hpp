#pragma once

#include <stdexcept>
#include <string>

namespace radlabel {

// Base of every exception thrown by the library. The C API maps each
// subclass onto one status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent caller-supplied data (files, CSV rows, sizes).
class InputError : public Error {
public:
    using Error::Error;
};

// A precondition of an operation was violated by the calling code.
class ContractError : public Error {
public:
    using Error::Error;
};

// A data structure failed its own invariants (dangling edge, duplicate id).
class IntegrityError : public Error {
public:
    using Error::Error;
};

// The requested quantity is mathematically undefined for this input.
class UndefinedError : public Error {
public:
    using Error::Error;
};

// Input exceeds a hard size guard.
class SizeError : public Error {
public:
    using Error::Error;
};

} // namespace radlabel
