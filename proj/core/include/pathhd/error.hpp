#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathhd {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration values (dimensions, hyperparameters, flags).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Operands disagree on operator family or shape.
class MismatchError : public Error {
public:
    using Error::Error;
};

// A symbol (relation or entity) is not present in a codebook or graph.
class UnknownSymbolError : public Error {
public:
    explicit UnknownSymbolError(std::string symbol)
        : Error("unknown symbol: '" + symbol + "'"), symbol_(std::move(symbol)) {}

    const std::string& symbol() const noexcept { return symbol_; }

private:
    std::string symbol_;
};

// A vector or block whose norm is zero cannot be normalized or compared.
class ZeroNormError : public Error {
public:
    using Error::Error;
};

// Malformed input text. line() is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Filesystem or stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pathhd
