#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace plexus {

// Root of every error the library throws. Callers that only need a message
// catch this; callers that branch on the failure catch the concrete type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- emotion-engine -------------------------------------------------------

class LexiconError : public Error {
public:
    LexiconError(std::size_t line, const std::string& what)
        : Error("lexicon line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class LexiconRangeError : public LexiconError {
public:
    LexiconRangeError(std::size_t line, std::string token, double value)
        : LexiconError(line, "weight " + std::to_string(value) + " for '" + token +
                                 "' outside (0,1]"),
          token_(std::move(token)),
          value_(value) {}
    const std::string& token() const noexcept { return token_; }
    double value() const noexcept { return value_; }

private:
    std::string token_;
    double value_;
};

// ---- ingest ---------------------------------------------------------------

class ValidationError : public Error {
public:
    using Error::Error;
};

class CorpusParseError : public Error {
public:
    CorpusParseError(std::size_t line, const std::string& what)
        : Error("corpus line " + std::to_string(line) + ": invalid JSON: " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class CorpusSchemaError : public Error {
public:
    CorpusSchemaError(std::size_t line, std::string field, const std::string& what)
        : Error("corpus line " + std::to_string(line) + ": field \"" + field + "\" " + what),
          line_(line),
          field_(std::move(field)) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

class AuthError : public Error {
public:
    using Error::Error;
};

// Credentials are absent from the environment (distinct from a 401).
class AuthConfigError : public Error {
public:
    using Error::Error;
};

class RateLimitedError : public Error {
public:
    explicit RateLimitedError(std::chrono::seconds retry_after)
        : Error("rate limited, retry after " + std::to_string(retry_after.count()) + "s"),
          retry_after_(retry_after) {}
    std::chrono::seconds retry_after() const noexcept { return retry_after_; }

private:
    std::chrono::seconds retry_after_;
};

class ProtocolError : public Error {
public:
    using Error::Error;
};

// ---- graph-model / layout -------------------------------------------------

class ContractError : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

// ---- style ----------------------------------------------------------------

class StyleError : public Error {
public:
    StyleError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class StyleSyntaxError : public StyleError {
public:
    StyleSyntaxError(std::size_t line, std::size_t column, std::string expected)
        : StyleError(line, column, "syntax error, expected " + expected),
          expected_(std::move(expected)) {}
    const std::string& expected() const noexcept { return expected_; }

private:
    std::string expected_;
};

class UnknownPropertyError : public StyleError {
public:
    UnknownPropertyError(std::size_t line, std::size_t column, std::string name)
        : StyleError(line, column, "unknown property '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class StyleValueError : public StyleError {
public:
    StyleValueError(std::size_t line, std::size_t column, std::string property,
                    const std::string& what)
        : StyleError(line, column, "bad value for '" + property + "': " + what),
          property_(std::move(property)) {}
    const std::string& property() const noexcept { return property_; }

private:
    std::string property_;
};

// ---- service --------------------------------------------------------------

class NotFoundError : public Error {
public:
    using Error::Error;
};

class StartupError : public Error {
public:
    StartupError(std::string path, const std::string& what)
        : Error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class BindError : public Error {
public:
    using Error::Error;
};

}  // namespace plexus
