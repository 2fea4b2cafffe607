#pragma once

#include <stdexcept>
#include <string>

namespace corpusdiff {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad or missing fields in problem manifests, corpus files, ratings files, etc.
class ManifestError : public Error {
public:
    explicit ManifestError(const std::string& what) : Error(what) {}
};

class GatewayError : public Error {
public:
    GatewayError(const std::string& what, bool retryable = false)
        : Error(what), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

class CacheMissError : public GatewayError {
public:
    explicit CacheMissError(const std::string& what) : GatewayError(what, false) {}
};

// Model output that could not be parsed into the expected shape.
// Carries the raw text so callers can log it or map it to a neutral value.
class UnparseableOutput : public Error {
public:
    UnparseableOutput(const std::string& what, std::string raw)
        : Error(what), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

} // namespace corpusdiff
