#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lmopt {

// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A completion did not contain a required output field marker.
class ParseError : public Error {
public:
    ParseError(std::string module_label, const std::string& what)
        : Error(module_label.empty() ? what : module_label + ": " + what),
          module_label_(std::move(module_label)) {}

    const std::string& module_label() const noexcept { return module_label_; }

private:
    std::string module_label_;
};

class ToolUnavailable : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// Network failure talking to a remote service. Retryable.
class TransportError : public Error {
public:
    using Error::Error;
};

class MockMiss : public Error {
public:
    using Error::Error;
};

// Not enough kept traces to build a fine-tuning dataset (the "--" outcome).
class InsufficientData : public Error {
public:
    InsufficientData(std::size_t traces_total, std::size_t traces_kept, std::size_t records,
                     std::size_t min_records)
        : Error("insufficient fine-tuning data: " + std::to_string(traces_kept) + " of " +
                std::to_string(traces_total) + " traces kept, " + std::to_string(records) +
                " records (minimum " + std::to_string(min_records) + ")"),
          traces_total(traces_total), traces_kept(traces_kept), records(records),
          min_records(min_records) {}

    std::size_t traces_total;
    std::size_t traces_kept;
    std::size_t records;
    std::size_t min_records;
};

class TrainerFailed : public Error {
public:
    using Error::Error;
};

class UnknownStrategy : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

} // namespace lmopt
