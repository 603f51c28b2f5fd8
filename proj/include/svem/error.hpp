#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

class InvalidDimensionError : public Error {
public:
    using Error::Error;
};

class UnsupportedOrderError : public Error {
public:
    explicit UnsupportedOrderError(int order)
        : Error("no embedded conference matrix of order " + std::to_string(order) +
                " (supported: 6, 8, 10, 12)"),
          order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

class DegenerateWeightsError : public Error {
public:
    DegenerateWeightsError() : Error("all weights are zero") {}
};

class ConvergenceError : public Error {
public:
    ConvergenceError(std::size_t lambda_index, std::size_t sweeps)
        : Error("lasso coordinate descent did not converge at lambda index " +
                std::to_string(lambda_index) + " after " + std::to_string(sweeps) + " sweeps"),
          lambda_index_(lambda_index) {}
    std::size_t lambda_index() const noexcept { return lambda_index_; }

private:
    std::size_t lambda_index_;
};

class CriterionInfeasibleError : public Error {
public:
    using Error::Error;
};

class DegenerateVarianceError : public Error {
public:
    DegenerateVarianceError() : Error("observed vector is constant; R^2 is undefined") {}
};

class DegenerateScenarioError : public Error {
public:
    using Error::Error;
};

class FactorMismatchError : public Error {
public:
    using Error::Error;
};

/// A selector failure inside one SVEM bootstrap iteration.
class IterationError : public Error {
public:
    IterationError(std::size_t iteration, const std::string& what)
        : Error("bootstrap iteration " + std::to_string(iteration) + ": " + what),
          iteration_(iteration) {}
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// A method failure inside one simulation replicate.
class ReplicateError : public Error {
public:
    ReplicateError(std::size_t replicate, const std::string& method, const std::string& what)
        : Error("replicate " + std::to_string(replicate) + ", method " + method + ": " + what),
          replicate_(replicate),
          method_(method) {}
    std::size_t replicate() const noexcept { return replicate_; }
    const std::string& method() const noexcept { return method_; }

private:
    std::size_t replicate_;
    std::string method_;
};

/// Malformed CSV input. Row and column are 1-based; row counts file lines.
class CsvError : public Error {
public:
    CsvError(const std::string& source, std::size_t row, std::size_t column, const std::string& what)
        : Error(source + ": row " + std::to_string(row) + ", column " + std::to_string(column) + ": " +
                what),
          row_(row),
          column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace svem
