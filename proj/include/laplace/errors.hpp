#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace laplace {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

namespace detail {
std::string format_double(double v);
}

// ---- expression language ----

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::string expected)
        : Error("syntax error at offset " + std::to_string(offset) +
                ": expected " + expected),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, std::string name)
        : Error("unknown identifier '" + name + "' at offset " +
                std::to_string(offset)),
          offset_(offset),
          name_(std::move(name)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

class DomainError : public Error {
public:
    DomainError(std::string node, double argument)
        : Error("domain error in '" + node + "' for argument " +
                detail::format_double(argument)),
          node_(std::move(node)),
          argument_(argument) {}

    const std::string& node() const noexcept { return node_; }
    double argument() const noexcept { return argument_; }

private:
    std::string node_;
    double argument_;
};

// ---- critical point location and classification ----

class BoundaryMaximum : public Error {
public:
    explicit BoundaryMaximum(double where)
        : Error("maximum attained at or beyond the interval boundary near x = " +
                detail::format_double(where)),
          where_(where) {}

    double where() const noexcept { return where_; }

private:
    double where_;
};

class NoCriticalPoint : public Error {
public:
    explicit NoCriticalPoint(const std::string& why)
        : Error("no interior critical point found: " + why) {}
};

class AmbiguousMaximum : public Error {
public:
    AmbiguousMaximum(double first, double second)
        : Error("maximum is not unique: competing sites near x = " +
                detail::format_double(first) + " and x = " +
                detail::format_double(second)),
          first_(first),
          second_(second) {}

    double first() const noexcept { return first_; }
    double second() const noexcept { return second_; }

private:
    double first_;
    double second_;
};

class OddLeadingDerivative : public Error {
public:
    OddLeadingDerivative(int order, double value)
        : Error("leading nonvanishing derivative has odd order " +
                std::to_string(order) + " (value " + detail::format_double(value) +
                "); the point is not a smooth interior maximum"),
          order_(order) {}

    int order() const noexcept { return order_; }

private:
    int order_;
};

class PositiveLeadingDerivative : public Error {
public:
    PositiveLeadingDerivative(int order, double value)
        : Error("leading nonvanishing derivative of order " + std::to_string(order) +
                " is positive (" + detail::format_double(value) +
                "); the point is a local minimum, not a maximum"),
          order_(order) {}

    int order() const noexcept { return order_; }

private:
    int order_;
};

class AllDerivativesVanish : public Error {
public:
    explicit AllDerivativesVanish(int max_order)
        : Error("all derivatives up to order " + std::to_string(max_order) +
                " vanish at the critical point; cannot classify"),
          max_order_(max_order) {}

    int max_order() const noexcept { return max_order_; }

private:
    int max_order_;
};

// ---- asymptotic formulas ----

class ZeroAmplitude : public Error {
public:
    explicit ZeroAmplitude(double xi0)
        : Error("amplitude vanishes at the maximum x = " + detail::format_double(xi0) +
                "; the leading-order estimate degenerates") {}
};

class NonPositiveArgument : public Error {
public:
    explicit NonPositiveArgument(double x)
        : Error("log_gamma requires a positive argument, got " +
                detail::format_double(x)) {}
};

// ---- quadrature ----

class DivergentIntegral : public Error {
public:
    explicit DivergentIntegral(const std::string& why)
        : Error("integral appears divergent: " + why) {}
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what_failed, double err_est)
        : Error("quadrature failed to converge for " + what_failed +
                " (error estimate " + detail::format_double(err_est) + ")"),
          err_est_(err_est) {}

    double err_est() const noexcept { return err_est_; }

private:
    double err_est_;
};

// ---- proof-mirror diagnostics ----

class WindowExceedsInterval : public Error {
public:
    WindowExceedsInterval(double epsilon, double min_admissible_n)
        : Error("proof window of half-width " + detail::format_double(epsilon) +
                " does not fit inside the integration interval; smallest admissible n is about " +
                detail::format_double(min_admissible_n)),
          min_admissible_n_(min_admissible_n) {}

    double min_admissible_n() const noexcept { return min_admissible_n_; }

private:
    double min_admissible_n_;
};

}  // namespace laplace
