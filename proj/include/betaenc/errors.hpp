#pragma once

#include <stdexcept>
#include <string>

namespace betaenc {

// Violated argument contract (out-of-domain sample, illegal threshold, ...).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures that can occur on valid input.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// first_visit_time ran out of iterations.
class not_attracted_error : public error {
public:
    using error::error;
};

// Bernoulli map with a threshold shift has no bounded invariant subinterval.
class no_invariant_interval_error : public error {
public:
    using error::error;
};

class estimation_error : public error {
public:
    enum class kind { no_root, degenerate };

    estimation_error(kind k, const std::string& what) : error(what), kind_(k) {}
    kind reason() const noexcept { return kind_; }

private:
    kind kind_;
};

// Two-state chain with an unvisited state or without a unique stationary law.
class chain_error : public error {
public:
    enum class kind { degenerate, reducible };

    chain_error(kind k, const std::string& what) : error(what), kind_(k) {}
    kind reason() const noexcept { return kind_; }

private:
    kind kind_;
};

class config_error : public error {
public:
    using error::error;
};

} // namespace betaenc
