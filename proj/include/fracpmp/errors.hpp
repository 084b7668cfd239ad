#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracpmp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The horizon is not an integer number of steps.
class NonAlignedHorizon : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// Two objects that must share a grid were built on different grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

class SingularPoint : public Error {
public:
    using Error::Error;
};

class InadmissibleDirection : public Error {
public:
    using Error::Error;
};

/// A marching solver produced a node value above the blowup threshold.
class NumericalBlowup : public Error {
public:
    NumericalBlowup(std::size_t node, double time, double magnitude)
        : Error("numerical blowup at node " + std::to_string(node) + " (t = " +
                std::to_string(time) + ", |y| = " + std::to_string(magnitude) + ")"),
          node_(node),
          time_(time) {}

    std::size_t node() const noexcept { return node_; }
    double time() const noexcept { return time_; }

private:
    std::size_t node_;
    double time_;
};

/// Fixed-point iteration of the Gronwall operator left the representable range.
class Divergence : public Error {
public:
    using Error::Error;
};

/// Configuration document rejected; `path()` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string path, std::string reason)
        : Error(path.empty() ? reason : path + ": " + reason),
          path_(std::move(path)),
          reason_(std::move(reason)) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

}  // namespace fracpmp
