#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace phgame {

/// Edge index used when an error is raised below the network level.
inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad graph, invalid coupling parameters, infeasible start.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A barrier spring was evaluated at or beyond its critical distance.
class DomainViolation : public Error {
public:
    DomainViolation(double distance, double limit, std::size_t edge = kNoEdge);

    DomainViolation at_edge(std::size_t edge) const { return {distance_, limit_, edge}; }

    std::size_t edge() const noexcept { return edge_; }
    double distance() const noexcept { return distance_; }

private:
    std::size_t edge_;
    double distance_;
    double limit_;
};

/// An edge with positive rest length collapsed to zero length, so the spring
/// force has no direction.
class SingularConfiguration : public Error {
public:
    explicit SingularConfiguration(std::size_t edge = kNoEdge);

    SingularConfiguration at_edge(std::size_t edge) const { return SingularConfiguration(edge); }

    std::size_t edge() const noexcept { return edge_; }

private:
    std::size_t edge_;
};

/// Scenario text could not be parsed. `where` names the field or line.
class ParseError : public Error {
public:
    ParseError(const std::string& where, const std::string& what);

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace phgame
