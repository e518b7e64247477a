#include "phgame/errors.hpp"

namespace phgame {

namespace {

std::string edge_label(std::size_t edge) {
    return edge == kNoEdge ? std::string("edge") : "edge " + std::to_string(edge + 1);
}

}  // namespace

DomainViolation::DomainViolation(double distance, double limit, std::size_t edge)
    : Error(edge_label(edge) + ": length " + std::to_string(distance) +
            " reached the barrier limit " + std::to_string(limit)),
      edge_(edge),
      distance_(distance),
      limit_(limit) {}

SingularConfiguration::SingularConfiguration(std::size_t edge)
    : Error(edge_label(edge) + " collapsed to zero length with positive rest length"), edge_(edge) {}

ParseError::ParseError(const std::string& where, const std::string& what)
    : Error(where + ": " + what), where_(where) {}

}  // namespace phgame
