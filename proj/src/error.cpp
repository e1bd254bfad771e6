#include "relocate/error.hpp"

namespace relocate {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::EmptyWorkspace: return "EmptyWorkspace";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::UnknownObstacle: return "UnknownObstacle";
    case ErrorCode::AlreadyDestroyed: return "AlreadyDestroyed";
    case ErrorCode::StartBlocked: return "StartBlocked";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoCandidate: return "NoCandidate";
    case ErrorCode::UnresolvedFeature: return "UnresolvedFeature";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CyclicHierarchy: return "CyclicHierarchy";
    case ErrorCode::InvalidKnowledgeBase: return "InvalidKnowledgeBase";
    case ErrorCode::UnrecognizedObstacle: return "UnrecognizedObstacle";
    case ErrorCode::UnknownRecipient: return "UnknownRecipient";
    case ErrorCode::UnknownSign: return "UnknownSign";
    case ErrorCode::OutOfReach: return "OutOfReach";
    case ErrorCode::NotCapable: return "NotCapable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::CommonSignMismatch: return "CommonSignMismatch";
    case ErrorCode::GeometryError: return "GeometryError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace relocate
