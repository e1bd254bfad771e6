#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relocate {

enum class ErrorCode {
  ResolutionTooCoarse,
  EmptyWorkspace,
  InvalidGeometry,
  OutOfBounds,
  UnknownObstacle,
  AlreadyDestroyed,
  StartBlocked,
  InvalidArgument,
  NoCandidate,
  UnresolvedFeature,
  IndexOutOfRange,
  CyclicHierarchy,
  InvalidKnowledgeBase,
  UnrecognizedObstacle,
  UnknownRecipient,
  UnknownSign,
  OutOfReach,
  NotCapable,
  SyntaxError,
  UnresolvedReference,
  CommonSignMismatch,
  GeometryError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure raised by the planning stack
/// carries one of the codes above so callers can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace relocate
