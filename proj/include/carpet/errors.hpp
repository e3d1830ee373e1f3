#pragma once

#include <stdexcept>
#include <string>

namespace carpet {

enum class Errc {
  NotComparable,
  NotAChain,
  UndecidableAtDepth,
  EnclosureTooCoarse,
  WindowTooDeep,
  PreconditionViolated,
  DepthInsufficient,
  MembershipUnavailable,
  HypothesisViolated,
  CollinearInput,
  NoAdmissibleCandidate,
  NotFound,
  HypothesisFail,
  MalformedCertificate,
  ScheduleDepthExceeded,
  NonConvergent,
  InternalError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotComparable: return "NOT-COMPARABLE";
    case Errc::NotAChain: return "NOT-A-CHAIN";
    case Errc::UndecidableAtDepth: return "UNDECIDABLE-AT-DEPTH";
    case Errc::EnclosureTooCoarse: return "ENCLOSURE-TOO-COARSE";
    case Errc::WindowTooDeep: return "WINDOW-TOO-DEEP";
    case Errc::PreconditionViolated: return "PRECONDITION-VIOLATED";
    case Errc::DepthInsufficient: return "DEPTH-INSUFFICIENT";
    case Errc::MembershipUnavailable: return "MEMBERSHIP-UNAVAILABLE";
    case Errc::HypothesisViolated: return "HYPOTHESIS-VIOLATED";
    case Errc::CollinearInput: return "COLLINEAR-INPUT";
    case Errc::NoAdmissibleCandidate: return "NO-ADMISSIBLE-CANDIDATE";
    case Errc::NotFound: return "NOT-FOUND";
    case Errc::HypothesisFail: return "HYPOTHESIS-FAIL";
    case Errc::MalformedCertificate: return "MALFORMED-CERTIFICATE";
    case Errc::ScheduleDepthExceeded: return "SCHEDULE-DEPTH-EXCEEDED";
    case Errc::NonConvergent: return "NON-CONVERGENT";
    case Errc::InternalError: return "INTERNAL-ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace carpet
