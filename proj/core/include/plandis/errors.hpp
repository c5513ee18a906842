#ifndef PLANDIS_ERRORS_HPP
#define PLANDIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plandis {

// Base of all library errors. Two families matter for callers: precondition
// violations (bad input, exit code 2 in the CLI) and convergence failures
// (exit code 3).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// graph_core
class DisconnectedGraph : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NonpositiveWeight : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NonpositiveMeasure : public PreconditionError { public: using PreconditionError::PreconditionError; };
class SelfLoop : public PreconditionError { public: using PreconditionError::PreconditionError; };
class DuplicateEdge : public PreconditionError { public: using PreconditionError::PreconditionError; };
class RadiusExceedsGraph : public PreconditionError { public: using PreconditionError::PreconditionError; };
class ParseError : public PreconditionError { public: using PreconditionError::PreconditionError; };

// p_operator
class NonpositiveExponent : public PreconditionError { public: using PreconditionError::PreconditionError; };
class InvalidOrder : public PreconditionError { public: using PreconditionError::PreconditionError; };
class BoundaryVertex : public PreconditionError { public: using PreconditionError::PreconditionError; };
class SupportTouchesBoundary : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NonpositiveGroundFunction : public PreconditionError { public: using PreconditionError::PreconditionError; };

// model_graphs
class InvalidSpec : public PreconditionError { public: using PreconditionError::PreconditionError; };
class RadiusOutOfRange : public PreconditionError { public: using PreconditionError::PreconditionError; };
class SeriesDivergent : public PreconditionError { public: using PreconditionError::PreconditionError; };
class UnknownAsymptotics : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NonpositiveInitial : public PreconditionError { public: using PreconditionError::PreconditionError; };

// solvers
class NoConvergence : public ConvergenceError { public: using ConvergenceError::ConvergenceError; };
class NoScalarRoot : public ConvergenceError { public: using ConvergenceError::ConvergenceError; };
class DivergentExhaustion : public ConvergenceError { public: using ConvergenceError::ConvergenceError; };
class NoRootBracket : public ConvergenceError { public: using ConvergenceError::ConvergenceError; };
class PreconditionViolated : public PreconditionError { public: using PreconditionError::PreconditionError; };

// criticality
class NonpositiveGreen : public PreconditionError { public: using PreconditionError::PreconditionError; };
class MeasureMismatch : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NonpositiveReference : public PreconditionError { public: using PreconditionError::PreconditionError; };

// landis
class EmptyAnnulus : public PreconditionError { public: using PreconditionError::PreconditionError; };
class PotentialBoundViolated : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NotHarmonic : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NotSubharmonic : public PreconditionError { public: using PreconditionError::PreconditionError; };
class NotSubcritical : public PreconditionError { public: using PreconditionError::PreconditionError; };
class InvalidDegree : public PreconditionError { public: using PreconditionError::PreconditionError; };
class ExponentOutOfRange : public PreconditionError { public: using PreconditionError::PreconditionError; };
class DegenerateData : public PreconditionError { public: using PreconditionError::PreconditionError; };

}  // namespace plandis

#endif  // PLANDIS_ERRORS_HPP
