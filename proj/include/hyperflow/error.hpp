#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperflow {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside its model domain (or inside the numerical guard band).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller-side precondition was violated (non-unit direction, negative length...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// log_polar at the origin: the direction is undefined.
class UndefinedDirectionError : public Error {
 public:
  using Error::Error;
};

/// A discrete curve has a degenerate edge and must be resampled first.
class ResampleRequired : public Error {
 public:
  using Error::Error;
};

/// Geometric configuration is unsuitable (origin outside the enclosed region...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Raster too coarse for the requested interpolation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Bisection could not find an admissible value inside its bracket.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Radial graph requested for a curve that is not star-shaped.
class NotStarShaped : public Error {
 public:
  NotStarShaped(const std::string& what, double theta_lo, double theta_hi)
      : Error(what), theta_lo_(theta_lo), theta_hi_(theta_hi) {}
  double theta_lo() const { return theta_lo_; }
  double theta_hi() const { return theta_hi_; }

 private:
  double theta_lo_;
  double theta_hi_;
};

/// Base of the conditions that stop a flow run.
class FlowHalt : public Error {
 public:
  using Error::Error;
};

/// A curvature left the cone of the speed function; carries the vertex index.
class FlowNotDefined : public FlowHalt {
 public:
  FlowNotDefined(const std::string& what, std::size_t vertex)
      : FlowHalt(what), vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

/// The evolving front self-intersected (or a graph folded).
class SurgeryNeeded : public FlowHalt {
 public:
  using FlowHalt::FlowHalt;
};

/// The evolving front touched the guard band of its model.
class GuardBandHalt : public FlowHalt {
 public:
  using FlowHalt::FlowHalt;
};

/// Time step fell below the underflow threshold.
class TimeStepUnderflow : public FlowHalt {
 public:
  using FlowHalt::FlowHalt;
};

}  // namespace hyperflow
