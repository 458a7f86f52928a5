// hopfsr/types.hpp
//
// Shared aliases, small numeric helpers and error types for the hopfsr
// library.  Points of S^{2n+1} live in C^{n+1}; all geometric objects are
// stored as dense complex column vectors and the real inner product of the
// underlying R^{2n+2} is used throughout.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace hopfsr {

using CVec = Eigen::VectorXcd;   // ambient vector in C^{n+1}
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Real inner product of C^{n+1} viewed as R^{2n+2}.  Eigen's dot() conjugates
// its first argument, so the real part is exactly Re<a,b> and is symmetric.
inline double rdot(const CVec& a, const CVec& b) { return a.dot(b).real(); }

// Multiplication by i, i.e. the ambient complex structure of C^{n+1}.
inline CVec mul_i(const CVec& v) { return std::complex<double>(0.0, 1.0) * v; }

inline bool all_finite(const CVec& v) { return v.allFinite(); }

// Raised when a numerical integration produces a non-finite state.
class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& what, double t)
      : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Raised when conjugate-point candidates cannot be isolated on the chosen
// time grid (two refined candidates inside one grid step).
class refinement_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the horizontal part of the momentum is numerically zero and a
// canonical splitting along the extremal therefore does not exist.
class degenerate_momentum_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hopfsr
