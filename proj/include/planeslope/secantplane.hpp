#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "planeslope/expr.hpp"

namespace planeslope {

/// Minimum normalized determinant for frames generated by the probe.
inline constexpr double kKappaMin = 1e-3;
/// Below this normalized determinant a frame is rejected as collinear.
inline constexpr double kCollinearThreshold = 1e-12;

/// n linearly independent direction vectors of length n; they are the rows of
/// the secant-plane system. Construction rejects zero vectors and non-square
/// shapes. Independence is checked when the system is solved.
class Frame {
 public:
  explicit Frame(std::vector<Vec> dirs);

  std::size_t dim() const noexcept { return dirs_.size(); }
  const std::vector<Vec>& dirs() const noexcept { return dirs_; }
  const Vec& operator[](std::size_t i) const { return dirs_[i]; }

  /// Every direction multiplied by s.
  Frame scaled(double s) const;

 private:
  std::vector<Vec> dirs_;
};

/// Slope (coefficient vector) of the secant plane, with the diagnostics that
/// travel with it.
struct Slope {
  Vec components;
  /// Normalized determinant of the rows actually solved.
  double conditioning = 1.0;
  /// Some increment was within rounding of its operands.
  bool cancellation_limited = false;
  /// Frame conditioning below kKappaMin.
  bool conditioning_warning = false;

  std::size_t size() const noexcept { return components.size(); }
  double operator[](std::size_t i) const { return components[i]; }
};

/// f(p + v) - f(p), override-aware.
double delta(const ScalarField& field, std::span<const double> p,
             std::span<const double> v);

/// |det| of the frame matrix after normalizing each row to unit length.
/// 1 for orthonormal frames, 0 for collinear ones, invariant under positive
/// scaling of any row.
double conditioning(const Frame& frame);
double conditioning(std::span<const Vec> rows);

/// Solves rows . slope = deltas. n = 1 divides, n = 2 uses Cramer's rule,
/// larger n uses Gaussian elimination with partial pivoting.
/// Throws CollinearFrame when conditioning < kCollinearThreshold.
Slope solve_frame_system(const Frame& frame, std::span<const double> deltas);

/// Closed-form 2x2 Cramer solve of rows . slope = deltas:
///   a = (k2 dh - h2 dk) / (h1 k2 - k1 h2),  b = (h1 dk - k1 dh) / (h1 k2 - k1 h2)
Vec solve_cramer2(std::span<const Vec> rows, std::span<const double> deltas);

/// Gaussian elimination with partial pivoting, any n.
Vec solve_elimination(std::span<const Vec> rows, std::span<const double> deltas);

/// Slope of the secant plane through (p, f(p)) and (p + d_i, f(p + d_i)).
///
/// Each row is the displacement actually realized in floating point,
/// (p + d_i) - p, so that the plane passes through the evaluated points.
/// Throws CollinearFrame and DomainError.
Slope secant_slope(const ScalarField& field, std::span<const double> p,
                   const Frame& frame);
inline Slope secant_slope(const ScalarField& field, const Point& p,
                          const Frame& frame) {
  return secant_slope(field, p.view(), frame);
}

/// Reference-point overload: f(p) already known.
Slope secant_slope(const ScalarField& field, std::span<const double> p,
                   double fp, const Frame& frame);

/// True when |d| is within 1e3 machine epsilons of the larger operand of the
/// subtraction that produced it.
bool cancellation_limited(double d, double f_base, double f_moved) noexcept;

}  // namespace planeslope
