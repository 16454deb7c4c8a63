#include "planeslope/secantplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace planeslope {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_square(std::span<const Vec> rows) {
  for (const Vec& r : rows)
    if (r.size() != rows.size())
      throw std::invalid_argument("frame must have n directions of length n");
}

}  // namespace

Frame::Frame(std::vector<Vec> dirs) : dirs_(std::move(dirs)) {
  if (dirs_.empty()) throw std::invalid_argument("frame must not be empty");
  check_square(dirs_);
  for (const Vec& d : dirs_) {
    for (double x : d)
      if (!std::isfinite(x))
        throw std::invalid_argument("frame direction is not finite");
    if (norm2(d) == 0.0) throw ZeroDirection("frame direction is zero");
  }
}

Frame Frame::scaled(double s) const {
  std::vector<Vec> out = dirs_;
  for (Vec& d : out)
    for (double& x : d) x *= s;
  return Frame(std::move(out));
}

double delta(const ScalarField& field, std::span<const double> p,
             std::span<const double> v) {
  if (v.size() != p.size())
    throw std::invalid_argument("increment dimension does not match point");
  Vec moved(p.begin(), p.end());
  for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += v[i];
  return eval(field, moved) - eval(field, p);
}

double conditioning(std::span<const Vec> rows) {
  check_square(rows);
  const std::size_t n = rows.size();
  std::vector<Vec> a(rows.begin(), rows.end());
  for (Vec& r : a) {
    const double len = norm2(r);
    if (len == 0.0) throw ZeroDirection("frame direction is zero");
    for (double& x : r) x /= len;
  }
  if (n == 1) return 1.0;
  if (n == 2) return std::abs(a[0][0] * a[1][1] - a[1][0] * a[0][1]);

  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) return 0.0;
    std::swap(a[pivot], a[col]);
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
    }
  }
  return std::min(1.0, std::abs(det));
}

double conditioning(const Frame& frame) { return conditioning(frame.dirs()); }

Vec solve_cramer2(std::span<const Vec> rows, std::span<const double> deltas) {
  if (rows.size() != 2 || deltas.size() != 2)
    throw std::invalid_argument("Cramer solve needs a 2x2 system");
  const double h1 = rows[0][0], h2 = rows[0][1];
  const double k1 = rows[1][0], k2 = rows[1][1];
  const double dh = deltas[0], dk = deltas[1];
  const double det = h1 * k2 - k1 * h2;
  if (det == 0.0) throw CollinearFrame("singular 2x2 system");
  return {(k2 * dh - h2 * dk) / det, (h1 * dk - k1 * dh) / det};
}

Vec solve_elimination(std::span<const Vec> rows,
                      std::span<const double> deltas) {
  check_square(rows);
  const std::size_t n = rows.size();
  if (deltas.size() != n)
    throw std::invalid_argument("deltas length does not match frame");
  std::vector<Vec> a(rows.begin(), rows.end());
  Vec b(deltas.begin(), deltas.end());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) throw CollinearFrame("singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      if (m == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  Vec x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

namespace {

Slope solve_rows(std::span<const Vec> rows, std::span<const double> deltas) {
  check_square(rows);
  if (deltas.size() != rows.size())
    throw std::invalid_argument("deltas length does not match frame");
  Slope out;
  out.conditioning = conditioning(rows);
  if (out.conditioning < kCollinearThreshold)
    throw CollinearFrame("frame directions are linearly dependent");
  out.conditioning_warning = out.conditioning < kKappaMin;
  switch (rows.size()) {
    case 1:
      out.components = {deltas[0] / rows[0][0]};
      break;
    case 2:
      out.components = solve_cramer2(rows, deltas);
      break;
    default:
      out.components = solve_elimination(rows, deltas);
  }
  for (double c : out.components)
    if (!std::isfinite(c)) throw DomainError("non-finite slope component");
  return out;
}

}  // namespace

Slope solve_frame_system(const Frame& frame, std::span<const double> deltas) {
  return solve_rows(frame.dirs(), deltas);
}

bool cancellation_limited(double d, double f_base, double f_moved) noexcept {
  constexpr double kFactor = 1e3 * std::numeric_limits<double>::epsilon();
  return std::abs(d) < kFactor * std::max(std::abs(f_base), std::abs(f_moved));
}

Slope secant_slope(const ScalarField& field, std::span<const double> p,
                   double fp, const Frame& frame) {
  const std::size_t n = field.arity();
  if (p.size() != n || frame.dim() != n)
    throw std::invalid_argument("frame and point must match the field arity");
  std::vector<Vec> rows(n, Vec(n));
  Vec deltas(n);
  bool limited = false;
  Vec moved(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      moved[j] = p[j] + frame[i][j];
      rows[i][j] = moved[j] - p[j];
    }
    const double fq = eval(field, moved);
    deltas[i] = fq - fp;
    limited = limited || cancellation_limited(deltas[i], fp, fq);
  }
  Slope out = solve_rows(rows, deltas);
  out.cancellation_limited = limited;
  return out;
}

Slope secant_slope(const ScalarField& field, std::span<const double> p,
                   const Frame& frame) {
  return secant_slope(field, p, eval(field, p), frame);
}

}  // namespace planeslope
