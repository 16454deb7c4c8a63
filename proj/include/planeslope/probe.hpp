#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "planeslope/expr.hpp"
#include "planeslope/secantplane.hpp"

namespace planeslope {

/// Geometric schedule of uniform frame scales s0 * rho^j, j = 0..levels-1.
struct Ladder {
  double s0 = 0.1;
  double rho = 0.5;
  std::size_t levels = 20;

  /// Throws ConfigError unless s0 > 0, 0 < rho < 1 and levels >= 4.
  void validate() const;
  double scale(std::size_t j) const;
};

struct SlopeSample {
  double scale;
  Slope slope;

  double conditioning() const noexcept { return slope.conditioning; }
  bool cancellation_limited() const noexcept {
    return slope.cancellation_limited;
  }
};

struct ProbeConfig {
  Ladder ladder;
  double tol_conv = 1e-6;
  double tol_agree = 1e-4;
  double tol_sep = 1e-2;
  std::size_t random_frames = 8;
  std::uint64_t seed = 42;
  bool richardson = true;
  /// Trailing samples that must agree before a ladder counts as convergent.
  std::size_t window = 4;
  /// Convergent ladders required before a point is called derivable.
  std::size_t min_convergent = 2;

  void validate() const;
};

/// key=value text, one entry per line, '#' starts a comment. Unknown keys and
/// malformed values raise ConfigError. Missing keys keep their defaults.
ProbeConfig read_config(std::istream& in);
ProbeConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ProbeConfig& config);

/// A frame of the probe battery with a stable label, e.g. "axis",
/// "rotation/3" or "family(1,2)".
struct FrameDescriptor {
  std::string label;
  Frame frame;
  bool family = false;
};

enum class InconclusiveReason { NoConvergence, CancellationFloor, DomainFailure };
std::string_view to_string(InconclusiveReason r) noexcept;

struct Derivable {
  Slope estimate;
  /// Largest pairwise distance (max norm) between convergent ladder limits.
  double residual;
  std::size_t convergent;
};

struct NotDerivable {
  FrameDescriptor frame_a;
  FrameDescriptor frame_b;
  Slope limit_a;
  Slope limit_b;
  double separation;
};

struct Inconclusive {
  InconclusiveReason reason;
  std::size_t convergent;
};

using Verdict = std::variant<Derivable, NotDerivable, Inconclusive>;

std::string_view verdict_tag(const Verdict& v) noexcept;

/// Why a ladder stopped producing samples.
enum class LadderStop { Completed, Cancellation, Domain };

struct LadderRun {
  std::vector<SlopeSample> samples;
  LadderStop stop = LadderStop::Completed;
};

/// One frame's ladder and what became of it.
struct LadderOutcome {
  FrameDescriptor descriptor;
  LadderRun run;
  std::optional<Slope> limit;
  /// Meaningful only when limit is empty.
  InconclusiveReason failure = InconclusiveReason::NoConvergence;
};

struct Classification {
  Verdict verdict;
  std::vector<LadderOutcome> ladders;
};

/// Secant slopes at scales s0 * rho^j, largest first. Stops early after two
/// consecutive cancellation-limited rungs or at the first rung that cannot be
/// evaluated. Throws DomainError if the first rung fails.
std::vector<SlopeSample> slope_ladder(const ScalarField& field, const Point& p,
                                      const Frame& frame, const Ladder& ladder);

/// As slope_ladder, but never throws on evaluation failure and reports why it
/// stopped.
LadderRun run_ladder(const ScalarField& field, std::span<const double> p,
                     double fp, const Frame& frame, const Ladder& ladder);

/// The final sample's slope when the last `window` samples are pairwise within
/// tol_conv * (1 + |final|) in max norm and none is cancellation-limited.
std::optional<Slope> estimate_limit(std::span<const SlopeSample> samples,
                                    double tol_conv, std::size_t window = 4);

/// First-order Richardson extrapolation of consecutive rungs,
/// (m_{j+1} - rho m_j) / (1 - rho).
std::vector<SlopeSample> richardson(std::span<const SlopeSample> samples,
                                    double rho);

/// Limit of a ladder read at the first rung where the trailing window has
/// settled (after optional extrapolation).
std::optional<Slope> ladder_limit(std::span<const SlopeSample> samples,
                                  const ProbeConfig& config);

/// Ladder over h = lambda (1, alpha), k = lambda (1, beta).
/// Throws CollinearFrame when alpha == beta.
std::optional<Slope> parametric_family_limit(const ScalarField& field,
                                             const Point& p, double alpha,
                                             double beta, const Ladder& ladder);
std::optional<Slope> parametric_family_limit(const ScalarField& field,
                                             const Point& p, double alpha,
                                             double beta,
                                             const ProbeConfig& config);

/// Family parameters used by the battery for two-variable fields.
inline constexpr std::pair<double, double> kFamilies[] = {
    {1.0, 2.0}, {1.0, -1.0}, {2.0, 3.0}};

/// Axis frame, `random_frames` seeded random rotations of it and, for n = 2,
/// the three parametric families.
std::vector<FrameDescriptor> frame_battery(std::size_t n,
                                           const ProbeConfig& config);

/// Classifies derivability at p. Ladders run in parallel (OpenMP); the
/// verdict is aggregated in battery order and is identical to
/// classify_serial.
Classification analyze(const ScalarField& field, const Point& p,
                       const ProbeConfig& config = {});
Classification analyze_serial(const ScalarField& field, const Point& p,
                              const ProbeConfig& config = {});

inline Verdict classify(const ScalarField& field, const Point& p,
                        const ProbeConfig& config = {}) {
  return analyze(field, p, config).verdict;
}
inline Verdict classify_serial(const ScalarField& field, const Point& p,
                               const ProbeConfig& config = {}) {
  return analyze_serial(field, p, config).verdict;
}

/// Max-norm distance between two slopes of equal length.
double max_distance(std::span<const double> a, std::span<const double> b);

}  // namespace planeslope
