#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "planeslope/expr.hpp"
#include "planeslope/probe.hpp"
#include "planeslope/rules.hpp"

namespace planeslope {

struct Box {
  double x0, x1, y0, y1;
};

struct ScanCell {
  Point point;
  /// derivable | not_derivable | inconclusive | domain_error
  std::string verdict;
  std::optional<Vec> estimate;
  /// Residual for derivable cells, witness separation for not_derivable ones.
  std::optional<double> metric;
};

struct ScanResult {
  Box box;
  std::size_t resolution;
  /// Row-major: y index outer, x index inner.
  std::vector<ScanCell> cells;

  std::map<std::string, std::size_t> counts() const;
};

/// Grid coordinate i of res points spanning [lo, hi] endpoints included; a
/// single point sits at lo.
double grid_coordinate(double lo, double hi, std::size_t i, std::size_t res);

/// Classifies every cell of a res x res grid over the box. Cells are
/// evaluated in parallel; the result is identical to scan_serial.
ScanResult scan(const ScalarField& field, const Box& box, std::size_t res,
                const ProbeConfig& config = {},
                Execution exec = Execution::Parallel);
inline ScanResult scan_serial(const ScalarField& field, const Box& box,
                              std::size_t res, const ProbeConfig& config = {}) {
  return scan(field, box, res, config, Execution::Serial);
}

/// Header point_x,point_y,verdict,est_1,est_2,residual_or_separation then one
/// row per cell; absent values are empty fields.
void write_csv(std::ostream& out, const ScanResult& result);

}  // namespace planeslope
