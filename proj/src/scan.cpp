#include "planeslope/scan.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace planeslope {

namespace {

ScanCell classify_cell(const ScalarField& field, Point p,
                       const ProbeConfig& config) {
  ScanCell cell{std::move(p), {}, std::nullopt, std::nullopt};
  try {
    const Verdict v = classify_serial(field, cell.point, config);
    cell.verdict = std::string(verdict_tag(v));
    if (const auto* d = std::get_if<Derivable>(&v)) {
      cell.estimate = d->estimate.components;
      cell.metric = d->residual;
    } else if (const auto* nd = std::get_if<NotDerivable>(&v)) {
      cell.metric = nd->separation;
    }
  } catch (const DomainError&) {
    cell.verdict = "domain_error";
  }
  return cell;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::map<std::string, std::size_t> ScanResult::counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& c : cells) ++out[c.verdict];
  return out;
}

double grid_coordinate(double lo, double hi, std::size_t i, std::size_t res) {
  if (res <= 1) return lo;
  if (i + 1 == res) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(res - 1);
}

ScanResult scan(const ScalarField& field, const Box& box, std::size_t res,
                const ProbeConfig& config, Execution exec) {
  if (field.arity() != 2) throw std::invalid_argument("scan needs a two-variable field");
  if (res == 0) throw std::invalid_argument("resolution must be >= 1");
  config.validate();
  ScanResult result{box, res, std::vector<ScanCell>(res * res)};
  const auto total = static_cast<std::ptrdiff_t>(res * res);
  auto cell_at = [&](std::ptrdiff_t k) {
    const auto iy = static_cast<std::size_t>(k) / res;
    const auto ix = static_cast<std::size_t>(k) % res;
    Point p{grid_coordinate(box.x0, box.x1, ix, res),
            grid_coordinate(box.y0, box.y1, iy, res)};
    result.cells[static_cast<std::size_t>(k)] = classify_cell(field, std::move(p), config);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < total; ++k) cell_at(k);
  } else {
    for (std::ptrdiff_t k = 0; k < total; ++k) cell_at(k);
  }
  return result;
}

void write_csv(std::ostream& out, const ScanResult& result) {
  out << "point_x,point_y,verdict,est_1,est_2,residual_or_separation\n";
  for (const auto& c : result.cells) {
    out << format(c.point[0]) << ',' << format(c.point[1]) << ',' << c.verdict
        << ',';
    if (c.estimate) out << format((*c.estimate)[0]) << ',' << format((*c.estimate)[1]);
    else out << ',';
    out << ',';
    if (c.metric) out << format(*c.metric);
    out << '\n';
  }
}

}  // namespace planeslope
