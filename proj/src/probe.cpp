#include "planeslope/probe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "planeslope/detail/random.hpp"
#include "planeslope/errors.hpp"

namespace planeslope {

// ---------------------------------------------------------------------------
// Configuration

void Ladder::validate() const {
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw ConfigError("s0 must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (levels < 4) throw ConfigError("levels must be >= 4");
}

double Ladder::scale(std::size_t j) const {
  return s0 * std::pow(rho, static_cast<double>(j));
}

void ProbeConfig::validate() const {
  ladder.validate();
  if (!(tol_conv > 0.0)) throw ConfigError("tol_conv must be > 0");
  if (!(tol_agree > 0.0)) throw ConfigError("tol_agree must be > 0");
  if (!(tol_sep >= tol_agree))
    throw ConfigError("tol_sep must not be smaller than tol_agree");
  if (window < 2) throw ConfigError("window must be >= 2");
  if (min_convergent < 1) throw ConfigError("min_convergent must be >= 1");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("invalid value for '" + std::string(key) + "': '" +
                      std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': '" +
                    std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ProbeConfig read_config(std::istream& in) {
  ProbeConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value");
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    if (key == "s0")
      cfg.ladder.s0 = parse_number<double>(key, value);
    else if (key == "rho")
      cfg.ladder.rho = parse_number<double>(key, value);
    else if (key == "levels")
      cfg.ladder.levels = parse_number<std::size_t>(key, value);
    else if (key == "tol_conv")
      cfg.tol_conv = parse_number<double>(key, value);
    else if (key == "tol_agree")
      cfg.tol_agree = parse_number<double>(key, value);
    else if (key == "tol_sep")
      cfg.tol_sep = parse_number<double>(key, value);
    else if (key == "random_frames")
      cfg.random_frames = parse_number<std::size_t>(key, value);
    else if (key == "seed")
      cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "richardson")
      cfg.richardson = parse_bool(key, value);
    else if (key == "window")
      cfg.window = parse_number<std::size_t>(key, value);
    else if (key == "min_convergent")
      cfg.min_convergent = parse_number<std::size_t>(key, value);
    else
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        std::string(key) + "'");
  }
  cfg.validate();
  return cfg;
}

ProbeConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return read_config(in);
}

void write_config(std::ostream& out, const ProbeConfig& c) {
  out << "s0=" << format_double(c.ladder.s0) << '\n'
      << "rho=" << format_double(c.ladder.rho) << '\n'
      << "levels=" << c.ladder.levels << '\n'
      << "tol_conv=" << format_double(c.tol_conv) << '\n'
      << "tol_agree=" << format_double(c.tol_agree) << '\n'
      << "tol_sep=" << format_double(c.tol_sep) << '\n'
      << "random_frames=" << c.random_frames << '\n'
      << "seed=" << c.seed << '\n'
      << "richardson=" << (c.richardson ? "true" : "false") << '\n'
      << "window=" << c.window << '\n'
      << "min_convergent=" << c.min_convergent << '\n';
}

std::string_view to_string(InconclusiveReason r) noexcept {
  switch (r) {
    case InconclusiveReason::NoConvergence:
      return "no_convergence";
    case InconclusiveReason::CancellationFloor:
      return "cancellation_floor";
    case InconclusiveReason::DomainFailure:
      return "domain_failure";
  }
  return "?";
}

std::string_view verdict_tag(const Verdict& v) noexcept {
  switch (v.index()) {
    case 0:
      return "derivable";
    case 1:
      return "not_derivable";
    default:
      return "inconclusive";
  }
}

double max_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("slopes of different length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// ---------------------------------------------------------------------------
// Ladders

LadderRun run_ladder(const ScalarField& field, std::span<const double> p,
                     double fp, const Frame& frame, const Ladder& ladder) {
  ladder.validate();
  LadderRun run;
  std::size_t flagged_in_a_row = 0;
  for (std::size_t j = 0; j < ladder.levels; ++j) {
    const double s = ladder.scale(j);
    Slope slope;
    try {
      slope = secant_slope(field, p, fp, frame.scaled(s));
    } catch (const DomainError&) {
      run.stop = LadderStop::Domain;
      return run;
    } catch (const ZeroDirection&) {
      // the scaled step vanished against the coordinates of p
      run.stop = LadderStop::Cancellation;
      return run;
    }
    flagged_in_a_row = slope.cancellation_limited ? flagged_in_a_row + 1 : 0;
    run.samples.push_back({s, std::move(slope)});
    if (flagged_in_a_row >= 2) {
      run.stop = LadderStop::Cancellation;
      return run;
    }
  }
  return run;
}

std::vector<SlopeSample> slope_ladder(const ScalarField& field, const Point& p,
                                      const Frame& frame, const Ladder& ladder) {
  if (frame.dim() != field.arity() || p.size() != field.arity())
    throw std::invalid_argument("frame and point must match the field arity");
  const double fp = eval(field, p);
  LadderRun run = run_ladder(field, p.view(), fp, frame, ladder);
  if (run.samples.empty() && run.stop == LadderStop::Domain)
    throw DomainError("first rung of the ladder is not evaluable");
  return std::move(run.samples);
}

std::optional<Slope> estimate_limit(std::span<const SlopeSample> samples,
                                    double tol_conv, std::size_t window) {
  if (window < 2 || samples.size() < window) return std::nullopt;
  const auto tail = samples.last(window);
  const Slope& last = tail.back().slope;
  double magnitude = 0.0;
  for (double c : last.components) magnitude = std::max(magnitude, std::abs(c));
  const double tol = tol_conv * (1.0 + magnitude);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (tail[i].slope.cancellation_limited) return std::nullopt;
    for (std::size_t j = i + 1; j < tail.size(); ++j)
      if (max_distance(tail[i].slope.components, tail[j].slope.components) > tol)
        return std::nullopt;
  }
  return last;
}

std::vector<SlopeSample> richardson(std::span<const SlopeSample> samples,
                                    double rho) {
  std::vector<SlopeSample> out;
  if (samples.size() < 2) return out;
  out.reserve(samples.size() - 1);
  for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
    const Slope& coarse = samples[j].slope;
    const Slope& fine = samples[j + 1].slope;
    Slope r = fine;
    for (std::size_t i = 0; i < r.components.size(); ++i)
      r.components[i] =
          (fine.components[i] - rho * coarse.components[i]) / (1.0 - rho);
    r.conditioning = std::min(coarse.conditioning, fine.conditioning);
    r.cancellation_limited =
        coarse.cancellation_limited || fine.cancellation_limited;
    r.conditioning_warning =
        coarse.conditioning_warning || fine.conditioning_warning;
    out.push_back({samples[j + 1].scale, std::move(r)});
  }
  return out;
}

std::optional<Slope> ladder_limit(std::span<const SlopeSample> samples,
                                  const ProbeConfig& config) {
  std::vector<SlopeSample> extrapolated;
  std::span<const SlopeSample> seq = samples;
  if (config.richardson) {
    extrapolated = richardson(samples, config.ladder.rho);
    seq = extrapolated;
  }
  for (std::size_t k = config.window; k <= seq.size(); ++k)
    if (auto limit = estimate_limit(seq.first(k), config.tol_conv, config.window))
      return limit;
  return std::nullopt;
}

namespace {

Frame family_frame(double alpha, double beta) {
  if (alpha == beta)
    throw CollinearFrame("parametric family needs alpha != beta");
  return Frame({{1.0, alpha}, {1.0, beta}});
}

std::string family_label(double alpha, double beta) {
  std::ostringstream os;
  os << "family(" << alpha << ',' << beta << ')';
  return os.str();
}

}  // namespace

std::optional<Slope> parametric_family_limit(const ScalarField& field,
                                             const Point& p, double alpha,
                                             double beta,
                                             const ProbeConfig& config) {
  const Frame frame = family_frame(alpha, beta);
  config.validate();
  const auto samples = slope_ladder(field, p, frame, config.ladder);
  return ladder_limit(samples, config);
}

std::optional<Slope> parametric_family_limit(const ScalarField& field,
                                             const Point& p, double alpha,
                                             double beta, const Ladder& ladder) {
  ProbeConfig config;
  config.ladder = ladder;
  return parametric_family_limit(field, p, alpha, beta, config);
}

// ---------------------------------------------------------------------------
// Frame battery

namespace {

using detail::gaussian;
using detail::uniform01;

// Rows of a random orthogonal matrix by Gram-Schmidt on Gaussian rows.
std::vector<Vec> random_rotation(std::size_t n, std::mt19937_64& rng) {
  if (n == 1) return {{uniform01(rng) < 0.5 ? -1.0 : 1.0}};
  if (n == 2) {
    const double t = 2.0 * std::numbers::pi * uniform01(rng);
    return {{std::cos(t), std::sin(t)}, {-std::sin(t), std::cos(t)}};
  }
  for (;;) {
    std::vector<Vec> rows(n, Vec(n));
    for (auto& r : rows)
      for (auto& x : r) x = gaussian(rng);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t k = 0; k < i; ++k) {
        double dot = 0.0;
        for (std::size_t c = 0; c < n; ++c) dot += rows[i][c] * rows[k][c];
        for (std::size_t c = 0; c < n; ++c) rows[i][c] -= dot * rows[k][c];
      }
      double len = 0.0;
      for (double x : rows[i]) len += x * x;
      len = std::sqrt(len);
      if (len < 1e-8) {
        ok = false;
        break;
      }
      for (double& x : rows[i]) x /= len;
    }
    if (ok) return rows;
  }
}

}  // namespace

std::vector<FrameDescriptor> frame_battery(std::size_t n,
                                           const ProbeConfig& config) {
  std::vector<FrameDescriptor> out;
  std::vector<Vec> axis(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) axis[i][i] = 1.0;
  out.push_back({"axis", Frame(std::move(axis)), false});

  std::mt19937_64 rng(config.seed);
  for (std::size_t f = 0; f < config.random_frames; ++f)
    out.push_back({"rotation/" + std::to_string(f + 1),
                   Frame(random_rotation(n, rng)), false});

  if (n == 2)
    for (const auto& [alpha, beta] : kFamilies)
      out.push_back({family_label(alpha, beta), family_frame(alpha, beta), true});
  return out;
}

// ---------------------------------------------------------------------------
// Classification

namespace {

LadderOutcome run_outcome(const ScalarField& field, const Point& p, double fp,
                          const FrameDescriptor& descriptor,
                          const ProbeConfig& config) {
  LadderOutcome out{descriptor, {}, std::nullopt,
                    InconclusiveReason::NoConvergence};
  try {
    out.run = run_ladder(field, p.view(), fp, descriptor.frame, config.ladder);
  } catch (const CollinearFrame&) {
    out.run.stop = LadderStop::Completed;
  }
  out.limit = ladder_limit(out.run.samples, config);
  if (out.limit) return out;

  bool flagged = out.run.stop == LadderStop::Cancellation;
  for (const auto& s : out.run.samples) flagged = flagged || s.cancellation_limited();
  if (out.run.stop == LadderStop::Domain)
    out.failure = InconclusiveReason::DomainFailure;
  else if (flagged)
    out.failure = InconclusiveReason::CancellationFloor;
  return out;
}

Verdict aggregate(const std::vector<LadderOutcome>& ladders,
                  const ProbeConfig& config) {
  std::vector<std::size_t> convergent;
  for (std::size_t i = 0; i < ladders.size(); ++i)
    if (ladders[i].limit) convergent.push_back(i);

  auto limit_of = [&](std::size_t i) -> const Vec& {
    return ladders[i].limit->components;
  };

  if (convergent.size() >= config.min_convergent) {
    double spread = 0.0;
    for (std::size_t a = 0; a < convergent.size(); ++a)
      for (std::size_t b = a + 1; b < convergent.size(); ++b)
        spread = std::max(spread,
                          max_distance(limit_of(convergent[a]), limit_of(convergent[b])));
    if (spread <= config.tol_agree) {
      Slope estimate = *ladders[convergent.front()].limit;
      std::fill(estimate.components.begin(), estimate.components.end(), 0.0);
      estimate.cancellation_limited = false;
      estimate.conditioning_warning = false;
      for (std::size_t i : convergent) {
        const Slope& l = *ladders[i].limit;
        for (std::size_t c = 0; c < l.size(); ++c) estimate.components[c] += l[c];
        estimate.conditioning = std::min(estimate.conditioning, l.conditioning);
      }
      for (double& c : estimate.components)
        c /= static_cast<double>(convergent.size());
      return Derivable{std::move(estimate), spread, convergent.size()};
    }
  }

  // Witnesses: prefer a separated pair of parametric-family ladders, otherwise
  // the first separated pair in battery order.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  for (int pass = 0; pass < 2 && !witness; ++pass) {
    for (std::size_t a = 0; a < convergent.size() && !witness; ++a) {
      for (std::size_t b = a + 1; b < convergent.size() && !witness; ++b) {
        const auto ia = convergent[a], ib = convergent[b];
        if (pass == 0 && !(ladders[ia].descriptor.family &&
                           ladders[ib].descriptor.family))
          continue;
        if (max_distance(limit_of(ia), limit_of(ib)) > config.tol_sep)
          witness = std::make_pair(ia, ib);
      }
    }
  }
  if (witness) {
    const auto& a = ladders[witness->first];
    const auto& b = ladders[witness->second];
    return NotDerivable{a.descriptor, b.descriptor, *a.limit, *b.limit,
                        max_distance(a.limit->components, b.limit->components)};
  }

  if (convergent.size() >= config.min_convergent)
    return Inconclusive{InconclusiveReason::NoConvergence, convergent.size()};

  std::size_t counts[3] = {0, 0, 0};
  for (const auto& l : ladders)
    if (!l.limit) ++counts[static_cast<int>(l.failure)];
  const auto dominant = static_cast<InconclusiveReason>(
      std::max_element(std::begin(counts), std::end(counts)) - std::begin(counts));
  return Inconclusive{dominant, convergent.size()};
}

template <class RunAll>
Classification classify_with(const ScalarField& field, const Point& p,
                             const ProbeConfig& config, RunAll run_all) {
  config.validate();
  if (p.size() != field.arity())
    throw std::invalid_argument("point dimension does not match field arity");
  const double fp = eval(field, p);
  const auto battery = frame_battery(field.arity(), config);
  std::vector<LadderOutcome> ladders = run_all(battery, fp);

  bool any_rung = false;
  for (const auto& l : ladders) any_rung = any_rung || !l.run.samples.empty();
  if (!any_rung)
    throw DomainError("no ladder could be evaluated on its first rung");

  Verdict verdict = aggregate(ladders, config);
  return {std::move(verdict), std::move(ladders)};
}

}  // namespace

Classification analyze_serial(const ScalarField& field, const Point& p,
                              const ProbeConfig& config) {
  return classify_with(field, p, config,
                       [&](const std::vector<FrameDescriptor>& battery, double fp) {
                         std::vector<LadderOutcome> out;
                         out.reserve(battery.size());
                         for (const auto& d : battery)
                           out.push_back(run_outcome(field, p, fp, d, config));
                         return out;
                       });
}

Classification analyze(const ScalarField& field, const Point& p,
                       const ProbeConfig& config) {
  return classify_with(
      field, p, config,
      [&](const std::vector<FrameDescriptor>& battery, double fp) {
        std::vector<std::optional<LadderOutcome>> slots(battery.size());
        std::vector<std::exception_ptr> errors(battery.size());
        const auto count = static_cast<std::ptrdiff_t>(battery.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
          try {
            slots[i] = run_outcome(field, p, fp, battery[i], config);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
        for (const auto& e : errors)
          if (e) std::rethrow_exception(e);
        std::vector<LadderOutcome> out;
        out.reserve(slots.size());
        for (auto& s : slots) out.push_back(std::move(*s));
        return out;
      });
}

}  // namespace planeslope
