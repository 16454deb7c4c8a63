// planeslope: secant-plane slopes, derivability probes, gradient oracle,
// calculus-rule checks and grid scans from the command line.
//
// Exit codes: 0 success, 1 usage/parse/config/IO error, 2 collinear frame or
// field undefined, 3 a rule check failed.

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "planeslope/autodiff.hpp"
#include "planeslope/errors.hpp"
#include "planeslope/expr.hpp"
#include "planeslope/probe.hpp"
#include "planeslope/report.hpp"
#include "planeslope/rules.hpp"
#include "planeslope/scan.hpp"
#include "planeslope/secantplane.hpp"

namespace {

using namespace planeslope;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kExitUsage = 1;
constexpr int kExitMath = 2;
constexpr int kExitRules = 3;

Vec parse_csv(const std::string& text, const std::string& what) {
  Vec out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty() && item.front() == '+') item.erase(item.begin());
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError("invalid number '" + item + "' in " + what);
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

ScalarField make_field(const std::string& fn, std::size_t arity,
                       const std::vector<std::string>& overrides) {
  ScalarField field(fn, arity);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos)
      throw UsageError("override must look like \"x,y=v\": '" + o + "'");
    Vec key = parse_csv(o.substr(0, eq), "--override point");
    Vec value = parse_csv(o.substr(eq + 1), "--override value");
    if (key.size() != arity || value.size() != 1)
      throw UsageError("override '" + o + "' does not match the field arity");
    field.add_override(Point(std::move(key)), value.front());
  }
  return field;
}

ProbeConfig make_config(const std::string& path, const std::uint64_t* seed) {
  ProbeConfig config = path.empty() ? ProbeConfig{} : load_config(path);
  if (seed) config.seed = *seed;
  config.validate();
  return config;
}

void emit(const nlohmann::json& doc) { std::cout << doc.dump() << '\n'; }

// Runs a command body and maps library errors onto exit codes.
template <class Body>
int guarded(Body body) {
  try {
    return body();
  } catch (const CollinearFrame& e) {
    std::cerr << "error: CollinearFrame: " << e.what() << '\n';
    return kExitMath;
  } catch (const ZeroDirection& e) {
    std::cerr << "error: ZeroDirection: " << e.what() << '\n';
    return kExitMath;
  } catch (const OverridePointError& e) {
    std::cerr << "error: OverridePointError: " << e.what() << '\n';
    return kExitMath;
  } catch (const DomainError& e) {
    std::cerr << "error: DomainError: " << e.what() << '\n';
    return kExitMath;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secant-plane derivative toolkit"};
  app.require_subcommand(1);

  std::string fn, at, h, k, dirs, config_path, out_path, box_text;
  std::vector<std::string> overrides;
  std::uint64_t seed = 42;
  std::size_t trials = 50, res = 0;
  bool json_flag = false;

  auto* slope = app.add_subcommand("slope", "secant-plane slope at a point");
  slope->set_help_flag("--help", "print this help message and exit");
  slope->add_option("--fn", fn, "field expression")->required();
  slope->add_option("--at", at, "base point, comma separated")->required();
  slope->add_option("--h", h, "first direction (two-variable fields)");
  slope->add_option("--k", k, "second direction (two-variable fields)");
  slope->add_option("--dirs", dirs, "directions separated by ';'");
  slope->add_option("--override", overrides, "point value, \"x,y=v\"");

  auto* probe = app.add_subcommand("probe", "classify derivability at a point");
  probe->add_option("--fn", fn, "field expression")->required();
  probe->add_option("--at", at, "point, comma separated")->required();
  probe->add_option("--override", overrides, "point value, \"x,y=v\"");
  probe->add_option("--config", config_path, "key=value probe config file");
  auto* probe_seed = probe->add_option("--seed", seed, "random frame seed");
  probe->add_flag("--json", json_flag, "emit JSON (the default)");

  auto* gradc = app.add_subcommand("grad", "exact gradient by dual numbers");
  gradc->add_option("--fn", fn, "field expression")->required();
  gradc->add_option("--at", at, "point, comma separated")->required();
  gradc->add_option("--override", overrides, "point value, \"x,y=v\"");

  auto* rules = app.add_subcommand("rules", "check the calculus rules");
  rules->add_option("--seed", seed, "sampling seed");
  rules->add_option("--trials", trials, "trials per rule")
      ->check(CLI::PositiveNumber);

  auto* scanc = app.add_subcommand("scan", "classify a grid of points to CSV");
  scanc->add_option("--fn", fn, "field expression")->required();
  scanc->add_option("--box", box_text, "x0,x1,y0,y1")->required();
  scanc->add_option("--res", res, "points per axis")
      ->required()
      ->check(CLI::PositiveNumber);
  scanc->add_option("--out", out_path, "CSV output path")->required();
  scanc->add_option("--override", overrides, "point value, \"x,y=v\"");
  scanc->add_option("--config", config_path, "key=value probe config file");
  auto* scan_seed = scanc->add_option("--seed", seed, "random frame seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (slope->parsed()) {
    return guarded([&] {
      const Vec p = parse_csv(at, "--at");
      std::vector<Vec> rows;
      if (!dirs.empty()) {
        std::size_t start = 0;
        for (;;) {
          const auto semi = dirs.find(';', start);
          rows.push_back(parse_csv(dirs.substr(start, semi == std::string::npos
                                                          ? std::string::npos
                                                          : semi - start),
                                   "--dirs"));
          if (semi == std::string::npos) break;
          start = semi + 1;
        }
      } else if (!h.empty() && !k.empty()) {
        rows = {parse_csv(h, "--h"), parse_csv(k, "--k")};
      } else {
        throw UsageError("give --h and --k, or --dirs");
      }
      const ScalarField field = make_field(fn, p.size(), overrides);
      const Frame frame(std::move(rows));
      emit(slope_document(secant_slope(field, p, frame)));
      return 0;
    });
  }

  if (probe->parsed()) {
    return guarded([&] {
      const Point p(parse_csv(at, "--at"));
      const ScalarField field = make_field(fn, p.size(), overrides);
      const ProbeConfig config =
          make_config(config_path, probe_seed->count() ? &seed : nullptr);
      emit(probe_document(p, analyze(field, p, config), config));
      return 0;
    });
  }

  if (gradc->parsed()) {
    return guarded([&] {
      const Vec p = parse_csv(at, "--at");
      const ScalarField field = make_field(fn, p.size(), overrides);
      emit(grad_document(grad(field, p)));
      return 0;
    });
  }

  if (rules->parsed()) {
    return guarded([&] {
      const auto reports = run_rule_suite(trials, seed);
      const auto doc = rules_document(reports);
      emit(doc);
      return doc["passed"].get<bool>() ? 0 : kExitRules;
    });
  }

  if (scanc->parsed()) {
    return guarded([&] {
      const Vec b = parse_csv(box_text, "--box");
      if (b.size() != 4) throw UsageError("--box needs x0,x1,y0,y1");
      const ScalarField field = make_field(fn, 2, overrides);
      const ProbeConfig config =
          make_config(config_path, scan_seed->count() ? &seed : nullptr);
      std::ofstream out(out_path);
      if (!out) throw UsageError("cannot open '" + out_path + "' for writing");
      const ScanResult result = scan(field, {b[0], b[1], b[2], b[3]}, res, config);
      write_csv(out, result);
      out.close();
      if (!out) throw UsageError("failed writing '" + out_path + "'");
      nlohmann::json counts = nlohmann::json::object();
      for (const auto& [tag, n] : result.counts()) counts[tag] = n;
      emit({{"schema", kSchema},
            {"cells", result.cells.size()},
            {"counts", counts},
            {"out", out_path}});
      return 0;
    });
  }
  return kExitUsage;
}
