#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teich_c.h"

namespace {

struct Config {
  std::string template_spec = "builtin:flute";
  std::vector<std::string> surfaces;
  std::string window = "0:1";
  int max_chain = 3;
  int max_wind = 1;
  std::string scenario;
  int n_max = -1;
  std::string format;
  std::string out;
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct Failure {
  int code;
  std::string what;
};

int exit_code(teich_status s) {
  switch (s) {
    case TEICH_OK: return 0;
    case TEICH_E_PARSE:
    case TEICH_E_STRUCTURE:
    case TEICH_E_LOOKUP:
    case TEICH_E_USAGE: return 2;
    default: return 1;
  }
}

void check(teich_status s) {
  if (s != TEICH_OK)
    throw Failure{exit_code(s), std::string(teich_status_name(s)) + ": " + teich_last_error()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{2, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  teich_string_free(s);
  return out;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Failure{2, "cannot write " + c.out};
  f << text;
}

std::pair<std::uint64_t, int> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const auto center = std::stoull(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    const auto rest = s.substr(colon + 1);
    const int radius = std::stoi(rest, &used);
    if (used != rest.size() || radius < 0) throw std::invalid_argument(s);
    return {center, radius};
  } catch (const std::exception&) {
    throw Failure{2, "--window expects CENTER:RADIUS, got '" + s + "'"};
  }
}

struct Template {
  teich_template* p = nullptr;
  ~Template() { teich_template_free(p); }
};

struct Surface {
  teich_surface* p = nullptr;
  ~Surface() { teich_surface_free(p); }
};

void load_template(const Config& c, Template& t) {
  const std::string prefix = "builtin:";
  if (c.template_spec.rfind(prefix, 0) == 0)
    check(teich_template_builtin(c.template_spec.substr(prefix.size()).c_str(), &t.p));
  else
    check(teich_template_from_json(slurp(c.template_spec).c_str(), &t.p));
}

void load_surface(const Template& t, const std::string& path, Surface& s) {
  check(teich_surface_from_json(t.p, slurp(path).c_str(), &s.p));
}

int cmd_surface(const Config& c) {
  if (c.surfaces.size() != 1) throw Failure{2, "surface takes exactly one --surface"};
  Template t;
  load_template(c, t);
  Surface s;
  load_surface(t, c.surfaces[0], s);
  const auto [center, radius] = parse_window(c.window);
  char* norm = nullptr;
  check(teich_surface_to_json(s.p, &norm));
  char* report = nullptr;
  const auto st = teich_surface_validate(s.p, c.n_max < 0 ? 64 : c.n_max, center, radius, &report);
  if (st != TEICH_OK && !report) check(st);
  const std::string r = take(report);
  emit(c, "{\n\"surface\": " + take(norm) + ",\n\"validation\": " + r + "\n}\n");
  if (r.find("\"diverging\": true") != std::string::npos)
    std::cerr << "warning: Shiga bound estimate keeps growing along the scan\n";
  check(st);
  return 0;
}

int cmd_metric(const Config& c) {
  if (c.surfaces.size() != 2) throw Failure{2, "metric takes exactly two --surface files (A then B)"};
  Template t;
  load_template(c, t);
  Surface a, b;
  load_surface(t, c.surfaces[0], a);
  load_surface(t, c.surfaces[1], b);
  const auto [center, radius] = parse_window(c.window);
  const std::string format = c.format.empty() ? "json" : c.format;
  char* out = nullptr;
  check(teich_metric_report(a.p, b.p, center, radius, c.max_chain, c.max_wind, c.jobs,
                            format.c_str(), &out));
  emit(c, take(out));
  return 0;
}

int cmd_scenario(const Config& c) {
  static const std::map<std::string, int> defaults{
      {"prop41", 10}, {"prop42", 20}, {"ex51", 6}, {"ex52", 6}, {"complete", 20}};
  if (c.scenario.empty()) throw Failure{2, "--scenario is required (prop41, prop42, ex51, ex52, complete)"};
  int n = c.n_max;
  if (n < 0) {
    const auto base = c.scenario.substr(0, c.scenario.find(':'));
    const auto it = defaults.find(base);
    n = it == defaults.end() ? 10 : it->second;
  }
  const std::string format = c.format.empty() ? "csv" : c.format;
  char* out = nullptr;
  check(teich_scenario_run(c.scenario.c_str(), n, format.c_str(), &out));
  emit(c, take(out));
  return 0;
}

void common(CLI::App* sub, Config& c) {
  sub->add_option("--template", c.template_spec, "template FILE or builtin:NAME");
  sub->add_option("--surface", c.surfaces, "surface JSON file (repeatable)");
  sub->add_option("--window", c.window, "window CENTER:RADIUS");
  sub->add_option("--max-chain", c.max_chain, "longest pants chain enumerated")->check(CLI::NonNegativeNumber);
  sub->add_option("--max-wind", c.max_wind, "largest winding enumerated")->check(CLI::NonNegativeNumber);
  sub->add_option("--scenario", c.scenario, "scenario name");
  sub->add_option("--n-max", c.n_max, "scenario steps, or Shiga scan length")->check(CLI::NonNegativeNumber);
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed; every computation here is deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fenchel-Nielsen coordinates, length-spectrum bounds and convergence tables"};
  app.require_subcommand(1);
  Config c;
  auto* surface = app.add_subcommand("surface", "normalize and validate a surface");
  auto* metric = app.add_subcommand("metric", "distance estimates between two surfaces");
  auto* scenario = app.add_subcommand("scenario", "run a convergence table");
  for (auto* s : {surface, metric, scenario}) common(s, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (surface->parsed()) return cmd_surface(c);
    if (metric->parsed()) return cmd_metric(c);
    return cmd_scenario(c);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what << "\n";
    return f.code;
  }
}
