#include "stairloc/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stairloc/disorder.hpp"
#include "stairloc/errors.hpp"

#ifndef STAIRLOC_VERSION
#define STAIRLOC_VERSION "dev"
#endif

namespace stairloc::harness {
namespace {

std::string points_text(const std::vector<LatticePoint>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += "; ";
    for (int j = 0; j < points[i].dim(); ++j) {
      if (j) out += ",";
      out += std::to_string(points[i][j]);
    }
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add(const std::vector<Cell>& row) {
  if (row.size() != header_.size()) throw Error(ErrorKind::kDomain, "csv row width does not match header");
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) line += format_double(v);
          else if constexpr (std::is_same_v<T, std::string>) line += csv_escape(v);
          else if constexpr (std::is_same_v<T, bool>) line += v ? "1" : "0";
          else line += std::to_string(v);
        },
        row[i]);
  }
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    out += r;
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kConfig, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::kConfig, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

Json to_json(const BinomialEstimate& e) {
  return Json{{"successes", e.successes}, {"trials", e.trials}, {"p", e.p}, {"lo", e.lo}, {"hi", e.hi}};
}

Json to_json(const std::vector<ValidationItem>& items) {
  Json out = Json::array();
  for (const auto& v : items) out.push_back(Json{{"check", v.name}, {"ok", v.ok}, {"detail", v.detail}});
  return out;
}

Json to_json(const ExperimentSpec& s) {
  Json j;
  j["kind"] = s.kind;
  j["seed"] = s.seed;
  j["trials"] = s.trials;
  j["override_constraints"] = s.override_constraints;
  j["model"] = {{"dim", s.staircase.dim},
                {"particles", s.particles},
                {"kappa", s.staircase.kappa},
                {"decay", s.staircase.decay},
                {"coupling", s.coupling},
                {"interaction_strength", s.interaction.strength},
                {"interaction_range", s.interaction.range}};
  j["disorder"] = s.distribution_text;
  j["geometry"] = {{"radius", s.radius},
                   {"tau", s.tau},
                   {"centers", points_text(s.centers)},
                   {"centers2", points_text(s.centers2)},
                   {"cutoff", s.cutoff},
                   {"tail_tol", s.tail_tol},
                   {"separation_factor", s.separation_factor}};
  j["grids"] = {{"t", s.t_grid}, {"eps", s.eps_grid}, {"energy", s.energy_grid}, {"lambda", s.lambda_grid},
                {"v", s.v_grid}};
  if (s.kind == "charfn") {
    j["charfn"] = {{"source", s.shell_source}, {"c", s.shell_c},         {"first", s.shell_first},
                   {"last", s.shell_last},     {"max_shell", s.max_shell}, {"window_decades", s.window_decades},
                   {"t_max", s.t_max},         {"samples", s.samples},     {"budget", s.budget}};
  }
  if (s.kind == "wegner") j["wegner"] = {{"exact", s.exact}, {"budget", s.budget}};
  if (s.kind == "msa" || s.kind == "validate") {
    const auto& c = s.schedule;
    j["schedule"] = {{"L0", c.L0}, {"alpha", c.alpha}, {"tau", c.tau}, {"m", c.m}, {"b", c.b},
                     {"gamma", c.gamma}, {"K", c.K}, {"S", c.S}, {"k_max", c.k_max}};
    j["msa"] = {{"energy", s.msa_energy}, {"stride", s.stride}, {"stability_trials", s.stability_trials},
                {"outside_shell", s.outside_shell}, {"separation", s.separation}};
  }
  if (s.kind == "ils") j["ils"] = {{"L0", s.ils_L0}, {"theta", s.theta}};
  if (s.kind == "localize")
    j["localize"] = {{"states", s.states}, {"mass_radius", s.mass_radius}, {"correlator_max", s.correlator_max}};
  return j;
}

Json summary_json(const ExperimentSpec& spec, const RunReport& report) {
  Json j;
  j["experiment"] = report.kind;
  j["version"] = STAIRLOC_VERSION;
  j["hash"] = kSiteHashId;
  j["spec"] = to_json(spec);
  j["validation"] = to_json(report.validation);
  j["csv"] = {{"file", report.kind + ".csv"}, {"columns", report.table.header()}, {"rows", report.table.rows()}};
  j["aggregates"] = report.aggregates;
  return j;
}

void write_report(const ExperimentSpec& spec, const RunReport& report) {
  namespace fs = std::filesystem;
  const fs::path dir(spec.out);
  write_atomic((dir / (report.kind + ".csv")).string(), report.table.str());
  for (const auto& [name, table] : report.extra)
    write_atomic((dir / (report.kind + "_" + name + ".csv")).string(), table.str());
  write_atomic((dir / (report.kind + "_summary.json")).string(), summary_json(spec, report).dump(2) + "\n");
  Json timing{{"wall_seconds", report.wall_seconds}, {"threads", spec.threads}};
  write_atomic((dir / (report.kind + "_timing.json")).string(), timing.dump(2) + "\n");
}

}  // namespace stairloc::harness
