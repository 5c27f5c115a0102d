#include "cinf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cinf {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jx = 0; jx < cols; ++jx)
      m(i, jx) = j.at(i).at(jx).get<double>();
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void save_instance(const LowRankInstance& inst, const std::string& path) {
  json j;
  j["format"] = "cinf-instance-v1";
  j["n"] = inst.dims.n;
  j["k"] = inst.dims.k;
  j["l"] = inst.dims.l;
  j["scenario"] = to_string(inst.scenario);
  j["seed"] = inst.seed;
  json sv = json::array();
  for (Eigen::Index i = 0; i < inst.singular_values.size(); ++i)
    sv.push_back(inst.singular_values(i));
  j["singular_values"] = std::move(sv);
  j["u_basis"] = matrix_to_json(inst.u_basis);
  j["v_basis"] = matrix_to_json(inst.v_basis);
  j["u_perp"] = matrix_to_json(inst.u_perp);
  j["v_perp"] = matrix_to_json(inst.v_perp);
  j["x_sol"] = matrix_to_json(inst.x_sol);
  write_text(path, j.dump());
}

LowRankInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j = json::parse(in);
  if (j.value("format", "") != "cinf-instance-v1")
    throw std::runtime_error("unrecognized instance container: " + path);
  LowRankInstance inst;
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  inst.dims = ProblemDims{n, k, j.at("l").get<int>()};
  inst.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.singular_values = Vector(k);
  for (int i = 0; i < k; ++i)
    inst.singular_values(i) = j.at("singular_values").at(i).get<double>();
  inst.u_basis = matrix_from_json(j.at("u_basis"), n, k);
  inst.v_basis = matrix_from_json(j.at("v_basis"), n, k);
  inst.u_perp = matrix_from_json(j.at("u_perp"), n, n - k);
  inst.v_perp = matrix_from_json(j.at("v_perp"), n, n - k);
  inst.x_sol = matrix_from_json(j.at("x_sol"), n, n);
  return inst;
}

std::string certificate_json(const LowRankInstance& inst,
                             const BlockMask& mask,
                             const SpectralCertificate& cert) {
  json j;
  j["n"] = inst.dims.n;
  j["k"] = inst.dims.k;
  j["l"] = mask.l();
  j["beta"] = inst.dims.beta();
  j["eta"] = static_cast<double>(mask.l()) / mask.n();
  j["lambda_max"] = cert.lambda_max;
  j["equivalent"] = cert.equivalent;
  j["sufficient_check"] = cert.sufficient_check;
  j["marginal"] = cert.marginal;
  j["seed"] = inst.seed;
  return j.dump(2);
}

void write_pt_curve_csv(const PTCurve& curve, const std::string& path) {
  std::string text = curve.abscissa_kind + ",beta_wc,beta_ac\n";
  const bool alpha = curve.abscissa_kind == "alpha";
  for (const auto& [a, b] : curve.samples) {
    const double eta = alpha ? 1.0 - std::sqrt(1.0 - a) : a;
    text += fmt_double(a) + "," + fmt_double(beta_wc(eta)) + "," +
            fmt_double(alpha ? beta_ac_from_alpha(a) : beta_ac(eta)) + "\n";
  }
  write_text(path, text);
}

void write_grid_csv(const PTGridResult& result, int n,
                    const std::string& path) {
  std::string text = "eta,k,beta,successes,trials,fraction\n";
  for (const GridCell& c : result.cells) {
    text += fmt_double(c.eta) + "," + std::to_string(c.k) + "," +
            fmt_double(static_cast<double>(c.k) / n) + "," +
            std::to_string(c.successes) + "," + std::to_string(c.trials) +
            "," + fmt_double(static_cast<double>(c.successes) / c.trials) +
            "\n";
  }
  write_text(path, text);
}

void write_grid_summary_json(const PTGridResult& result,
                             const std::vector<double>& eta_values,
                             const std::string& path) {
  json rows = json::array();
  for (std::size_t e = 0; e < eta_values.size(); ++e) {
    json row;
    row["eta"] = eta_values[e];
    row["empirical_beta"] = result.empirical_beta[e];
    row["theory_beta"] = result.theory_beta[e];
    row["saturated"] = static_cast<bool>(result.saturated[e]);
    rows.push_back(std::move(row));
  }
  write_text(path, json{{"columns", rows}}.dump(2));
}

void write_spectrum_csv(const SpectrumReport& report,
                        const std::string& path) {
  std::string text = "x,f_theory,f_empirical\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i)
    text += fmt_double(report.grid[i]) + "," + fmt_double(report.f_theory[i]) +
            "," + fmt_double(report.f_empirical[i]) + "\n";
  write_text(path, text);
}

void write_density_csv(const std::vector<double>& grid,
                       const std::vector<double>& density,
                       const std::string& path) {
  std::string text = "x,f_theory\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    text += fmt_double(grid[i]) + "," + fmt_double(density[i]) + "\n";
  write_text(path, text);
}

void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::string& path) {
  std::string text = "iteration,feasibility_residual,nuclear_norm,relative_change\n";
  for (const TraceRow& r : trace)
    text += std::to_string(r.iteration) + "," +
            fmt_double(r.feasibility_residual) + "," +
            fmt_double(r.nuclear_norm) + "," + fmt_double(r.relative_change) +
            "\n";
  write_text(path, text);
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  json j;
  j["command"] = manifest.command;
  j["parameters"] = json::parse(manifest.parameters_json);
  j["master_seed"] = manifest.master_seed;
  j["artifacts"] = manifest.artifacts;
  j["tool_version"] = manifest.tool_version;
  j["wall_seconds"] = manifest.wall_seconds;
  j["success"] = manifest.success;
  write_text(path, j.dump(2));
}

}  // namespace cinf
