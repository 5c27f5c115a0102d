#pragma once

#include <string>
#include <vector>

#include "cinf/equivalence.hpp"
#include "cinf/instances.hpp"
#include "cinf/montecarlo.hpp"
#include "cinf/phase.hpp"

namespace cinf {

/// JSON container; doubles are written with shortest round-trip formatting,
/// so load(save(x)) reproduces every entry bit for bit.
void save_instance(const LowRankInstance& inst, const std::string& path);
LowRankInstance load_instance(const std::string& path);

std::string certificate_json(const LowRankInstance& inst,
                             const BlockMask& mask,
                             const SpectralCertificate& cert);

void write_pt_curve_csv(const PTCurve& curve, const std::string& path);
void write_grid_csv(const PTGridResult& result, int n,
                    const std::string& path);
void write_grid_summary_json(const PTGridResult& result,
                             const std::vector<double>& eta_values,
                             const std::string& path);
void write_spectrum_csv(const SpectrumReport& report, const std::string& path);
void write_density_csv(const std::vector<double>& grid,
                       const std::vector<double>& density,
                       const std::string& path);
void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::string& path);

/// One manifest per CLI invocation: command, parameters, seed, artifacts,
/// duration. Emitted even on partial failure.
struct RunManifest {
  std::string command;
  std::string parameters_json;  // full flag record
  std::uint64_t master_seed = 0;
  std::vector<std::string> artifacts;
  std::string tool_version;
  double wall_seconds = 0.0;
  bool success = true;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace cinf
