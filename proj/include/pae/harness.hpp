#pragma once

// Experiment driver: phantom -> deformation -> textured image pairs -> flow
// sweep -> error tables, plots and a manifest that reproduces the run.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pae/core.hpp"
#include "pae/flow.hpp"
#include "pae/phantom.hpp"
#include "pae/wave.hpp"

namespace pae {

enum class TextureKind { none, gauss, band };

struct TextureMode {
  TextureKind kind = TextureKind::none;
  double alpha = 0.3;       // gauss
  std::uint64_t seed = 0;   // gauss; 0 derives it from the global seed
  BandSpec band{0.4, 10.0};  // band, in units of 1 / reference_length

  /// "none", "gauss-0.3", "band-0.4-10"; used in tables and file names.
  std::string label() const;
};

struct ExperimentConfig {
  Grid grid = Grid::centered(128, 128);
  SensorGeometry sensors{};
  PhantomSpec phantom{};
  DeformationSpec deformation{};
  SolverConfig solver{};
  FlowConfig flow{};
  std::vector<TextureMode> modes;
  std::vector<double> lambdas;
  /// Extra report tables for these lambdas when they are in the sweep.
  std::vector<double> headline_lambdas{12.5893, 11.2202};
  /// Band edges are divided by this length; 0 means the sensor radius.
  double reference_length = 0.0;
  std::filesystem::path output_dir = "pae_out";
  std::uint64_t seed = 1;

  double resolved_reference_length() const {
    return reference_length > 0.0 ? reference_length : sensors.radius;
  }
  std::uint64_t mode_seed(std::size_t k) const;

  /// Checks every component invariant, including that the phantom and the
  /// displacement can be built. Throws Error(config).
  void validate() const;
};

/// The default experiment: a branching tree on a 128 grid, rigid translation
/// by (1.5, 0.5) px, modes none, gauss 0.3, band 0.4 and band 1.8.
ExperimentConfig default_experiment();

/// Missing keys take the defaults of default_experiment (geometry defaults
/// follow the grid). Accepts a manifest written by run_experiment, whose
/// "config" member is used. Throws Error(config) on any schema problem.
ExperimentConfig parse_experiment(const std::string& json_text);
ExperimentConfig load_experiment(const std::filesystem::path& path);
/// Fully resolved config as JSON text; parse_experiment round-trips it.
std::string experiment_to_json(const ExperimentConfig& cfg);

struct ModeOutcome {
  TextureMode mode;
  std::string label;
  std::vector<ErrorRow> rows;  // one per lambda, sweep order
  std::size_t best = 0;        // index of the smallest AEEabs
  std::string error;           // diagnostic when the mode was aborted
  DisplacementField best_flow; // warp convention
  bool ok() const { return error.empty(); }
};

struct ExperimentResult {
  ErrorReport report;  // best-lambda row per successful mode
  std::vector<ModeOutcome> modes;
  std::vector<std::string> trace;  // pipeline log, one line per stage
  std::vector<std::filesystem::path> files;
  bool ok() const;
};

/// Runs every mode and writes the artifacts into cfg.output_dir. A failing
/// mode is recorded and the others continue.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Quiver and curve SVGs for a finished run; returns the files written.
std::vector<std::filesystem::path> emit_plots(const ExperimentConfig& cfg, const ExperimentResult& result,
                                              const DisplacementField& u0, const Image& mask);

/// "Texture Mode,AAE,AEEabs,AEErel,Warping" table.
std::string report_csv(const std::vector<ErrorRow>& rows);

}  // namespace pae
