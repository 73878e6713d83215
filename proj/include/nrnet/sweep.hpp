#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nrnet/params.hpp"

namespace nrnet {

struct SweepAxis {
  std::string name;  ///< a parameter key: n, gamma_pump, kappa, Gamma, zeta, delta_omega, phi
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log_spaced = false;

  [[nodiscard]] std::vector<double> values() const;
};

/// Parses "name:min:max:count" with an optional ":log" suffix.
SweepAxis parse_axis(const std::string& text);

enum class Quantity { gain, winding, lambda_min, zero_mode, stability, threshold_curves };
enum class Phase { attenuation, amplification, unstable };

Quantity parse_quantity(const std::string& name);
std::string quantity_name(Quantity q);
std::string phase_name(Phase p);

struct SweepGrid {
  SweepAxis axis1;
  SweepAxis axis2;
  NetworkParams fixed;
  std::set<Quantity> quantities{Quantity::gain};
  /// κ = Γe^{−1/ζ}/(1+e^{−1/ζ})² in every cell, overriding any κ value.
  bool kappa_from_zeta = false;
  int out_site = -1;  ///< 0-based; −1 means the last site
  int in_site = 0;

  void validate() const;
};

struct OverlayCurve {
  std::string name;
  std::vector<std::pair<double, double>> points;  ///< (axis1, axis2)
};

/// Cell (i1, i2) lives at index i2·count1 + i1. Missing values mark cells
/// where the quantity was not defined (singular matrix, gap closing, ...).
struct PhaseDiagram {
  SweepGrid grid;
  std::vector<double> axis1_values;
  std::vector<double> axis2_values;
  std::vector<Phase> phase;
  std::vector<std::string> field_names;  ///< in emission order
  std::vector<std::vector<std::optional<double>>> fields;
  std::vector<OverlayCurve> overlays;

  [[nodiscard]] std::size_t cell_count() const { return phase.size(); }
  [[nodiscard]] const std::vector<std::optional<double>>* field(const std::string& name) const;
};

/// Parameters of one cell, with the κ rule applied.
NetworkParams cell_params(const SweepGrid& grid, double v1, double v2);

/// Evaluates every cell on a pool of `threads` workers. Results do not depend
/// on the thread count.
PhaseDiagram run_sweep(const SweepGrid& grid, int threads = 1);

}  // namespace nrnet
