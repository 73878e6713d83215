#pragma once

#include <string>
#include <vector>

#include "nrnet/errors.hpp"
#include "nrnet/lattice.hpp"
#include "nrnet/params.hpp"
#include "nrnet/types.hpp"

namespace nrnet {

/// a_in,j(t) = amplitude·e^{−iΔωt}·δ_{j,drive_site}, rotating frame.
struct DriveSpec {
  int drive_site = 0;  ///< 0-based
  Complex amplitude = 1.0;
  double detuning = 0.0;
};

struct TimeSeries {
  std::vector<double> times;
  CMatrix amplitudes;  ///< N × T
  CMatrix outputs;     ///< N × T, a_out = a_in + √κ·a
  DriveSpec drive;
  double io_rate = 0.0;
};

class UnstableError : public ParameterError {
 public:
  UnstableError(const std::string& what, StabilityReport report) : ParameterError(what), report_(report) {}
  [[nodiscard]] const StabilityReport& report() const noexcept { return report_; }

 private:
  StabilityReport report_;
};

/// 0.1 / (|μ0| + Γ·min(ζ, N)).
double max_stable_step(const NetworkParams& params);

/// Fixed-step RK4 for ẋ = H x − √κ a_in(t) from x(0) = 0, H being the dynamic
/// matrix at zero detuning; the drive detuning comes from `drive`. Every
/// `stride`-th step is stored, plus the last one.
TimeSeries integrate(const NetworkParams& params, const DriveSpec& drive, double t_max, double dt, int stride = 1);

/// Closed-form trajectory X e^{−iΔωt} − e^{Ht} X with X = (H + iΔω)⁻¹ √κ a_in.
CVector analytic_trajectory(const NetworkParams& params, const DriveSpec& drive, double t);

/// a_out,probe / a_in,drive averaged over the last 10% of stored samples, once
/// it differs from the preceding window by at most 1e-8 relative. Throws
/// ConvergenceError otherwise.
Complex steady_state_gain(const TimeSeries& series, int probe_site);

/// t, then re_k, im_k of the amplitude for every site k = 1..N.
std::string time_series_csv(const TimeSeries& series);

}  // namespace nrnet
