#include "nrnet/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "nrnet/errors.hpp"

namespace nrnet {

namespace {

constexpr double kInfiniteRangeFactor = 1e6;

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

}  // namespace

void NetworkParams::validate() const {
  require(n_cavities >= 2, "n must be at least 2 (got " + std::to_string(n_cavities) + ")");
  require(std::isfinite(coupling_rate) && coupling_rate >= 0.0, "Gamma must be finite and non-negative");
  require(std::isfinite(io_rate) && io_rate > 0.0, "kappa must be finite and positive");
  require(std::isfinite(pump_rate), "gamma_pump must be finite");
  require(!std::isnan(coherence_length) && coherence_length > 0.0, "zeta must be positive");
  require(std::isfinite(detuning), "delta_omega must be finite");
  require(std::isfinite(phase_per_site), "phi must be finite");
}

bool NetworkParams::infinite_range() const {
  return std::isinf(coherence_length) || coherence_length >= kInfiniteRangeFactor * n_cavities;
}

double NetworkParams::coupling_decay(int separation) const {
  if (std::isinf(coherence_length)) return 1.0;
  const double value = std::exp(-separation / coherence_length);
  return std::max(value, std::numeric_limits<double>::min());
}

NetworkParams NetworkParams::with_pump(double gamma) const {
  NetworkParams p = *this;
  p.pump_rate = gamma;
  return p;
}

NetworkParams NetworkParams::with_size(int n) const {
  NetworkParams p = *this;
  p.n_cavities = n;
  return p;
}

NetworkParams NetworkParams::with_detuning(double delta) const {
  NetworkParams p = *this;
  p.detuning = delta;
  return p;
}

Complex coupling_coefficient(const NetworkParams& p, int separation) {
  if (separation == 0) {
    return {(p.pump_rate - p.io_rate - p.coupling_rate) / 2.0, p.detuning};
  }
  return -p.coupling_rate * p.coupling_decay(separation) *
         std::polar(1.0, p.phase_per_site * separation);
}

double unity_prefactor_io_rate(double coupling_rate, double coherence_length) {
  const double r = std::isinf(coherence_length) ? 1.0 : std::exp(-1.0 / coherence_length);
  return coupling_rate * r / ((1.0 + r) * (1.0 + r));
}

void to_json(nlohmann::json& j, const NetworkParams& p) {
  j = nlohmann::json{{"n", p.n_cavities},
                     {"gamma_pump", p.pump_rate},
                     {"kappa", p.io_rate},
                     {"Gamma", p.coupling_rate},
                     {"delta_omega", p.detuning},
                     {"phi", p.phase_per_site}};
  if (std::isinf(p.coherence_length)) {
    j["zeta"] = "inf";
  } else {
    j["zeta"] = p.coherence_length;
  }
}

void from_json(const nlohmann::json& j, NetworkParams& p) {
  if (!j.is_object()) throw ParameterError("parameter record must be a JSON object");
  static const std::set<std::string> known{"n", "gamma_pump", "kappa", "Gamma", "zeta", "delta_omega", "phi"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParameterError("unknown parameter key '" + key + "'");
  }
  auto number = [&](const char* key, bool required, double fallback) -> double {
    if (!j.contains(key)) {
      if (required) throw ParameterError(std::string("missing parameter key '") + key + "'");
      return fallback;
    }
    const auto& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    throw ParameterError(std::string("parameter '") + key + "' must be a number");
  };
  NetworkParams out;
  const double n = number("n", true, 0);
  if (n != std::floor(n)) throw ParameterError("n must be an integer");
  out.n_cavities = static_cast<int>(n);
  out.pump_rate = number("gamma_pump", true, 0);
  out.io_rate = number("kappa", true, 0);
  out.coupling_rate = number("Gamma", true, 0);
  out.coherence_length = number("zeta", true, 0);
  out.detuning = number("delta_omega", false, 0.0);
  out.phase_per_site = number("phi", false, 0.0);
  out.validate();
  p = out;
}

NetworkParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("malformed parameter file " + path.string() + ": " + e.what());
  }
  return j.get<NetworkParams>();
}

}  // namespace nrnet
