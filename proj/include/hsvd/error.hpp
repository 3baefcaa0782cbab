#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsvd {

enum class errc {
  dimension_mismatch,
  not_hermitian,
  no_convergence,
  isotropic_breakdown,
  dual_not_found,
  inertia_mismatch,
  not_hyperexchange,
  signature_mismatch,
  infeasible,
  internal_invariant_violation,
  parse_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_hermitian: return "NotHermitian";
    case errc::no_convergence: return "NoConvergence";
    case errc::isotropic_breakdown: return "IsotropicBreakdown";
    case errc::dual_not_found: return "DualNotFound";
    case errc::inertia_mismatch: return "InertiaMismatch";
    case errc::not_hyperexchange: return "NotHyperexchange";
    case errc::signature_mismatch: return "SignatureMismatch";
    case errc::infeasible: return "Infeasible";
    case errc::internal_invariant_violation: return "InternalInvariantViolation";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() names the
// failure class, what() carries "<Name>: <detail>".
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  errc code_;
};

}  // namespace hsvd
