#pragma once

#include <iostream>
#include <ostream>
#include <string>
#include <variant>

#include "CLI11.hpp"

#include "hsvd/decomposition.hpp"
#include "hsvd/error.hpp"
#include "hsvd/io.hpp"
#include "hsvd/verify.hpp"

namespace hsvd::cli {

// Process exit codes.
enum exit_code : int {
  kOk = 0,
  kCheckFailed = 1,
  kDimensionMismatch = 2,
  kParseError = 3,
  kBreakdown = 4,
  kInfeasible = 5,
  kUsage = 64,
};

inline int exit_code_for(errc code) {
  switch (code) {
    case errc::dimension_mismatch:
    case errc::signature_mismatch:
      return kDimensionMismatch;
    case errc::parse_error:
      return kParseError;
    case errc::infeasible:
    case errc::inertia_mismatch:
      return kInfeasible;
    case errc::isotropic_breakdown:
    case errc::dual_not_found:
    case errc::no_convergence:
    case errc::not_hermitian:
    case errc::not_hyperexchange:
    case errc::internal_invariant_violation:
      return kBreakdown;
  }
  return kBreakdown;
}

namespace detail {

using io::json;

struct TolFlags {
  double rank_rtol = ToleranceConfig{}.rank_rtol;
  double residual_tol = ToleranceConfig{}.residual_tol;
  double breakdown_tol = ToleranceConfig{}.breakdown_tol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rank-tol", rank_rtol, "relative threshold for rank and zero eigenvalues");
    cmd->add_option("--residual-tol", residual_tol, "acceptance threshold for factor residuals");
    cmd->add_option("--breakdown-tol", breakdown_tol, "hyperbolic orthogonalization pivot floor");
  }

  ToleranceConfig config() const {
    ToleranceConfig tol{rank_rtol, residual_tol, breakdown_tol};
    tol.validate();
    return tol;
  }
};

template <Scalar T>
json invariants_report(const Matrix<T>& b, const Signature& sig, const ToleranceConfig& tol) {
  const auto inv = compute_invariants(b, sig, tol);
  json out = io::invariants_to_json(inv);
  out["rank"] = inv.rank;
  out["eigenvalues"] = gram_eigenvalues(b, sig, tol);
  return out;
}

template <Scalar T>
int decompose(const Matrix<T>& a, const Signature& sig, bool left, const ToleranceConfig& tol,
              const std::string& out_path, std::ostream& out) {
  const HsvdFactors<T> f = left ? hsvd_left(a, sig, tol) : hsvd_right(a, sig, tol);
  io::write_factors(out_path, f);
  const double bound = tol.residual_tol * (1.0 + frobenius_norm(a)) * cond_scale(f.V);
  const bool ok = f.residual <= bound;
  json summary;
  summary["orientation"] = to_string(f.sigma.orientation);
  summary["invariants"] = io::invariants_to_json(f.sigma.invariants);
  summary["pos_values"] = f.sigma.pos_values;
  summary["neg_values"] = f.sigma.neg_values;
  summary["residual"] = f.residual;
  summary["residual_bound"] = bound;
  summary["within_tolerance"] = ok;
  summary["factors"] = out_path;
  out << summary.dump(2) << '\n';
  return ok ? kOk : kCheckFailed;
}

}  // namespace detail

/// Runs the command line. Returns the process exit code; all output goes to
/// `out` / `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Hyperbolic SVD with J-unitary factors"};
  app.require_subcommand(1);

  std::string matrix_path, factors_path, out_path, out_matrix, out_factors, side = "right";
  std::size_t p = 0, q = 0, n = 1, j = 0, l = 0, t = 0;
  std::uint64_t seed = 0;
  double rapidity = 1.0;
  bool complex_mode = false;
  detail::TolFlags tflags;

  auto* inv_cmd = app.add_subcommand("invariants", "print j, l, t, k, s, rank and eig(B^H J B)");
  inv_cmd->add_option("--matrix", matrix_path, "Matrix Market file (m x n, m = p + q)")->required();
  inv_cmd->add_option("--p", p)->required();
  inv_cmd->add_option("--q", q)->required();
  inv_cmd->add_option("--rank-tol", tflags.rank_rtol, "relative threshold for rank and zero eigenvalues");

  auto* dec_cmd = app.add_subcommand("decompose", "compute the decomposition and write a factors file");
  dec_cmd->add_option("--matrix", matrix_path)->required();
  dec_cmd->add_option("--p", p)->required();
  dec_cmd->add_option("--q", q)->required();
  dec_cmd->add_option("--side", side, "right: V^H B U = Sigma, left: A = U Sigma V^H")
      ->check(CLI::IsMember({"left", "right"}));
  dec_cmd->add_option("--out", out_path, "factors JSON output")->required();
  tflags.attach(dec_cmd);

  double verify_residual_tol = 0.0;
  auto* ver_cmd = app.add_subcommand("verify", "check a factors file against its matrix");
  ver_cmd->add_option("--matrix", matrix_path)->required();
  ver_cmd->add_option("--factors", factors_path)->required();
  ver_cmd->add_option("--residual-tol", verify_residual_tol, "override the tolerance stored in the factors file");

  auto* syn_cmd = app.add_subcommand("synth", "generate a matrix with prescribed invariants");
  syn_cmd->add_option("--p", p)->required();
  syn_cmd->add_option("--q", q)->required();
  syn_cmd->add_option("--n", n)->required();
  syn_cmd->add_option("--j", j)->required();
  syn_cmd->add_option("--l", l)->required();
  syn_cmd->add_option("--t", t)->required();
  syn_cmd->add_option("--seed", seed)->required();
  syn_cmd->add_option("--rapidity", rapidity, "cap on hyperbolic rotation rapidity");
  syn_cmd->add_flag("--complex", complex_mode, "complex scalars");
  syn_cmd->add_option("--out-matrix", out_matrix)->required();
  syn_cmd->add_option("--out-factors", out_factors)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (inv_cmd->parsed()) {
      const Signature sig(p, q);
      const auto tol = tflags.config();
      const auto a = io::read_matrix_market(matrix_path);
      const auto report = std::visit([&](const auto& b) { return detail::invariants_report(b, sig, tol); }, a);
      out << report.dump(2) << '\n';
      return kOk;
    }
    if (dec_cmd->parsed()) {
      const Signature sig(p, q);
      const auto tol = tflags.config();
      const auto a = io::read_matrix_market(matrix_path);
      return std::visit(
          [&](const auto& mat) { return detail::decompose(mat, sig, side == "left", tol, out_path, out); }, a);
    }
    if (ver_cmd->parsed()) {
      const auto a = io::read_matrix_market(matrix_path);
      const auto f = io::read_factors(factors_path);
      return std::visit(
          [&](const auto& mat, const auto& fac) -> int {
            using M = typename std::decay_t<decltype(mat)>::value_type;
            using F = typename std::decay_t<decltype(fac.U)>::value_type;
            if constexpr (!std::same_as<M, F>) {
              throw error(errc::parse_error, "matrix and factors disagree on scalar mode");
            } else {
              ToleranceConfig tol = fac.tolerances;
              if (verify_residual_tol > 0.0) tol.residual_tol = verify_residual_tol;
              const auto rep = check_factors(mat, fac.sigma.signature, fac, tol);
              out << io::report_to_json(rep).dump(2) << '\n';
              return rep.passed() ? kOk : kCheckFailed;
            }
          },
          a, f);
    }
    if (syn_cmd->parsed()) {
      const Signature sig(p, q);
      const SynthSpec spec = make_synth_spec(sig, n, j, l, t, seed, rapidity);
      auto emit = [&]<Scalar T>(std::type_identity<T>) {
        const auto sc = synth_case<T>(spec);
        io::write_matrix_market(out_matrix, sc.B);
        io::write_factors(out_factors, sc.truth);
        io::json summary;
        summary["invariants"] = io::invariants_to_json(spec.invariants);
        summary["pos_values"] = spec.pos_values;
        summary["neg_values"] = spec.neg_values;
        summary["matrix"] = out_matrix;
        summary["factors"] = out_factors;
        out << summary.dump(2) << '\n';
      };
      if (complex_mode)
        emit(std::type_identity<cplx>{});
      else
        emit(std::type_identity<double>{});
      return kOk;
    }
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace hsvd::cli
