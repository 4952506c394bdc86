#pragma once

#include <stdexcept>
#include <string>

namespace ckgeo {

// Every recoverable failure in the toolkit carries one of these codes so
// callers (in particular the per-point classifier pipeline) can branch on
// the reason without parsing messages.
enum class errc {
  nonsymmetric,
  no_partner,
  degenerate_subspace,
  out_of_domain,
  tangent_degenerate,
  normal_degenerate,
  not_conformal,
  nonsymmetric_alpha,
  not_flat,
  nullity_too_large,
  bad_signature,
  odd_s,
  inconsistent_spec,
  metric_mismatch,
  frame_degenerate,
  no_delta,
  unclassified_point,
  bad_codim,
  bad_params,
  domain_violation,
  unknown_suite,
  unknown_example,
  generation_failed,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace ckgeo
