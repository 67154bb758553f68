// The three operations exposed by the command-line driver, callable
// directly from tests. Each writes its artifacts under out_dir and returns
// the process exit code: 0 all claims pass, 1 at least one claim failed.
// Configuration problems are reported by throwing std::invalid_argument
// (mapped to exit code 2 by the driver).

#pragma once

#include <string>

#include "bilip/scene.hpp"

namespace bilip {

// growth.csv: sphere counts, weights, partial masses, and tail bounds per
// radius, with the growth-rate estimate in the header comments.
int cmd_enumerate(const SceneConfig& config, const std::string& out_dir);

// certificates.csv: lower-bound, sandwich, equivariance, per-generator
// bi-Lipschitz, neighborhood witnesses, translation invariance, and the
// optional direct Lipschitz adjustment.
int cmd_verify(const SceneConfig& config, const std::string& out_dir);

// mu_cdf.csv, psi_mu.csv, conjugated_<label>.csv, certificates.csv for the
// averaged-measure conjugation pipeline (circle scenes only).
int cmd_conjugate(const SceneConfig& config, const std::string& out_dir);

}  // namespace bilip
