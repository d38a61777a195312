#pragma once

#include <string>

#include <json.hpp>

#include "kf/kernelspace.hpp"
#include "kf/zoo.hpp"

namespace kf {

/// Kernel exchange format:
///   { "r": "5/2", "p": 3, "smooth": false, "coeffs": [["0", "-1/2", ...], ...] }
/// Rows are pieces, columns are powers 1..p (the power-0 column is fixed by
/// the interpolation constraint). Entries are rational strings when the
/// denominator is small, full-precision decimal strings otherwise.
nlohmann::json kernel_to_json(const PiecewiseKernel& k);
PiecewiseKernel kernel_from_json(const nlohmann::json& j);

void save_kernel(const PiecewiseKernel& k, const std::string& path);
PiecewiseKernel load_kernel(const std::string& path);

/// Kernel selectors:
///   nearest | linear | keys | keys33 | schaum | mitchell | mn
///   lanczos:R  lagrange:R  bspline:P  bstar:P[:RADIUS]  sinc:R
///   opt:K_<r>_<p>[_S]   (designed by staircasing minimization; cached)
///   file:PATH           (kernel exchange JSON)
/// "paper:" is accepted as an alias for "opt:".
Kernel1D parse_kernel_selector(const std::string& selector);

/// Spec for an "opt:"/"paper:" selector, e.g. "opt:K_5/2_3_S".
KernelSpec spec_from_selector(const std::string& selector);

}  // namespace kf
