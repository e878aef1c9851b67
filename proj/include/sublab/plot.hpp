#pragma once

#include <string>

namespace sublab::harness {

/// Renders a static SVG from an experiment CSV.
///
/// kind "cdf-overlay": raw sample dump (replica,level,...) -> empirical CDF of
/// the undershoot ratios (path id "ecdf") overlaid on the Beta(alpha,1-alpha)
/// CDF (path id "theory"); alpha comes from the `# alpha=` preamble line.
///
/// kind "ratio-vs-s": verifier CSV -> ratio-to-target against log10(s)
/// (path id "ratio-points") with a reference line at ratio 1 (id "reference").
///
/// Unknown kind, schema mismatch, missing alpha, or an empty data section
/// throw FormatError.
void emit_plot(const std::string& csv_path, const std::string& kind,
               const std::string& out_path);

}  // namespace sublab::harness
