#pragma once

#include <string>

// Static SVG rendering of a filtration sweep: fidelity and success
// probability versus erasure probability, one series per squeezing value
// plus the dashed direct-transmission reference.

namespace cvqec {

/// Render the two-panel figure from CSV text produced by the filter sweep.
/// Throws std::invalid_argument if the CSV has no data rows or lacks the
/// expected columns. Output bytes depend only on the input text.
std::string render_filter_svg(const std::string& csv_text);

}  // namespace cvqec
