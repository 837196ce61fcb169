#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvqec/postselect.hpp"

// Experiment runner: the deterministic fidelity table and the filtration
// sweeps over (erasure probability, squeezing), emitted as CSV. Rows are
// computed with a parallel map over grid cells and assembled in grid order,
// so output is deterministic for a fixed seed.

namespace cvqec {

double db_to_r(double squeeze_db);    // e^{-2r} = 10^{-dB/10}
double db_to_e2r(double squeeze_db);  // 10^{-dB/10}

/// Locale-independent formatting with 9 significant digits.
std::string format_number(double value);

/// Grid syntax: "a:b:step" (inclusive endpoints within step/2) or a
/// comma-separated list.
std::vector<double> parse_grid(const std::string& text);

struct SweepSpec {
  double alpha_re = 2.8284271247461903;  // (4+4i)/sqrt(2)
  double alpha_im = 2.8284271247461903;
  std::vector<double> squeeze_db_list{0.0, 3.0, 6.0};
  std::vector<double> pe_grid;  // defaults to 0:0.5:0.025
  bool window_auto = true;      // x_th = p_th = e^{-r}
  double x_th = 1.0;            // fixed window, used when !window_auto
  double p_th = 1.0;
  double eta_hd = 0.9;
  double n_e = 0.0;
  std::string engine = "analytic";  // analytic | mc | both
  long mc_samples = 100000;
  std::uint64_t seed = 1;
  std::string output_path;  // empty writes to stdout

  SweepSpec();

  void validate() const;  // throws std::invalid_argument on a bad spec
  /// Single-line rendering of every resolved field, for the CSV header.
  std::string describe() const;
};

struct FilterRow {
  double pe = 0.0;
  double squeeze_db = 0.0;
  double x_th = 0.0;
  double p_th = 0.0;
  double eta_hd = 0.0;
  double n_e = 0.0;
  std::string engine;
  double fidelity_out1 = 0.0;
  double fidelity_out1_se = 0.0;
  double success_prob = 0.0;
  double success_prob_se = 0.0;
  double direct_fidelity = 0.0;
};

/// One row per (pe, dB, engine), pe outermost, analytic before mc.
std::vector<FilterRow> run_filter_sweep(const SweepSpec& spec);

void write_filter_csv(const SweepSpec& spec, const std::vector<FilterRow>& rows,
                      std::ostream& out);

struct DeterministicRow {
  double squeeze_db = 0.0;
  std::string erased;  // "none", "A", "B", "C", "D"
  double fidelity_out1 = 0.0;
  double fidelity_out2 = 0.0;
  double fidelity_reference = 0.0;  // 1/(1+e^{-2r}) for the erased side
};

/// Deterministic decoder table with ideal detection, coherent input 1 and
/// vacuum input 2.
std::vector<DeterministicRow> run_deterministic_table(const std::vector<double>& squeeze_db_list,
                                                      double alpha_re, double alpha_im,
                                                      const std::vector<std::string>& locations);

void write_deterministic_csv(const std::vector<DeterministicRow>& rows, std::ostream& out);

/// Parallel map with deterministic per-index output slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace cvqec
