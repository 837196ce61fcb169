#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvqec/svg.hpp"
#include "cvqec/sweep.hpp"
#include "cvqec/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadSpec = 2;

int write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return kExitBadSpec;
  }
  out << content;
  return kExitOk;
}

int run_deterministic(const std::string& db_text, double alpha_re, double alpha_im,
                      const std::string& erased_text, const std::string& out_path) {
  std::vector<std::string> locations;
  std::size_t pos = 0;
  while (pos <= erased_text.size()) {
    const auto comma = erased_text.find(',', pos);
    const auto end = comma == std::string::npos ? erased_text.size() : comma;
    if (end > pos) locations.push_back(erased_text.substr(pos, end - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  const auto rows = cvqec::run_deterministic_table(cvqec::parse_grid(db_text), alpha_re,
                                                   alpha_im, locations);
  std::ostringstream csv;
  cvqec::write_deterministic_csv(rows, csv);
  return write_output(out_path, csv.str());
}

int run_filter(const cvqec::SweepSpec& spec) {
  const auto rows = cvqec::run_filter_sweep(spec);
  std::ostringstream csv;
  cvqec::write_filter_csv(spec, rows, csv);
  return write_output(spec.output_path, csv.str());
}

int run_verify(std::uint64_t seed, long mc_samples) {
  const auto groups = cvqec::run_verification(seed, mc_samples);
  for (const auto& g : groups) {
    std::cout << (g.passed ? "PASS " : "FAIL ") << g.name << " (" << g.detail << ")\n";
  }
  return cvqec::all_passed(groups) ? kExitOk : kExitVerifyFailed;
}

int run_plot(const std::string& csv_path, const std::string& out_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open CSV file: " << csv_path << "\n";
    return kExitBadSpec;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string svg = cvqec::render_filter_svg(buffer.str());
  return write_output(out_path, svg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-variable erasure code simulator"};
  app.require_subcommand(1);

  // deterministic
  auto* det = app.add_subcommand(
      "deterministic", "Fidelity table of the feedforward decoder, ideal detection");
  std::string det_db = "0,3,6";
  double det_alpha_re = 2.8284271247461903;
  double det_alpha_im = 2.8284271247461903;
  std::string det_erased = "none,A,B,C,D";
  std::string det_out;
  det->add_option("--db", det_db, "squeezing list in dB");
  det->add_option("--alpha-re", det_alpha_re, "input amplitude, real part");
  det->add_option("--alpha-im", det_alpha_im, "input amplitude, imaginary part");
  det->add_option("--erased", det_erased, "erasure locations (none,A,B,C,D)");
  det->add_option("--out", det_out, "output CSV path (default stdout)");

  // filter
  auto* filter = app.add_subcommand("filter", "Postselected erasure-filtration sweep");
  cvqec::SweepSpec spec;
  std::string filter_db = "0,3,6";
  std::string filter_pe = "0:0.5:0.025";
  std::string filter_window = "auto";
  filter->set_config("--config", "", "config file with key=value lines");
  filter->add_option("--alpha-re", spec.alpha_re, "input amplitude, real part");
  filter->add_option("--alpha-im", spec.alpha_im, "input amplitude, imaginary part");
  filter->add_option("--db", filter_db, "squeezing list in dB");
  filter->add_option("--pe-grid", filter_pe, "erasure probabilities, list or start:stop:step");
  filter->add_option("--window", filter_window, "auto (e^{-r}) or fixed x_th:p_th");
  filter->add_option("--eta-hd", spec.eta_hd, "homodyne efficiency");
  filter->add_option("--n-e", spec.n_e, "electronic noise, shot-noise units");
  filter->add_option("--engine", spec.engine, "analytic, mc, or both");
  filter->add_option("--mc-samples", spec.mc_samples, "Monte Carlo samples per grid cell");
  filter->add_option("--seed", spec.seed, "base RNG seed");
  filter->add_option("--out", spec.output_path, "output CSV path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant self-check suite");
  std::uint64_t verify_seed = 12345;
  long verify_samples = 20000;
  verify->add_option("--seed", verify_seed, "RNG seed");
  verify->add_option("--mc-samples", verify_samples, "samples for the engine cross-check");

  // plot
  auto* plot = app.add_subcommand("plot", "Render a filter sweep CSV as a static SVG");
  std::string plot_csv;
  std::string plot_out;
  plot->add_option("--csv", plot_csv, "input CSV from the filter subcommand")->required();
  plot->add_option("--out", plot_out, "output SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadSpec;
  }

  try {
    if (det->parsed()) {
      return run_deterministic(det_db, det_alpha_re, det_alpha_im, det_erased, det_out);
    }
    if (filter->parsed()) {
      spec.squeeze_db_list = cvqec::parse_grid(filter_db);
      spec.pe_grid = cvqec::parse_grid(filter_pe);
      if (filter_window == "auto") {
        spec.window_auto = true;
      } else {
        spec.window_auto = false;
        const auto colon = filter_window.find(':');
        if (colon == std::string::npos) {
          throw std::invalid_argument("window must be 'auto' or 'x_th:p_th'");
        }
        spec.x_th = std::stod(filter_window.substr(0, colon));
        spec.p_th = std::stod(filter_window.substr(colon + 1));
      }
      spec.validate();
      return run_filter(spec);
    }
    if (verify->parsed()) return run_verify(verify_seed, verify_samples);
    if (plot->parsed()) return run_plot(plot_csv, plot_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}
