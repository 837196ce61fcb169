#include "cvqec/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace cvqec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::optional<Mode> parse_location(const std::string& text) {
  if (text == "none") return std::nullopt;
  if (text.size() == 1 && text[0] >= 'A' && text[0] <= 'D') {
    return static_cast<Mode>(text[0] - 'A');
  }
  throw std::invalid_argument("unknown erasure location: " + text);
}

}  // namespace

double db_to_r(double squeeze_db) { return squeeze_db * std::log(10.0) / 20.0; }

double db_to_e2r(double squeeze_db) { return std::pow(10.0, -squeeze_db / 10.0); }

std::string format_number(double value) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_grid(const std::string& text) {
  auto parse_double = [](const std::string& tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("bad number in grid: " + tok);
    }
    return v;
  };

  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("grid range needs start:stop:step");
    const double start = parse_double(text.substr(0, c1));
    const double stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(text.substr(c2 + 1));
    if (step <= 0.0) throw std::invalid_argument("grid step must be positive");
    const int count = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string::npos ? text.size() : comma;
    if (end > pos) out.push_back(parse_double(text.substr(pos, end - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

SweepSpec::SweepSpec() : pe_grid(parse_grid("0:0.5:0.025")) {}

void SweepSpec::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (pe_grid.empty()) fail("pe grid must be nonempty");
  for (double pe : pe_grid) {
    if (pe < 0.0 || pe > 1.0) fail("pe grid values must lie in [0,1]");
  }
  if (squeeze_db_list.empty()) fail("squeeze dB list must be nonempty");
  for (double db : squeeze_db_list) {
    if (db < 0.0) fail("squeeze dB values must be >= 0");
  }
  if (!(eta_hd > 0.0 && eta_hd <= 1.0)) fail("eta_hd must be in (0,1]");
  if (n_e < 0.0) fail("n_e must be >= 0");
  if (!window_auto && (x_th <= 0.0 || p_th <= 0.0)) fail("fixed window bounds must be positive");
  if (engine != "analytic" && engine != "mc" && engine != "both") {
    fail("engine must be analytic, mc, or both");
  }
  if ((engine == "mc" || engine == "both") && mc_samples < 1) fail("mc_samples must be >= 1");
}

std::string SweepSpec::describe() const {
  std::string s = "alpha_re=" + format_number(alpha_re) + " alpha_im=" + format_number(alpha_im);
  s += " db=";
  for (std::size_t i = 0; i < squeeze_db_list.size(); ++i) {
    if (i) s += ',';
    s += format_number(squeeze_db_list[i]);
  }
  s += " pe=";
  for (std::size_t i = 0; i < pe_grid.size(); ++i) {
    if (i) s += ',';
    s += format_number(pe_grid[i]);
  }
  s += window_auto ? " window=auto"
                   : " window=" + format_number(x_th) + ":" + format_number(p_th);
  s += " eta_hd=" + format_number(eta_hd);
  s += " n_e=" + format_number(n_e);
  s += " engine=" + engine;
  s += " mc_samples=" + std::to_string(mc_samples);
  s += " seed=" + std::to_string(seed);
  s += " out=" + (output_path.empty() ? std::string("-") : output_path);
  return s;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const unsigned workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          failed = true;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed) throw std::runtime_error("a sweep cell failed");
}

std::vector<FilterRow> run_filter_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto in1 = coherent(spec.alpha_re, spec.alpha_im);
  const auto in2 = vacuum(1);
  const double direct_base = overlap_fidelity(in1, in2);

  const bool run_analytic = spec.engine == "analytic" || spec.engine == "both";
  const bool run_mc = spec.engine == "mc" || spec.engine == "both";
  const std::size_t n_pe = spec.pe_grid.size();
  const std::size_t n_db = spec.squeeze_db_list.size();
  const std::size_t per_cell = (run_analytic ? 1 : 0) + (run_mc ? 1 : 0);

  std::vector<FilterRow> rows(n_pe * n_db * per_cell);
  parallel_for(n_pe * n_db, [&](std::size_t cell) {
    const std::size_t pe_i = cell / n_db;
    const std::size_t db_i = cell % n_db;
    const double pe = spec.pe_grid[pe_i];
    const double db = spec.squeeze_db_list[db_i];

    CodecConfig cfg;
    cfg.squeeze_r = db_to_r(db);
    cfg.eta_hd = spec.eta_hd;
    cfg.n_e = spec.n_e;
    ThresholdWindow window;
    if (spec.window_auto) {
      window.x_th = window.p_th = std::exp(-cfg.squeeze_r);
    } else {
      window.x_th = spec.x_th;
      window.p_th = spec.p_th;
    }

    FilterRow base;
    base.pe = pe;
    base.squeeze_db = db;
    base.x_th = window.x_th;
    base.p_th = window.p_th;
    base.eta_hd = spec.eta_hd;
    base.n_e = spec.n_e;
    base.direct_fidelity = (1.0 - pe) + pe * direct_base;

    std::size_t slot = cell * per_cell;
    if (run_analytic) {
      const auto res = filter_analytic(in1, in2, pe, cfg, window);
      FilterRow row = base;
      row.engine = "analytic";
      row.fidelity_out1 = res.fidelity_out1;
      row.success_prob = res.success_prob;
      rows[slot++] = std::move(row);
    }
    if (run_mc) {
      const auto res = filter_monte_carlo(in1, in2, pe, cfg, window, spec.mc_samples,
                                          splitmix64(spec.seed ^ (cell + 1)));
      FilterRow row = base;
      row.engine = "mc";
      row.fidelity_out1 = res.fidelity_out1;
      row.fidelity_out1_se = res.fidelity_out1_se;
      row.success_prob = res.success_prob;
      row.success_prob_se = res.success_prob_se;
      rows[slot++] = std::move(row);
    }
  });
  return rows;
}

void write_filter_csv(const SweepSpec& spec, const std::vector<FilterRow>& rows,
                      std::ostream& out) {
  out << "# spec: " << spec.describe() << "\n";
  out << "pe,squeeze_db,x_th,p_th,eta_hd,n_e,engine,fidelity_out1,fidelity_out1_se,"
         "success_prob,success_prob_se,direct_fidelity\n";
  for (const auto& r : rows) {
    out << format_number(r.pe) << ',' << format_number(r.squeeze_db) << ','
        << format_number(r.x_th) << ',' << format_number(r.p_th) << ','
        << format_number(r.eta_hd) << ',' << format_number(r.n_e) << ',' << r.engine << ','
        << format_number(r.fidelity_out1) << ',' << format_number(r.fidelity_out1_se) << ','
        << format_number(r.success_prob) << ',' << format_number(r.success_prob_se) << ','
        << format_number(r.direct_fidelity) << '\n';
  }
}

std::vector<DeterministicRow> run_deterministic_table(const std::vector<double>& squeeze_db_list,
                                                      double alpha_re, double alpha_im,
                                                      const std::vector<std::string>& locations) {
  const auto in1 = coherent(alpha_re, alpha_im);
  const auto in2 = vacuum(1);
  std::vector<DeterministicRow> rows;
  rows.reserve(squeeze_db_list.size() * locations.size());
  for (double db : squeeze_db_list) {
    if (db < 0.0) throw std::invalid_argument("squeeze dB values must be >= 0");
    CodecConfig cfg;
    cfg.squeeze_r = db_to_r(db);
    const auto encoded = encode(in1, in2, cfg.squeeze_r);
    for (const auto& loc : locations) {
      const auto erased = parse_location(loc);
      ErasurePattern pattern;
      if (erased) pattern.mask = static_cast<std::uint8_t>(1u << static_cast<int>(*erased));
      const auto decoded = decode_deterministic(erase_modes(encoded, pattern), erased, cfg);
      DeterministicRow row;
      row.squeeze_db = db;
      row.erased = loc;
      row.fidelity_out1 = overlap_fidelity(in1, decoded.out1());
      row.fidelity_out2 = overlap_fidelity(in2, decoded.out2());
      row.fidelity_reference = erased ? 1.0 / (1.0 + db_to_e2r(db)) : 1.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_deterministic_csv(const std::vector<DeterministicRow>& rows, std::ostream& out) {
  out << "squeeze_db,erased,fidelity_out1,fidelity_out2,fidelity_reference\n";
  for (const auto& r : rows) {
    out << format_number(r.squeeze_db) << ',' << r.erased << ','
        << format_number(r.fidelity_out1) << ',' << format_number(r.fidelity_out2) << ','
        << format_number(r.fidelity_reference) << '\n';
  }
}

}  // namespace cvqec
