#include "cpt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cpt/coupling.hpp"
#include "cpt/errors.hpp"
#include "cpt/spectroscopy.hpp"

namespace cpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegree = std::numbers::pi / 180.0;

struct Options {
  std::string atom = "rb87";
  std::optional<std::string> excited_F;
  std::string scheme = "lin_par_lin";
  std::optional<double> pol1_angle, pol1_ellipticity, pol2_angle, pol2_ellipticity;
  std::optional<double> rabi1_hz, rabi2_hz;
  double detuning1_hz = 0.0;
  double detuning2_hz = 0.0;
  double b_gauss = 0.15;
  std::vector<double> b_list;
  std::optional<double> delta_start_hz, delta_stop_hz;
  double delta_step_hz = 100.0;
  bool doppler = false;
  std::optional<double> doppler_fwhm_hz;
  int doppler_points = 21;
  std::optional<double> gamma_dephasing_hz, gamma_ground_hz;
  double quench_hz = 0.0;
  std::optional<double> gI, gJ_ground, gJ_excited, hfs_ground_hz, hfs_excited_hz, linewidth_hz;
  std::string pair = "clock";
  std::vector<std::string> compare_schemes{"lin_par_lin:1", "sigma_sigma:2", "lin_par_lin:2"};
  std::vector<double> compare_rabi_hz;
  unsigned threads = 1;
  std::string out;
  bool comments = false;
};

HalfInt parse_half(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.front() == '+') t.erase(0, 1);
  const auto slash = t.find('/');
  int num = 0;
  int den = 1;
  auto parse_int = [&](std::string_view s, int& v) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw ConfigError("not an integer or half-integer: " + text);
    }
  };
  if (slash == std::string::npos) {
    parse_int(t, num);
  } else {
    parse_int(std::string_view(t).substr(0, slash), num);
    parse_int(std::string_view(t).substr(slash + 1), den);
  }
  if (den == 1) return HalfInt(num);
  if (den == 2) return half(num);
  throw ConfigError("not an integer or half-integer: " + text);
}

AtomSpec make_atom(const Options& o) {
  AtomSpec atom;
  try {
    atom = atom_preset(o.atom);
  } catch (const InvalidArgument&) {
    throw ConfigError("unknown atom preset: " + o.atom);
  }
  if (o.gI) atom.gI = *o.gI;
  if (o.gJ_ground) atom.gJ_ground = *o.gJ_ground;
  if (o.gJ_excited) atom.gJ_excited = *o.gJ_excited;
  if (o.hfs_ground_hz) atom.hfs_ground_hz = *o.hfs_ground_hz;
  if (o.hfs_excited_hz) atom.hfs_excited_hz = *o.hfs_excited_hz;
  if (o.linewidth_hz) atom.gamma_natural = kTwoPi * *o.linewidth_hz;
  if (o.doppler_fwhm_hz) atom.doppler_fwhm_hz = *o.doppler_fwhm_hz;
  atom.validate();
  return atom;
}

Scheme scheme_from(const std::string& name) {
  try {
    return parse_scheme(name);
  } catch (const InvalidArgument&) {
    throw ConfigError("unknown scheme: " + name);
  }
}

ScanConfig make_config(const Options& o) {
  const AtomSpec atom = make_atom(o);
  ScanConfig c = ScanConfig::defaults(atom, o.atom);
  if (o.excited_F) c.excited_F = parse_half(*o.excited_F);
  c.scheme = scheme_from(o.scheme);
  if (o.pol1_angle || o.pol1_ellipticity || o.pol2_angle || o.pol2_ellipticity) {
    c.polarizations = std::make_pair(
        polarization_from_ellipse(o.pol1_angle.value_or(0.0) * kDegree,
                                  o.pol1_ellipticity.value_or(0.0) * kDegree),
        polarization_from_ellipse(o.pol2_angle.value_or(0.0) * kDegree,
                                  o.pol2_ellipticity.value_or(0.0) * kDegree));
  }
  if (o.rabi1_hz) c.rabi1 = kTwoPi * *o.rabi1_hz;
  if (o.rabi2_hz) c.rabi2 = kTwoPi * *o.rabi2_hz;
  c.detuning1_hz = o.detuning1_hz;
  c.detuning2_hz = o.detuning2_hz;
  c.B_gauss = o.b_gauss;
  if (o.delta_start_hz) c.delta_start_hz = *o.delta_start_hz;
  if (o.delta_stop_hz) c.delta_stop_hz = *o.delta_stop_hz;
  c.delta_step_hz = o.delta_step_hz;
  c.doppler = o.doppler;
  c.doppler_points = o.doppler_points;
  if (o.gamma_dephasing_hz) c.rates.optical_dephasing = kTwoPi * *o.gamma_dephasing_hz;
  if (o.gamma_ground_hz) c.rates.ground_relaxation = kTwoPi * *o.gamma_ground_hz;
  c.rates.extra_excited_quench = kTwoPi * o.quench_hz;
  c.threads = o.threads;
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

void require_range(const Options& o) {
  if (!o.delta_start_hz || !o.delta_stop_hz) {
    throw ConfigError("delta-start-hz and delta-stop-hz are required for this command");
  }
}

std::vector<LambdaPair> pairs_from(const Options& o, const AtomSpec& atom, bool& automatic) {
  automatic = false;
  if (o.pair == "clock") return clock_pairs(atom);
  if (o.pair == "all") return all_pairs(atom);
  if (o.pair == "auto") {
    automatic = true;
    return {};
  }
  const auto colon = o.pair.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("pair must be clock, all, auto or m_lower:m_upper, got " + o.pair);
  }
  return {LambdaPair{parse_half(o.pair.substr(0, colon)), parse_half(o.pair.substr(colon + 1))}};
}

std::vector<SchemeChoice> schemes_from(const Options& o) {
  std::vector<SchemeChoice> out;
  for (const std::string& item : o.compare_schemes) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("compare-schemes entries are scheme:F_e, got " + item);
    out.push_back({scheme_from(item.substr(0, colon)), parse_half(item.substr(colon + 1))});
  }
  return out;
}

void run_levels(const Options& o, std::ostream& out) {
  const ScanConfig c = make_config(o);
  write_levels_csv(out, c.levels());
}

void run_darkstates(const Options& o, std::ostream& out) {
  const ScanConfig c = make_config(o);
  const LevelSet levels = c.levels();
  const BichromaticField field = c.field(0.0);
  bool automatic = false;
  const std::vector<LambdaPair> pairs = pairs_from(o, c.atom, automatic);
  for (const LambdaPair& p : pairs) {
    if (!levels.ground_index(c.atom.lower_ground_F(), p.m_lower) ||
        !levels.ground_index(c.atom.upper_ground_F(), p.m_upper)) {
      throw ConfigError("pair sublevel out of range: " + p.m_lower.str() + ":" + p.m_upper.str());
    }
  }
  const SchemeReport report =
      automatic ? stationary_dark_states(levels, field) : dark_state_census(levels, field, pairs);
  out << format_report(report, levels);
}

void run_scan(const Options& o, std::ostream& out) {
  require_range(o);
  write_scan_csv(out, scan(make_config(o)), o.comments);
}

void run_bscan(const Options& o, std::ostream& out) {
  require_range(o);
  const std::vector<double> list = o.b_list.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0} : o.b_list;
  write_bscan_csv(out, bfield_family(make_config(o), list), o.comments);
}

void run_compare(const Options& o, std::ostream& out) {
  require_range(o);
  const ScanConfig c = make_config(o);
  std::vector<double> rabi;
  if (o.compare_rabi_hz.empty()) {
    for (double mhz : {1.0, 1.5, 2.0, 2.5, 3.0}) rabi.push_back(kTwoPi * mhz * 1e6);
  } else {
    for (double r : o.compare_rabi_hz) rabi.push_back(kTwoPi * r);
  }
  if (o.comments) write_config_comments(out, c);
  write_compare_csv(out, compare_schemes(c, schemes_from(o), rabi));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent population trapping simulator for alkali D1 lines", "cptsim"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; keys are the long option names");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  app.add_option("--atom", o.atom, "atom preset (rb87, cs133)");
  app.add_option("--excited-F", o.excited_F, "excited hyperfine level, e.g. 1 or 3");
  app.add_option("--scheme", o.scheme, "lin_par_lin, sigma_sigma or lin_perp_lin");
  app.add_option("--pol1-angle", o.pol1_angle, "component 1 ellipse axis angle, degrees");
  app.add_option("--pol1-ellipticity", o.pol1_ellipticity, "component 1 ellipticity angle, degrees");
  app.add_option("--pol2-angle", o.pol2_angle, "component 2 ellipse axis angle, degrees");
  app.add_option("--pol2-ellipticity", o.pol2_ellipticity, "component 2 ellipticity angle, degrees");
  app.add_option("--rabi1-hz", o.rabi1_hz, "Rabi scale of component 1 (upper ground F), Hz");
  app.add_option("--rabi2-hz", o.rabi2_hz, "Rabi scale of component 2 (lower ground F), Hz");
  app.add_option("--detuning1-hz", o.detuning1_hz, "optical detuning of component 1, Hz");
  app.add_option("--detuning2-hz", o.detuning2_hz, "optical detuning of component 2, Hz");
  app.add_option("--b-gauss", o.b_gauss, "longitudinal magnetic field, G");
  app.add_option("--b-list", o.b_list, "field values for bscan, G")->delimiter(',');
  app.add_option("--delta-start-hz", o.delta_start_hz, "Raman detuning scan start, Hz");
  app.add_option("--delta-stop-hz", o.delta_stop_hz, "Raman detuning scan stop, Hz");
  app.add_option("--delta-step-hz", o.delta_step_hz, "Raman detuning scan step, Hz");
  app.add_option("--doppler", o.doppler, "average over the Doppler profile (true/false)");
  app.add_option("--doppler-fwhm-hz", o.doppler_fwhm_hz, "Doppler FWHM, Hz");
  app.add_option("--doppler-points", o.doppler_points, "Gauss-Hermite points");
  app.add_option("--gamma-dephasing-hz", o.gamma_dephasing_hz, "optical dephasing Gamma*/2pi, Hz");
  app.add_option("--gamma-ground-hz", o.gamma_ground_hz, "ground relaxation gamma_g/2pi, Hz");
  app.add_option("--quench-hz", o.quench_hz, "extra excited quench rate /2pi, Hz");
  app.add_option("--gI", o.gI, "nuclear g-factor override");
  app.add_option("--gJ-ground", o.gJ_ground, "ground gJ override");
  app.add_option("--gJ-excited", o.gJ_excited, "excited gJ override");
  app.add_option("--hfs-ground-hz", o.hfs_ground_hz, "ground hyperfine splitting override, Hz");
  app.add_option("--hfs-excited-hz", o.hfs_excited_hz, "excited hyperfine splitting override, Hz");
  app.add_option("--linewidth-hz", o.linewidth_hz, "natural linewidth Gamma/2pi override, Hz");
  app.add_option("--pair", o.pair, "darkstates pairs: clock, all, auto or m_lower:m_upper");
  app.add_option("--compare-schemes", o.compare_schemes, "scheme:F_e entries for compare")
      ->delimiter(',');
  app.add_option("--compare-rabi-hz", o.compare_rabi_hz, "Rabi scales swept by compare, Hz")
      ->delimiter(',');
  app.add_option("--threads", o.threads, "worker threads per scan");
  app.add_option("--out", o.out, "output file (default standard output)");
  app.add_flag("--comments", o.comments, "prefix CSV output with a # config echo");

  auto* levels = app.add_subcommand("levels", "list Zeeman sublevel energies as CSV");
  auto* dark = app.add_subcommand("darkstates", "dark and trap state census");
  auto* scan_cmd = app.add_subcommand("scan", "Raman detuning scan as CSV");
  auto* bscan = app.add_subcommand("bscan", "Raman scans over a list of magnetic fields");
  auto* compare = app.add_subcommand("compare", "resonance metrics across schemes and Rabi scales");
  for (CLI::App* sub : {levels, dark, scan_cmd, bscan, compare}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "cptsim: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      err << "cptsim: cannot open " << o.out << '\n';
      return 2;
    }
  }
  std::ostringstream buffer;
  try {
    if (levels->parsed()) run_levels(o, buffer);
    if (dark->parsed()) run_darkstates(o, buffer);
    if (scan_cmd->parsed()) run_scan(o, buffer);
    if (bscan->parsed()) run_bscan(o, buffer);
    if (compare->parsed()) run_compare(o, buffer);
  } catch (const ConfigError& e) {
    err << "cptsim: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "cptsim: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateInput& e) {
    err << "cptsim: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "cptsim: numerical failure: " << e.what() << '\n';
    return 3;
  }
  (o.out.empty() ? out : file) << buffer.str();
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cpt
