#include "cpt/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "cpt/errors.hpp"

namespace cpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double parabolic_vertex(const std::vector<double>& x, const std::vector<double>& s, std::size_t i) {
  if (i == 0 || i + 1 >= x.size()) return x[i];
  const double y0 = s[i - 1];
  const double y1 = s[i];
  const double y2 = s[i + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return x[i];
  const double t = 0.5 * (y0 - y2) / denom;
  const double h = t < 0.0 ? x[i] - x[i - 1] : x[i + 1] - x[i];
  return x[i] + t * h;
}

double crossing(double xa, double ya, double xb, double yb, double level) {
  if (yb == ya) return 0.5 * (xa + xb);
  return xa + (level - ya) * (xb - xa) / (yb - ya);
}

}  // namespace

double default_rabi() { return kTwoPi * 1.0e6; }

ScanConfig ScanConfig::defaults() { return defaults(rb87(), "rb87"); }

ScanConfig ScanConfig::defaults(const AtomSpec& atom, std::string name) {
  ScanConfig c;
  c.atom_name = std::move(name);
  c.atom = atom;
  c.excited_F = atom.nuclear_spin - half(1);
  c.rabi1 = default_rabi();
  c.rabi2 = default_rabi();
  c.doppler_fwhm_hz = atom.doppler_fwhm_hz;
  c.rates = RateSet::defaults(atom);
  return c;
}

void ScanConfig::validate() const {
  atom.validate();
  rates.validate();
  if (excited_F != atom.nuclear_spin - half(1) && excited_F != atom.nuclear_spin + half(1)) {
    throw InvalidArgument("excited F must be I - 1/2 or I + 1/2");
  }
  if (!(delta_start_hz < delta_stop_hz)) throw InvalidArgument("scan start must be below scan stop");
  if (!(delta_step_hz > 0.0)) throw InvalidArgument("scan step must be positive");
  if (rabi1 < 0.0 || rabi2 < 0.0) throw InvalidArgument("Rabi scales must be non-negative");
  if (B_gauss < 0.0) throw InvalidArgument("magnetic field must be non-negative");
  if (doppler && (doppler_fwhm_hz < 0.0 || doppler_points < 1)) {
    throw InvalidArgument("Doppler width must be >= 0 with at least one point");
  }
}

LevelSet ScanConfig::levels() const { return build_level_set(atom, excited_F, B_gauss); }

BichromaticField ScanConfig::field(double raman_detuning) const {
  BichromaticField f = preset(scheme, rabi1, rabi2, raman_detuning, atom);
  if (polarizations) {
    f.component1.polarization = polarizations->first;
    f.component2.polarization = polarizations->second;
  }
  f.component1.optical_detuning = detuning1_hz;
  f.component2.optical_detuning = detuning2_hz;
  return f;
}

std::vector<double> ScanConfig::raman_grid() const {
  const double span = delta_stop_hz - delta_start_hz;
  const auto steps = static_cast<std::size_t>(std::floor(span / delta_step_hz + 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    grid.push_back(delta_start_hz + static_cast<double>(k) * delta_step_hz);
  }
  return grid;
}

double absorption_at(const LindbladModel& model, const ScanConfig& config, double raman_hz) {
  auto at_shift = [&](double shift) {
    return absorption(steady_state(model.generator(raman_hz, shift)), model.levels());
  };
  if (!config.doppler) return at_shift(0.0);
  return doppler_average(at_shift, config.doppler_fwhm_hz, config.doppler_points);
}

Lineshape scan(const ScanConfig& config) {
  config.validate();
  const LevelSet levels = config.levels();
  const LindbladModel model(levels, config.field(0.0), config.rates);

  Lineshape ls;
  ls.config = config;
  ls.raman_hz = config.raman_grid();
  ls.absorption.assign(ls.raman_hz.size(), 0.0);

  const std::size_t n = ls.raman_hz.size();
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, std::max<std::size_t>(n, 1));
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;

  auto work = [&](std::size_t first) {
    for (std::size_t k = first; k < n; k += workers) {
      try {
        ls.absorption[k] = absorption_at(model, config, ls.raman_hz[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (k < error_index) {
          error_index = k;
          error = std::current_exception();
        }
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }

  if (error) {
    const std::string where = " at delta_R = " + format_number(ls.raman_hz[error_index]) + " Hz";
    try {
      std::rethrow_exception(error);
    } catch (const NonUniqueSteadyState& e) {
      throw NonUniqueSteadyState(e.what() + where);
    } catch (const SingularityError& e) {
      throw SingularityError(e.what() + where);
    } catch (const NumericalError& e) {
      throw NumericalError(e.what() + where);
    }
  }
  return ls;
}

ResonanceMetrics extract_metrics(const Lineshape& ls) { return extract_metrics(ls.raman_hz, ls.absorption); }

ResonanceMetrics extract_metrics(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("sample arrays differ in length");
  const std::size_t n = x.size();
  if (n < 20) throw InvalidArgument("metrics need at least 20 samples");

  const std::size_t edge = std::max<std::size_t>(1, (n + 19) / 20);
  std::vector<double> outer(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(edge));
  outer.insert(outer.end(), y.end() - static_cast<std::ptrdiff_t>(edge), y.end());

  ResonanceMetrics m;
  m.background = median(outer);

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = m.background - y[i];
  const auto top = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
  const double amplitude = s[top];
  if (!(amplitude > 1e-12 * std::abs(m.background)) || amplitude <= 0.0) {
    ResonanceMetrics none;
    none.no_resonance = true;
    return none;
  }
  m.amplitude = amplitude;

  const double half_level = 0.5 * amplitude;
  double left = x.front();
  for (std::size_t i = top; i > 0; --i) {
    if (s[i - 1] < half_level) {
      left = crossing(x[i - 1], s[i - 1], x[i], s[i], half_level);
      break;
    }
  }
  double right = x.back();
  for (std::size_t i = top; i + 1 < n; ++i) {
    if (s[i + 1] < half_level) {
      right = crossing(x[i], s[i], x[i + 1], s[i + 1], half_level);
      break;
    }
  }
  m.fwhm = right - left;
  m.center = 0.5 * (left + right);
  m.contrast = m.background > 0.0 ? amplitude / m.background : 0.0;
  m.amp_to_width = m.fwhm > 0.0 ? amplitude / m.fwhm : 0.0;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
    double left_min = s[i];
    for (std::size_t j = i; j > 0; --j) {
      if (s[j - 1] > s[i]) break;
      left_min = std::min(left_min, s[j - 1]);
    }
    double right_min = s[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s[j] > s[i]) break;
      right_min = std::min(right_min, s[j]);
    }
    const double prominence = s[i] - std::max(left_min, right_min);
    if (prominence > 0.05 * amplitude) m.peaks.push_back(parabolic_vertex(x, s, i));
  }
  m.n_peaks = m.peaks.size();
  return m;
}

std::vector<FamilyMember> bfield_family(const ScanConfig& config, const std::vector<double>& B_list) {
  std::vector<FamilyMember> family;
  for (double B : B_list) {
    if (B < 0.0) throw InvalidArgument("magnetic field values must be non-negative");
    ScanConfig c = config;
    c.B_gauss = B;
    FamilyMember member;
    member.B_gauss = B;
    member.lineshape = scan(c);
    member.metrics = extract_metrics(member.lineshape);
    if (member.metrics.n_peaks >= 2) {
      member.peak_separation = member.metrics.peaks.back() - member.metrics.peaks.front();
    }
    family.push_back(std::move(member));
  }
  return family;
}

std::vector<ComparisonRow> compare_schemes(const ScanConfig& base,
                                           const std::vector<SchemeChoice>& schemes,
                                           const std::vector<double>& rabi_values) {
  if (schemes.size() < 2) throw InvalidArgument("comparison needs at least two schemes");
  std::vector<ComparisonRow> rows;
  for (const SchemeChoice& choice : schemes) {
    for (double rabi : rabi_values) {
      ScanConfig c = base;
      c.scheme = choice.scheme;
      c.polarizations.reset();
      c.excited_F = choice.excited_F;
      c.rabi1 = rabi;
      c.rabi2 = rabi;
      rows.push_back({choice, rabi, extract_metrics(scan(c))});
    }
  }
  return rows;
}

std::vector<double> one_photon_spectrum(const AtomSpec& atom, const std::vector<double>& laser_hz,
                                        double rabi, const RateSet& rates, double doppler_fwhm_hz,
                                        int doppler_points) {
  struct Branch {
    HalfInt F;
    double offset;
    LindbladModel model;
  };
  std::vector<Branch> branches;
  for (HalfInt F : {atom.nuclear_spin - half(1), atom.nuclear_spin + half(1)}) {
    const LevelSet levels = build_level_set(atom, F, 0.0);
    BichromaticField f = preset(Scheme::lin_par_lin, rabi, 0.0, 0.0, atom);
    branches.push_back({F, excited_hyperfine_offset(atom, F), LindbladModel(levels, f, rates)});
  }
  std::vector<double> out;
  out.reserve(laser_hz.size());
  for (double nu : laser_hz) {
    double total = 0.0;
    for (const Branch& b : branches) {
      // detuning1 = nu - offset enters the frame as -detuning1, i.e. as a
      // shift of +(offset - nu).
      auto spectrum = [&](double shift) {
        return absorption(steady_state(b.model.generator(0.0, shift + b.offset - nu)),
                          b.model.levels());
      };
      total += doppler_average(spectrum, doppler_fwhm_hz, doppler_points);
    }
    out.push_back(total);
  }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_config_comments(std::ostream& out, const ScanConfig& c) {
  out << "# atom = " << c.atom_name << '\n'
      << "# excited-F = " << c.excited_F.str() << '\n'
      << "# scheme = " << scheme_name(c.scheme) << '\n'
      << "# rabi1-hz = " << format_number(c.rabi1 / kTwoPi) << '\n'
      << "# rabi2-hz = " << format_number(c.rabi2 / kTwoPi) << '\n'
      << "# detuning1-hz = " << format_number(c.detuning1_hz) << '\n'
      << "# detuning2-hz = " << format_number(c.detuning2_hz) << '\n'
      << "# b-gauss = " << format_number(c.B_gauss) << '\n'
      << "# delta-start-hz = " << format_number(c.delta_start_hz) << '\n'
      << "# delta-stop-hz = " << format_number(c.delta_stop_hz) << '\n'
      << "# delta-step-hz = " << format_number(c.delta_step_hz) << '\n'
      << "# doppler = " << (c.doppler ? "true" : "false") << '\n'
      << "# doppler-fwhm-hz = " << format_number(c.doppler_fwhm_hz) << '\n'
      << "# doppler-points = " << c.doppler_points << '\n'
      << "# gamma-dephasing-hz = " << format_number(c.rates.optical_dephasing / kTwoPi) << '\n'
      << "# gamma-ground-hz = " << format_number(c.rates.ground_relaxation / kTwoPi) << '\n'
      << "# quench-hz = " << format_number(c.rates.extra_excited_quench / kTwoPi) << '\n';
}

void write_scan_csv(std::ostream& out, const Lineshape& ls, bool comments) {
  if (comments) write_config_comments(out, ls.config);
  out << "delta_R_hz,absorption\n";
  for (std::size_t k = 0; k < ls.raman_hz.size(); ++k) {
    out << format_number(ls.raman_hz[k]) << ',' << format_number(ls.absorption[k]) << '\n';
  }
}

void write_bscan_csv(std::ostream& out, const std::vector<FamilyMember>& family, bool comments) {
  if (comments && !family.empty()) write_config_comments(out, family.front().lineshape.config);
  out << "B_gauss,delta_R_hz,absorption\n";
  for (const FamilyMember& m : family) {
    const std::string b = format_number(m.B_gauss);
    for (std::size_t k = 0; k < m.lineshape.raman_hz.size(); ++k) {
      out << b << ',' << format_number(m.lineshape.raman_hz[k]) << ','
          << format_number(m.lineshape.absorption[k]) << '\n';
    }
  }
}

void write_compare_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "scheme,excited_F,rabi_hz,amplitude,fwhm_hz,contrast,amp_to_width,center_hz,n_peaks,"
         "background\n";
  for (const ComparisonRow& r : rows) {
    const ResonanceMetrics& m = r.metrics;
    out << scheme_name(r.choice.scheme) << ',' << r.choice.excited_F.str() << ','
        << format_number(r.rabi / kTwoPi) << ',' << format_number(m.amplitude) << ','
        << format_number(m.fwhm) << ',' << format_number(m.contrast) << ','
        << format_number(m.amp_to_width) << ',' << format_number(m.center) << ',' << m.n_peaks
        << ',' << format_number(m.background) << '\n';
  }
}

void write_levels_csv(std::ostream& out, const LevelSet& levels) {
  out << "manifold,F,m,energy_hz\n";
  for (const Level& l : levels.ground_levels) {
    out << "ground," << l.F.str() << ',' << l.m.str() << ',' << format_number(l.energy_hz) << '\n';
  }
  for (const Level& l : levels.excited_levels) {
    out << "excited," << l.F.str() << ',' << l.m.str() << ',' << format_number(l.energy_hz) << '\n';
  }
}

}  // namespace cpt
