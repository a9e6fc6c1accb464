#include "cpt/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cpt/errors.hpp"

namespace cpt {

cplx Polarization::component(int q) const {
  if (q == -1) return amp_minus;
  if (q == 1) return amp_plus;
  return {0.0, 0.0};
}

const FieldComponent& BichromaticField::for_ground_F(HalfInt F) const {
  if (component1.target_ground_F == F) return component1;
  if (component2.target_ground_F == F) return component2;
  throw InvalidArgument("no field component addresses ground F = " + F.str());
}

BichromaticField BichromaticField::with_global_phase(double phase) const {
  BichromaticField f = *this;
  const cplx factor = std::polar(1.0, phase);
  for (FieldComponent* c : {&f.component1, &f.component2}) {
    c->polarization.amp_minus *= factor;
    c->polarization.amp_plus *= factor;
  }
  return f;
}

BichromaticField BichromaticField::doppler_shifted(double shift_hz) const {
  BichromaticField f = *this;
  f.component1.optical_detuning -= shift_hz;
  f.component2.optical_detuning -= shift_hz;
  return f;
}

void BichromaticField::validate() const {
  if (component1.target_ground_F == component2.target_ground_F) {
    throw InvalidArgument("both field components address the same ground manifold");
  }
  if (component1.rabi_scale < 0.0 || component2.rabi_scale < 0.0) {
    throw InvalidArgument("rabi scales must be non-negative");
  }
}

Scheme parse_scheme(std::string_view name) {
  if (name == "lin_par_lin") return Scheme::lin_par_lin;
  if (name == "sigma_sigma") return Scheme::sigma_sigma;
  if (name == "lin_perp_lin") return Scheme::lin_perp_lin;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::lin_par_lin:
      return "lin_par_lin";
    case Scheme::sigma_sigma:
      return "sigma_sigma";
    case Scheme::lin_perp_lin:
      return "lin_perp_lin";
  }
  return "?";
}

Polarization polarization_from_ellipse(double axis_angle, double ellipticity) {
  // Jones vector: major axis along (cos t, sin t), minor axis 90 degrees ahead
  // in phase.
  const double ct = std::cos(axis_angle), st = std::sin(axis_angle);
  const double ce = std::cos(ellipticity), se = std::sin(ellipticity);
  const cplx ex(ce * ct, -se * st);
  const cplx ey(ce * st, se * ct);
  const cplx i(0.0, 1.0);
  Polarization p;
  p.amp_plus = -(ex - i * ey) / std::numbers::sqrt2;
  p.amp_minus = (ex + i * ey) / std::numbers::sqrt2;
  return p;
}

std::pair<cplx, cplx> circular_components(const Polarization& p) {
  return {p.amp_minus, p.amp_plus};
}

BichromaticField preset(Scheme scheme, double rabi1, double rabi2, double raman_detuning,
                        const AtomSpec& atom) {
  if (rabi1 < 0.0 || rabi2 < 0.0) throw InvalidArgument("rabi scales must be non-negative");
  BichromaticField f;
  f.raman_detuning = raman_detuning;
  f.component1.rabi_scale = rabi1;
  f.component1.target_ground_F = atom.upper_ground_F();
  f.component2.rabi_scale = rabi2;
  f.component2.target_ground_F = atom.lower_ground_F();

  switch (scheme) {
    case Scheme::lin_par_lin:
      f.component1.polarization = polarization_from_ellipse(0.0, 0.0);
      f.component2.polarization = polarization_from_ellipse(0.0, 0.0);
      break;
    case Scheme::sigma_sigma:
      f.component1.polarization = Polarization{0.0, 1.0};
      f.component2.polarization = Polarization{0.0, 1.0};
      break;
    case Scheme::lin_perp_lin:
      f.component1.polarization = polarization_from_ellipse(0.0, 0.0);
      f.component2.polarization = polarization_from_ellipse(std::numbers::pi / 2.0, 0.0);
      break;
  }
  return f;
}

}  // namespace cpt
