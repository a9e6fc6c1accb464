#pragma once

// Bichromatic running-wave field along z. Each frequency component carries
// a normalized polarization in the circular basis
//   e_{+1} = -(e_x + i e_y)/sqrt2,   e_{-1} = (e_x - i e_y)/sqrt2,
// and is assigned to exactly one ground hyperfine manifold.

#include <complex>
#include <string_view>
#include <utility>

#include "cpt/angmom.hpp"
#include "cpt/structure.hpp"

namespace cpt {

using cplx = std::complex<double>;

struct Polarization {
  cplx amp_minus{0.0, 0.0};  ///< coefficient of e_{-1}
  cplx amp_plus{0.0, 0.0};   ///< coefficient of e_{+1}

  /// Amplitude of spherical component q (0 for q = 0: no pi light along z).
  cplx component(int q) const;
  double norm_squared() const { return std::norm(amp_minus) + std::norm(amp_plus); }
};

struct FieldComponent {
  /// Overall coupling strength, rad/s, for a unit reduced dipole element.
  double rabi_scale = 0.0;
  /// Detuning (Hz) from the zero-field centroid of target manifold -> F_e.
  double optical_detuning = 0.0;
  Polarization polarization;
  HalfInt target_ground_F;
};

/// component1 drives the upper ground manifold, component2 the lower one.
///
/// The laser frequencies are nu1 = nu1_0 + detuning1 - raman/2 and
/// nu2 = nu2_0 + detuning2 + raman/2, so that nu2 - nu1 exceeds the ground
/// splitting by raman_detuning + detuning2 - detuning1. This is the
/// symmetric sideband sweep of a modulated laser.
struct BichromaticField {
  FieldComponent component1;
  FieldComponent component2;
  double raman_detuning = 0.0;  ///< Hz

  const FieldComponent& for_ground_F(HalfInt F) const;
  /// Both polarizations multiplied by exp(i phase).
  BichromaticField with_global_phase(double phase) const;
  /// Same field seen by an atom whose optical detunings are shifted by
  /// -shift_hz (co-propagating beams: the Raman detuning is unchanged).
  BichromaticField doppler_shifted(double shift_hz) const;
  void validate() const;
};

enum class Scheme { lin_par_lin, sigma_sigma, lin_perp_lin };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme scheme);

/// Polarization of an ellipse with major axis at axis_angle from x and
/// ellipticity angle (0 linear, +pi/4 sigma+, -pi/4 sigma-).
Polarization polarization_from_ellipse(double axis_angle, double ellipticity);

/// (amp_minus, amp_plus).
std::pair<cplx, cplx> circular_components(const Polarization& p);

/// Named configuration. lin_par_lin: both x; sigma_sigma: both sigma+;
/// lin_perp_lin: x and y.
BichromaticField preset(Scheme scheme, double rabi1, double rabi2, double raman_detuning,
                        const AtomSpec& atom = rb87());

}  // namespace cpt
