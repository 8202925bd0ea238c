#pragma once

#include <vector>

#include "zollfins/profile.hpp"

namespace zollfins {

/// Point of the unit tangent bundle: latitude, longitude, Clairaut constant
/// and the sign of dr/dt.
struct GeodesicState {
  double r = 0.0;
  double theta = 0.0;
  double c = 0.0;
  int sign = 1;
};

struct GeodesicSample {
  double t = 0.0;
  double r = 0.0;
  double theta = 0.0;
  int sign = 1;
};

struct GeodesicTrace {
  double c = 0.0;
  std::vector<GeodesicSample> samples;
  int chart_switches = 0;
  long steps = 0;
};

struct FlowRate {
  double dr_dt = 0.0;
  double dtheta_dt = 0.0;
};

struct ClosureIntegrals {
  double period = 0.0;   ///< T: time from r_c to pi - r_c
  double advance = 0.0;  ///< Theta_adv: longitude advance over the same arc
  double error = 0.0;    ///< quadrature error estimate (sum of both)
};

/// arcsin |c|.
double turning_latitude(double c);

/// xi_1 = sign (1 + h(cos r)) sqrt(1 - c^2 / sin^2 r).
double radial_momentum(const ZollProfile& profile, const GeodesicState& state);

/// |xi_1^2 / (1 + h)^2 + c^2 / sin^2 r - 1|; throws if the state is not reachable.
double unit_energy_residual(const ZollProfile& profile, const GeodesicState& state);

/// Throws DomainError unless |c| <= sin r + 1e-12 and sign is +-1.
void validate_state(const GeodesicState& state);

FlowRate flow_rhs(const ZollProfile& profile, const GeodesicState& state);

/// Adaptive Dormand-Prince integration of the geodesic flow, sampled at
/// `samples_per_period` uniform points per 2 pi. Near the turning latitudes
/// the integrator works in the regular angle u with cos r = cos r_c cos u.
GeodesicTrace integrate_geodesic(const ZollProfile& profile, const GeodesicState& initial,
                                 double t_end, double tol = 1e-10, int samples_per_period = 512);

/// max |(dtheta/dt) sin^2 r - c| over the trace, dtheta/dt from central
/// differences of the samples (so O(dt^2), not rounding level). 0 for meridians.
double clairaut_residual(const GeodesicTrace& trace);

/// Both closure integrals over one passage r_c -> pi - r_c.
ClosureIntegrals closure_integrals(const ZollProfile& profile, double c);

/// Time from the turning point r_c to the angle-chart position u in [0, 2 pi].
double geodesic_time(const ZollProfile& profile, double c, double u);

/// Longitude advance from the turning point to angle-chart position u (c != 0).
double geodesic_longitude_advance(const ZollProfile& profile, double c, double u);

/// Angle-chart coordinate u in [0, 2 pi) of a state: cos r = cos r_c cos u,
/// u < pi while r increases.
double angle_coordinate(const GeodesicState& state);

}  // namespace zollfins
