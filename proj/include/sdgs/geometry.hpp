#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdgs/vec3.hpp"

namespace sdgs::geometry {

// Physical constants. Distances in km unless suffixed otherwise.
constexpr double kMuEarthKm3S2 = 398600.4418;    // gravitational parameter
constexpr double kEarthRadiusKm = 6371.0;        // spherical Earth model
constexpr double kEarthRotationRadS = 7.2921159e-5;
constexpr double kSpeedOfLightMS = 299792458.0;
constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

// Circular-orbit elements. phase_deg is the argument of latitude at epoch
// (angle from the ascending node, in-plane).
struct OrbitElements {
    double altitude_km = 550.0;
    double inclination_deg = 53.0;
    double raan_deg = 0.0;
    double phase_deg = 0.0;
    double epoch_s = 0.0;

    double semi_major_axis_km() const { return kEarthRadiusKm + altitude_km; }
    // Mean motion for a circular orbit.
    double angular_rate_rad_s() const;
    double period_s() const;
};

struct GroundSite {
    std::string name;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double alt_m = 0.0;
};

struct EphemerisSample {
    double t_s = 0.0;
    Vec3 r_km;    // ECI position
    Vec3 v_kms;   // ECI velocity
};

struct LinkConstants {
    double f_c_hz = 2.0e9;
    double c_ms = kSpeedOfLightMS;
};

// Slant geometry at one instant. radial_velocity_kms > 0 means receding;
// doppler_hz = -(f_c/c) * radial_velocity, so an approaching satellite gives
// positive Doppler.
struct GeometrySample {
    double t_s = 0.0;
    double slant_range_km = 0.0;
    double radial_velocity_kms = 0.0;
    double elevation_deg = 0.0;
    double doppler_hz = 0.0;
};

void validate(const OrbitElements& elems);
void validate(const GroundSite& site);

// Two-body circular propagation in ECI.
EphemerisSample propagate(const OrbitElements& elems, double t_s);

// Ground site state in ECI, including Earth-rotation velocity. Longitude is
// measured from the inertial x axis at t = 0.
EphemerisSample site_state(const GroundSite& site, double t_s);

double doppler_from_radial_velocity(double radial_velocity_kms, const LinkConstants& consts);

// Throws std::domain_error when site and satellite coincide.
GeometrySample geometry_at(const GroundSite& site, const EphemerisSample& sat,
                           const LinkConstants& consts);

// UE-side open-loop prior: same formulas as geometry_at, evaluated on the
// perturbed orbit/site state.
GeometrySample predicted_geometry(const GroundSite& site, const OrbitElements& perturbed_elems,
                                  const GroundSite& perturbed_site, double t_s,
                                  const LinkConstants& consts);

// Perturbation builders for predicted_geometry inputs.
OrbitElements with_along_track_offset(const OrbitElements& elems, double offset_m);
GroundSite with_enu_offset(const GroundSite& site, double east_m, double north_m, double up_m);

// Unit line-of-sight vector site -> satellite in the site's local
// east/north/up frame.
Vec3 los_unit_enu(const GroundSite& site, const EphemerisSample& sat);

struct PassWindow {
    double rise_t_s = 0.0;
    double set_t_s = 0.0;
    double duration_s() const { return set_t_s - rise_t_s; }
};

// Maximal intervals in [t0, t1] with elevation >= min_elev_deg, found by a
// 1 s scan and bisection refinement of the crossings to 1 ms.
std::vector<PassWindow> pass_window(const GroundSite& site, const OrbitElements& elems,
                                    double t0_s, double t1_s, double min_elev_deg,
                                    const LinkConstants& consts = {});

// Highest-elevation instant within a window (1 s scan + golden refinement).
double max_elevation_time(const GroundSite& site, const OrbitElements& elems,
                          const PassWindow& window, const LinkConstants& consts = {});

}  // namespace sdgs::geometry
