#include "sdgs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdgs::geometry {

namespace {

double wrap_deg(double d) {
    double w = std::fmod(d, 360.0);
    if (w < 0.0) w += 360.0;
    return w;
}

double elevation_at(const GroundSite& site, const OrbitElements& elems, double t,
                    const LinkConstants& consts) {
    return geometry_at(site, propagate(elems, t), consts).elevation_deg;
}

}  // namespace

double OrbitElements::angular_rate_rad_s() const {
    const double a = semi_major_axis_km();
    return std::sqrt(kMuEarthKm3S2 / (a * a * a));
}

double OrbitElements::period_s() const {
    return 2.0 * kPi / angular_rate_rad_s();
}

void validate(const OrbitElements& elems) {
    if (!(elems.altitude_km > 0.0)) {
        throw std::invalid_argument("OrbitElements: altitude_km must be > 0");
    }
    if (elems.inclination_deg < 0.0 || elems.inclination_deg > 180.0) {
        throw std::invalid_argument("OrbitElements: inclination_deg must be in [0, 180]");
    }
}

void validate(const GroundSite& site) {
    if (std::abs(site.lat_deg) > 90.0) {
        throw std::invalid_argument("GroundSite: |lat_deg| must be <= 90");
    }
    if (std::abs(site.lon_deg) > 180.0) {
        throw std::invalid_argument("GroundSite: |lon_deg| must be <= 180");
    }
}

EphemerisSample propagate(const OrbitElements& elems, double t_s) {
    const double a = elems.semi_major_axis_km();
    const double omega = elems.angular_rate_rad_s();
    const double incl = deg2rad(elems.inclination_deg);
    const double raan = deg2rad(wrap_deg(elems.raan_deg));
    const double u = deg2rad(wrap_deg(elems.phase_deg)) + omega * (t_s - elems.epoch_s);

    // In-plane basis: p along the ascending node, q 90 deg ahead in the plane.
    const Vec3 p{std::cos(raan), std::sin(raan), 0.0};
    const Vec3 q{-std::sin(raan) * std::cos(incl), std::cos(raan) * std::cos(incl),
                 std::sin(incl)};

    const double cu = std::cos(u);
    const double su = std::sin(u);
    EphemerisSample out;
    out.t_s = t_s;
    out.r_km = p * (a * cu) + q * (a * su);
    out.v_kms = p * (-a * omega * su) + q * (a * omega * cu);
    return out;
}

EphemerisSample site_state(const GroundSite& site, double t_s) {
    const double r = kEarthRadiusKm + site.alt_m / 1000.0;
    const double lat = deg2rad(site.lat_deg);
    const double theta = deg2rad(site.lon_deg) + kEarthRotationRadS * t_s;

    EphemerisSample out;
    out.t_s = t_s;
    out.r_km = {r * std::cos(lat) * std::cos(theta), r * std::cos(lat) * std::sin(theta),
                r * std::sin(lat)};
    // v = omega_e x r with omega_e along +z.
    out.v_kms = cross(Vec3{0.0, 0.0, kEarthRotationRadS}, out.r_km);
    return out;
}

double doppler_from_radial_velocity(double radial_velocity_kms, const LinkConstants& consts) {
    return -(consts.f_c_hz / consts.c_ms) * radial_velocity_kms * 1000.0;
}

GeometrySample geometry_at(const GroundSite& site, const EphemerisSample& sat,
                           const LinkConstants& consts) {
    const EphemerisSample u = site_state(site, sat.t_s);
    const Vec3 rel = sat.r_km - u.r_km;
    const double range = norm(rel);
    if (range < 1e-9) {
        throw std::domain_error("geometry_at: site and satellite coincide");
    }

    GeometrySample out;
    out.t_s = sat.t_s;
    out.slant_range_km = range;
    // d/dt ||r_s - r_u|| evaluated analytically.
    out.radial_velocity_kms = dot(sat.v_kms - u.v_kms, rel) / range;
    out.doppler_hz = doppler_from_radial_velocity(out.radial_velocity_kms, consts);

    const Vec3 up = normalized(u.r_km);
    const double sin_el = dot(rel, up) / range;
    out.elevation_deg = rad2deg(std::asin(std::clamp(sin_el, -1.0, 1.0)));
    return out;
}

GeometrySample predicted_geometry(const GroundSite& /*site*/, const OrbitElements& perturbed_elems,
                                  const GroundSite& perturbed_site, double t_s,
                                  const LinkConstants& consts) {
    return geometry_at(perturbed_site, propagate(perturbed_elems, t_s), consts);
}

OrbitElements with_along_track_offset(const OrbitElements& elems, double offset_m) {
    OrbitElements out = elems;
    const double d_phase_rad = (offset_m / 1000.0) / elems.semi_major_axis_km();
    out.phase_deg = wrap_deg(out.phase_deg + rad2deg(d_phase_rad));
    return out;
}

GroundSite with_enu_offset(const GroundSite& site, double east_m, double north_m, double up_m) {
    GroundSite out = site;
    const double r_m = (kEarthRadiusKm + site.alt_m / 1000.0) * 1000.0;
    out.lat_deg += rad2deg(north_m / r_m);
    const double cos_lat = std::cos(deg2rad(site.lat_deg));
    if (std::abs(cos_lat) > 1e-12) {
        out.lon_deg += rad2deg(east_m / (r_m * cos_lat));
    }
    out.alt_m += up_m;
    return out;
}

Vec3 los_unit_enu(const GroundSite& site, const EphemerisSample& sat) {
    const EphemerisSample u = site_state(site, sat.t_s);
    const Vec3 rel = normalized(sat.r_km - u.r_km);
    const Vec3 up = normalized(u.r_km);
    Vec3 east = cross(Vec3{0.0, 0.0, 1.0}, up);
    const double east_norm = norm(east);
    if (east_norm < 1e-12) {
        // Polar site: pick an arbitrary horizontal east.
        east = {1.0, 0.0, 0.0};
    } else {
        east = east / east_norm;
    }
    const Vec3 north = cross(up, east);
    return {dot(rel, east), dot(rel, north), dot(rel, up)};
}

std::vector<PassWindow> pass_window(const GroundSite& site, const OrbitElements& elems,
                                    double t0_s, double t1_s, double min_elev_deg,
                                    const LinkConstants& consts) {
    if (!(t1_s > t0_s)) {
        throw std::invalid_argument("pass_window: t1 must be > t0");
    }

    auto above = [&](double t) { return elevation_at(site, elems, t, consts) >= min_elev_deg; };

    // Bisection of a visibility crossing down to 1 ms.
    auto refine = [&](double lo, double hi, bool rising) {
        for (int i = 0; i < 40 && (hi - lo) > 1e-3; ++i) {
            const double mid = 0.5 * (lo + hi);
            const bool vis = above(mid);
            if (vis == rising) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    std::vector<PassWindow> windows;
    bool prev = above(t0_s);
    double rise = prev ? t0_s : 0.0;
    bool open = prev;
    const double step = 1.0;
    for (double t = t0_s + step; t < t1_s + step; t += step) {
        const double tc = std::min(t, t1_s);
        const bool cur = above(tc);
        if (cur && !open) {
            rise = refine(tc - step, tc, /*rising=*/true);
            open = true;
        } else if (!cur && open) {
            const double set = refine(tc - step, tc, /*rising=*/false);
            windows.push_back({rise, set});
            open = false;
        }
        if (tc >= t1_s) break;
    }
    if (open) {
        windows.push_back({rise, t1_s});
    }
    return windows;
}

double max_elevation_time(const GroundSite& site, const OrbitElements& elems,
                          const PassWindow& window, const LinkConstants& consts) {
    double best_t = window.rise_t_s;
    double best_el = -90.0;
    for (double t = window.rise_t_s; t <= window.set_t_s; t += 1.0) {
        const double el = elevation_at(site, elems, t, consts);
        if (el > best_el) {
            best_el = el;
            best_t = t;
        }
    }
    // Golden-section polish around the 1 s grid best.
    double lo = std::max(window.rise_t_s, best_t - 1.0);
    double hi = std::min(window.set_t_s, best_t + 1.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - gr * (hi - lo);
    double b = lo + gr * (hi - lo);
    double fa = elevation_at(site, elems, a, consts);
    double fb = elevation_at(site, elems, b, consts);
    while (hi - lo > 1e-3) {
        if (fa > fb) {
            hi = b; b = a; fb = fa;
            a = hi - gr * (hi - lo);
            fa = elevation_at(site, elems, a, consts);
        } else {
            lo = a; a = b; fa = fb;
            b = lo + gr * (hi - lo);
            fb = elevation_at(site, elems, b, consts);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace sdgs::geometry
