#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sdgs/geometry.hpp"
#include "sdgs/rng.hpp"

using namespace sdgs;
using namespace sdgs::geometry;

namespace {

OrbitElements default_orbit() {
    OrbitElements e;
    e.altitude_km = 550.0;
    e.inclination_deg = 53.0;
    return e;
}

// Site on the equator at inertial longitude 0; the default orbit with
// inclination 0 and phase 0 puts the satellite directly overhead at t = 0.
GroundSite zenith_site() {
    GroundSite s;
    s.name = "equator";
    s.lat_deg = 0.0;
    s.lon_deg = 0.0;
    return s;
}

}  // namespace

TEST_CASE("circular speed matches vis-viva at 550 km") {
    OrbitElements e = default_orbit();
    e.inclination_deg = 0.0;
    const auto eph = propagate(e, 0.0);
    CHECK(norm(eph.r_km) == doctest::Approx(6921.0).epsilon(1e-9));
    CHECK(norm(eph.v_kms) == doctest::Approx(std::sqrt(kMuEarthKm3S2 / 6921.0)).epsilon(1e-12));
    CHECK(norm(eph.v_kms) == doctest::Approx(7.590).epsilon(1e-3));
}

TEST_CASE("propagation is periodic over one orbit") {
    const OrbitElements e = default_orbit();
    const auto a = propagate(e, 0.0);
    const auto b = propagate(e, e.period_s());
    CHECK(norm(a.r_km - b.r_km) < 1e-6);
}

TEST_CASE("polar orbit has no equatorial-east velocity at the node") {
    OrbitElements e = default_orbit();
    e.inclination_deg = 90.0;
    e.raan_deg = 0.0;
    e.phase_deg = 0.0;
    const auto eph = propagate(e, 0.0);
    // Node at +x; east there is +y.
    CHECK(std::abs(eph.v_kms.y) < 1e-12);
    CHECK(eph.v_kms.z > 0.0);
}

TEST_CASE("circular orbit invariants over random times") {
    const OrbitElements e = default_orbit();
    Rng rng(42);
    const double v0 = norm(propagate(e, 0.0).v_kms);
    for (int i = 0; i < 200; ++i) {
        const double t = rng.uniform(0.0, 86400.0);
        const auto eph = propagate(e, t);
        CHECK(std::abs(norm(eph.r_km) - e.semi_major_axis_km()) < 1e-6);
        CHECK(std::abs(dot(eph.r_km, eph.v_kms)) < 1e-6);
        CHECK(std::abs(norm(eph.v_kms) - v0) < 1e-9);
    }
}

TEST_CASE("satellite overhead: elevation 90, zero radial velocity and Doppler") {
    OrbitElements e = default_orbit();
    e.inclination_deg = 0.0;
    const GroundSite site = zenith_site();
    const LinkConstants consts;
    const auto geo = geometry_at(site, propagate(e, 0.0), consts);
    CHECK(geo.elevation_deg == doctest::Approx(90.0).epsilon(1e-8));
    CHECK(std::abs(geo.elevation_deg - 90.0) < 1e-6);
    CHECK(geo.slant_range_km == doctest::Approx(550.0).epsilon(1e-9));
    // Closest approach of the pass: range rate vanishes.
    CHECK(std::abs(geo.radial_velocity_kms) < 1e-9);
    CHECK(std::abs(geo.doppler_hz) < 1e-3);
}

TEST_CASE("doppler sign and magnitude from radial velocity") {
    LinkConstants consts;
    consts.f_c_hz = 2.0e9;
    // Approaching at 7.5 km/s.
    CHECK(doppler_from_radial_velocity(-7.5, consts) == doctest::Approx(50034.6).epsilon(1e-4));
    // Sign convention: approaching (v_r < 0) gives positive Doppler.
    CHECK(doppler_from_radial_velocity(-1.0, consts) > 0.0);
    CHECK(doppler_from_radial_velocity(1.0, consts) < 0.0);
}

TEST_CASE("analytic radial velocity matches central finite difference") {
    const LinkConstants consts;
    Rng rng(7);
    const double h = 1e-3;
    for (int i = 0; i < 1000; ++i) {
        OrbitElements e = default_orbit();
        e.raan_deg = rng.uniform(0.0, 360.0);
        e.phase_deg = rng.uniform(0.0, 360.0);
        GroundSite site;
        site.lat_deg = rng.uniform(-60.0, 60.0);
        site.lon_deg = rng.uniform(-180.0, 180.0);
        const double t = rng.uniform(0.0, 7000.0);

        const auto geo = geometry_at(site, propagate(e, t), consts);
        const double rho_p = geometry_at(site, propagate(e, t + h), consts).slant_range_km;
        const double rho_m = geometry_at(site, propagate(e, t - h), consts).slant_range_km;
        const double fd_vr = (rho_p - rho_m) / (2.0 * h);
        CHECK(std::abs(fd_vr - geo.radial_velocity_kms) < 1e-6);
        // Sign consistency between the stored Doppler and radial velocity.
        if (geo.radial_velocity_kms < 0.0) {
            CHECK(geo.doppler_hz > 0.0);
        } else if (geo.radial_velocity_kms > 0.0) {
            CHECK(geo.doppler_hz < 0.0);
        }
    }
}

TEST_CASE("geometry_at rejects coincident site and satellite") {
    OrbitElements e;
    e.altitude_km = 1000.0;
    GroundSite site;
    site.lat_deg = 0.0;
    site.lon_deg = 0.0;
    site.alt_m = 1000.0 * 1000.0;   // site raised to the orbit shell
    const LinkConstants consts;
    const auto eph = propagate(e, 0.0);
    CHECK_THROWS_AS((void)geometry_at(site, eph, consts), std::domain_error);
}

TEST_CASE("predicted_geometry with zero perturbation is bit-identical") {
    const OrbitElements e = default_orbit();
    GroundSite site;
    site.lat_deg = 22.5;
    site.lon_deg = 114.0;
    const LinkConstants consts;
    const double t = 1234.5;
    const auto truth = geometry_at(site, propagate(e, t), consts);
    const auto predicted = predicted_geometry(site, e, site, t, consts);
    CHECK(predicted.slant_range_km == truth.slant_range_km);
    CHECK(predicted.radial_velocity_kms == truth.radial_velocity_kms);
    CHECK(predicted.elevation_deg == truth.elevation_deg);
    CHECK(predicted.doppler_hz == truth.doppler_hz);
}

TEST_CASE("line-of-sight range bias moves predicted range one-to-one") {
    // Overhead geometry makes the line of sight radial, so an altitude bump
    // is a pure LOS offset.
    OrbitElements e = default_orbit();
    e.inclination_deg = 0.0;
    const GroundSite site = zenith_site();
    const LinkConstants consts;
    OrbitElements biased = e;
    biased.altitude_km += 0.300;
    const auto truth = geometry_at(site, propagate(e, 0.0), consts);
    const auto predicted = predicted_geometry(site, biased, site, 0.0, consts);
    CHECK(predicted.slant_range_km - truth.slant_range_km == doctest::Approx(0.300).epsilon(1e-9));
}

TEST_CASE("predicted_geometry equals oracle recomputation from the perturbed state") {
    const OrbitElements e = default_orbit();
    GroundSite site;
    site.lat_deg = 35.7;
    site.lon_deg = 139.7;
    const LinkConstants consts;

    const auto pert_elems = with_along_track_offset(e, 120.0);
    const auto pert_site = with_enu_offset(site, 3.0, -4.0, 7.0);
    const double t = 654.3;

    const auto predicted = predicted_geometry(site, pert_elems, pert_site, t, consts);
    // Independent recomputation through the raw formulas.
    const auto sat = propagate(pert_elems, t);
    const auto oracle = geometry_at(pert_site, sat, consts);
    CHECK(predicted.slant_range_km == oracle.slant_range_km);
    CHECK(predicted.doppler_hz == oracle.doppler_hz);
}

TEST_CASE("along-track offset shifts the in-plane phase by arc length") {
    const OrbitElements e = default_orbit();
    const auto shifted = with_along_track_offset(e, 150.0);
    const double expected_deg = rad2deg((150.0 / 1000.0) / e.semi_major_axis_km());
    CHECK(shifted.phase_deg - e.phase_deg == doctest::Approx(expected_deg).epsilon(1e-12));
    // Position moves by ~the offset at epoch.
    const auto d = norm(propagate(shifted, 0.0).r_km - propagate(e, 0.0).r_km) * 1000.0;
    CHECK(d == doctest::Approx(150.0).epsilon(1e-6));
}

TEST_CASE("pass_window with min_elev -90 returns the whole interval") {
    const OrbitElements e = default_orbit();
    GroundSite site;
    site.lat_deg = 10.0;
    const auto windows = pass_window(site, e, 100.0, 500.0, -90.0);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].rise_t_s == doctest::Approx(100.0));
    CHECK(windows[0].set_t_s == doctest::Approx(500.0));
}

TEST_CASE("polar site never sees an equatorial orbit above 10 deg") {
    OrbitElements e = default_orbit();
    e.inclination_deg = 0.0;
    GroundSite site;
    site.lat_deg = 89.9;
    const auto windows = pass_window(site, e, 0.0, 2.0 * e.period_s(), 10.0);
    CHECK(windows.empty());
}

TEST_CASE("overhead pass duration sits in the 8-13 minute band") {
    // 53 deg orbit crossing its ascending node directly over the site.
    const OrbitElements e = default_orbit();
    const GroundSite site = zenith_site();
    // Horizon-to-horizon window around the t=0 zenith crossing.
    const auto windows = pass_window(site, e, -1000.0, 1000.0, 0.0);
    REQUIRE(windows.size() == 1);
    const double minutes = windows[0].duration_s() / 60.0;
    CHECK(minutes > 8.0);
    CHECK(minutes < 13.0);

    // Brute-force 1 s scan oracle agrees with the refined edges.
    const LinkConstants consts;
    double scan_rise = 1000.0;
    double scan_set = -1000.0;
    for (double t = -1000.0; t <= 1000.0; t += 1.0) {
        const auto geo = geometry_at(site, propagate(e, t), consts);
        if (geo.elevation_deg >= 0.0) {
            scan_rise = std::min(scan_rise, t);
            scan_set = std::max(scan_set, t);
        }
    }
    CHECK(std::abs(windows[0].rise_t_s - scan_rise) <= 1.5);
    CHECK(std::abs(windows[0].set_t_s - scan_set) <= 1.5);
}

TEST_CASE("validation rejects out-of-range elements and sites") {
    OrbitElements bad;
    bad.altitude_km = -1.0;
    CHECK_THROWS(validate(bad));
    GroundSite site;
    site.lat_deg = 91.0;
    CHECK_THROWS(validate(site));
}
