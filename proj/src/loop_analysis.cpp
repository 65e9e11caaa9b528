#include "sdgs/loop_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdgs::loop_analysis {

namespace {

PolyZ poly_mul(const PolyZ& a, const PolyZ& b) {
    if (a.empty() || b.empty()) return {};
    PolyZ out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

PolyZ poly_add(PolyZ a, const PolyZ& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

PolyZ poly_shift(const PolyZ& a, int d) {
    PolyZ out(static_cast<std::size_t>(d), 0.0);
    out.insert(out.end(), a.begin(), a.end());
    return out;
}

std::complex<double> poly_eval(const PolyZ& p, std::complex<double> z_inv) {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * z_inv + *it;
    }
    return acc;
}

// Root magnitudes of a polynomial given in ascending powers of z^-1. The
// polynomial a0 + a1 z^-1 + ... + an z^-n has the same roots in z as
// a0 z^n + a1 z^(n-1) + ... + an.
std::vector<double> root_magnitudes_z(const PolyZ& p) {
    PolyZ coeffs = p;   // coeffs[i] multiplies z^(n-i)
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-300) {
        coeffs.pop_back();
    }
    const std::size_t n = coeffs.size() - 1;
    if (n == 0 || std::abs(coeffs.front()) < 1e-300) {
        return {};
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<int>(n), static_cast<int>(n));
    for (std::size_t i = 1; i <= n; ++i) {
        companion(0, static_cast<int>(i - 1)) = -coeffs[i] / coeffs[0];
    }
    for (std::size_t i = 1; i < n; ++i) {
        companion(static_cast<int>(i), static_cast<int>(i - 1)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<double> mags;
    mags.reserve(n);
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        mags.push_back(std::abs(solver.eigenvalues()[i]));
    }
    std::sort(mags.rbegin(), mags.rend());
    return mags;
}

}  // namespace

std::complex<double> ClosedLoopTf::eval(std::complex<double> z_inv) const {
    return poly_eval(numerator, z_inv) / poly_eval(denominator, z_inv);
}

ClosedLoopTf build_closed_loop_tf(const controller::PidConfig& pid,
                                  const LoopAnalysisConfig& plant) {
    if (!(pid.t_fb_s > 0.0)) {
        throw std::invalid_argument("closed_loop_response: t_fb_s must be > 0");
    }
    if (std::abs(plant.plant_pole) > 1.0) {
        throw std::invalid_argument("closed_loop_response: |plant_pole| must be <= 1");
    }
    const double T = pid.t_fb_s;
    const int d = pid.delay_index();

    // C(z) = Cn/Cd. With integral action the denominator carries the 1 - z^-1
    // pole; without it the controller is polynomial.
    PolyZ cn;
    PolyZ cd;
    if (pid.ki != 0.0) {
        cn = {pid.kp + pid.ki * T + pid.kd / T, -pid.kp - 2.0 * pid.kd / T, pid.kd / T};
        cd = {1.0, -1.0};
    } else {
        cn = {pid.kp + pid.kd / T, -pid.kd / T};
        cd = {1.0};
    }

    // P(z) = g z^-1 / (1 - p z^-1)
    const PolyZ pn = {0.0, plant.plant_gain};
    const PolyZ pd = {1.0, -plant.plant_pole};

    ClosedLoopTf tf;
    tf.numerator = poly_shift(poly_mul(cn, pn), d);
    tf.denominator = poly_add(poly_mul(cd, pd), tf.numerator);
    return tf;
}

LoopResponse closed_loop_response(const controller::PidConfig& pid,
                                  const LoopAnalysisConfig& plant) {
    const ClosedLoopTf tf = build_closed_loop_tf(pid, plant);

    LoopResponse out;
    out.root_magnitudes = root_magnitudes_z(tf.denominator);
    out.stable = true;
    for (double m : out.root_magnitudes) {
        if (m >= 1.0 - 1e-9) {
            out.stable = false;
            break;
        }
    }
    // A zero controller leaves the plant pole in the characteristic
    // polynomial; pole = 1 open loop is marginal, which we report as stable
    // only for the all-zero-gain case where T_cl is identically zero.
    if (pid.kp == 0.0 && pid.ki == 0.0 && pid.kd == 0.0) {
        out.stable = std::abs(plant.plant_pole) <= 1.0;
    }

    out.points.reserve(plant.eval_frequencies_hz.size());
    for (double f : plant.eval_frequencies_hz) {
        const double w = 2.0 * geometry::kPi * f * pid.t_fb_s;
        const std::complex<double> z_inv = std::exp(std::complex<double>(0.0, -w));
        const std::complex<double> t = tf.eval(z_inv);
        out.points.push_back({f, std::abs(t), std::arg(t) * 180.0 / geometry::kPi});
    }
    return out;
}

double closed_loop_magnitude(const controller::PidConfig& pid, const LoopAnalysisConfig& plant,
                             double freq_hz) {
    const ClosedLoopTf tf = build_closed_loop_tf(pid, plant);
    const double w = 2.0 * geometry::kPi * freq_hz * pid.t_fb_s;
    return std::abs(tf.eval(std::exp(std::complex<double>(0.0, -w))));
}

double sensitivity_magnitude(const controller::PidConfig& pid, const LoopAnalysisConfig& plant,
                             double freq_hz) {
    const ClosedLoopTf tf = build_closed_loop_tf(pid, plant);
    const double w = 2.0 * geometry::kPi * freq_hz * pid.t_fb_s;
    const std::complex<double> z_inv = std::exp(std::complex<double>(0.0, -w));
    return std::abs(1.0 - tf.eval(z_inv));
}

}  // namespace sdgs::loop_analysis
