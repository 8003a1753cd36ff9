#pragma once

/**
 * @file profiles.hpp
 * @brief Stratified viscosity profiles, the shear equilibria they induce
 * (mu * U' = sigma) and the admissibility checks run before simulating.
 */

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vvdiss/grid.hpp"

namespace vvd {

enum class ProfileKind { constant, exponential, tanh_blend, tabulated };

ProfileKind parse_profile_kind(const std::string& name);
std::string to_string(ProfileKind kind);

struct ViscositySample {
    double mu;
    double dmu;   // d mu / dy
    double d2mu;  // d^2 mu / dy^2
};

/**
 * @brief Viscosity mu(y) on [-L_y, L_y], sampled on a closed uniform grid
 * of n_points nodes (both ends included).
 *
 * Parameters by kind:
 *   constant     mu0
 *   exponential  mu0, eps                      mu = mu0 exp(eps y)
 *   tanh-blend   mu_outer, mu_inner, center, half_span, width
 *                ln mu = ln mu_outer + ln(mu_inner/mu_outer) * B(y),
 *                B = (tanh((y-c+s)/w) - tanh((y-c-s)/w)) / 2
 *   tabulated    values supplied on the grid, cubic B-spline in between
 */
class ViscosityProfile {
public:
    ProfileKind kind;
    std::map<std::string, double> params;
    double half_length;
    std::size_t n_points;
    std::vector<double> y, mu, dmu, d2mu;

    ViscositySample at(double yy) const { return eval_(yy); }
    double spacing() const { return 2.0 * half_length / static_cast<double>(n_points - 1); }
    double max_mu() const;
    double min_mu() const;

    /// Largest relative mismatch of mu, mu', mu'' between y = -L_y and y = L_y.
    double seam_mismatch() const;

private:
    std::function<ViscositySample(double)> eval_;
    friend ViscosityProfile build_profile(ProfileKind, const std::map<std::string, double>&, double,
                                          std::size_t, std::span<const double>);
};

ViscosityProfile build_profile(ProfileKind kind, const std::map<std::string, double>& params,
                               double half_length, std::size_t n_points,
                               std::span<const double> table = {});

struct ZCoefficients;

/**
 * @brief Shear flow with mu U' = sigma, U(0) = 0, on the profile's y-grid,
 * plus the inverse map z -> y.
 */
class ShearEquilibrium {
public:
    std::shared_ptr<const ViscosityProfile> profile;
    double sigma = 0.0;
    std::vector<double> U, dU, ddU;  // on profile->y
    double nu = 0.0;                 // inf mu U'^2
    double u = 0.0;                  // inf U'

    double z_min() const { return U.front(); }
    double z_max() const { return U.back(); }

    /// Inverse of U: monotone cubic interpolation refined by Newton steps.
    double y_of_z(double z) const;
    /// U(y) between nodes (node value plus Gauss quadrature of sigma/mu).
    double U_at(double yy) const;

    // Monotone cubic through (U_i, y_i); starting guess for y_of_z.
    std::shared_ptr<const std::function<double(double)>> y_guess;
};

ShearEquilibrium build_equilibrium(const ViscosityProfile& profile, double sigma);
ShearEquilibrium build_equilibrium(std::shared_ptr<const ViscosityProfile> profile, double sigma);

/**
 * @brief Coefficients of the moving-frame equation on the periodic z-grid
 * spanning [U(-L_y), U(L_y)].
 *
 * mu, dmu, d2mu and dlogmu are y-derivatives evaluated at y(z_i); the
 * z-derivatives da, d2a, dmu_dz, d2mu_dz are also stored.
 */
struct ZCoefficients {
    ZGrid grid;
    double sigma;
    double nu, u;
    std::vector<double> y, a, mu, dmu, d2mu, dlogmu, ddU;
    std::vector<double> da, d2a, dmu_dz, d2mu_dz;
    bool uniform;  // mu', mu'' vanish identically
};

ZCoefficients sample_on_z(const ShearEquilibrium& eq, std::size_t n);

struct LocalRates {
    std::vector<double> nu_local;  // mu U'^2
    std::vector<double> rate;      // (mu U'^2)^(1/3)
};

LocalRates local_rates(const ShearEquilibrium& eq);

struct Condition {
    std::string name;
    double value;
    double threshold;
    std::string relation;  // "<", "<=" or ">="
    bool pass;
    bool counted;  // false for informational records
};

struct AdmissibilityReport {
    std::vector<Condition> conditions;
    std::string binding_gradual;  // which gradual-variation threshold decides
    bool pass() const;
    const Condition& find(const std::string& name) const;
};

AdmissibilityReport validate_profile(const ShearEquilibrium& eq);

}  // namespace vvd
