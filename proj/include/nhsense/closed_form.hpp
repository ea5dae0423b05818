#pragma once

#include <optional>

#include "nhsense/response.hpp"

namespace nhsense::closed_form {

enum class CfStatus { Ok, NotTabulated, PoleEncountered };

struct CfValue {
  CfStatus status = CfStatus::NotTabulated;
  double value = 0.0;
};

/// Exact elements of the inverse squeezed-frame block at zero perturbation,
/// odd chains. 1-based (row, col) inside the (2N-1)-dimensional block; the
/// catalogue covers columns 1, 2N-1 and 2m-1. Queries outside it return
/// nullopt so callers can fall back to dense inversion.
std::optional<double> tilde_h_inv_element(const ChainSpec& chain, const SqueezingParams& sq,
                                          int row, int col);

/// Lab-frame X/P block inverse elements, obtained from the squeezed-frame
/// element through the row/column parity exponential factors.
std::optional<double> block_inv_element(const ChainSpec& chain, const SqueezingParams& sq,
                                        Quadrature block, int row, int col);

/// Coefficient of epsilon in [H(eps)]^{-1}_{row,col} (squeezed frame, global
/// 1-based indices, gauge offsets taken from sq). Catalogued for the four
/// elements at the driven site's x/p rows and columns.
std::optional<double> inv_element_first_order(const ChainSpec& chain, const SqueezingParams& sq,
                                              PertKind kind, double phi, int row, int col);

/// All-order denominator factor for the boundary-coupling perturbation:
/// Theta = 2 eps0 (t1~/t2~)^{N-2m+1} sinh[(r+s)(N-1)].
double theta_factor(const ChainSpec& chain, const SqueezingParams& sq, double eps0);

/// All-order inverse elements (squeezed frame, global 1-based indices).
/// OnSite is catalogued for drive cell m = 1 (columns 1 and 2N); Nhse for
/// any m at phi = pi/2 (columns 2m-1 and 2N+2m-2). A vanishing denominator
/// reports PoleEncountered instead of a value.
CfValue inv_element_all_orders(const ChainSpec& chain, const SqueezingParams& sq, PertKind kind,
                               double eps0, int row, int col);

/// First-order response report from the closed signal formulas (arbitrary
/// theta, phi_meas and phi), noise floor n_th + 1/2 and unperturbed photon
/// number. Supports both parities; the even-chain boundary-coupling signal
/// is identically zero.
ResponseReport analytic_linear_report(const ChainSpec& chain, const DriveSpec& drive,
                                      const PerturbationSpec& pert);

/// All-order response report for the fixed measurement protocols
/// (OnSite: m = 1, phi_meas = 0, theta = pi/2; Nhse: theta = pi/4,
/// phi = pi/2, phi_meas = 0), odd chains. Signal and noise come from the
/// closed rational expressions; photons from the catalogued inverse elements
/// summed over sites. At the Nhse pole the report is flagged and the
/// diverging fields are infinite while snr stays finite. The gauge offsets
/// enter intermediate element values only and cancel in every field.
ResponseReport analytic_full_report(const ChainSpec& chain, const DriveSpec& drive,
                                    const PerturbationSpec& pert, double n0 = 0.0,
                                    double m0 = 0.0);

/// Dominant-branch closed photon expressions quoted for the two protocols.
/// These drop subleading geometric-series corrections, so they track the
/// exact sums only asymptotically.
double full_photons_asymptotic(const ChainSpec& chain, const DriveSpec& drive,
                               const PerturbationSpec& pert);

/// Uniform-chain (t2 = t1, gamma2 = gamma1) reference expressions with
/// n_sites sites.
double bkc_linear_snr(int n_sites, double t1, double gamma1, double kappa, const DriveSpec& drive,
                      double eps);
double bkc_all_order_snr(int n_sites, double t1, double gamma1, double kappa,
                         const DriveSpec& drive, double eps0);

}  // namespace nhsense::closed_form
