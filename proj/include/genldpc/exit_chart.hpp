#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "genldpc/matrix.hpp"

namespace genldpc {

// Two-segment polynomial/exponential approximation of the mutual-information
// transfer function J(sigma) of a consistent Gaussian LLR and its inverse.
// The constants are data: overridable from a JSON config file, with built-in
// defaults equal to configs/j_approximation.json.
struct JApproximation {
    double sigma_split = 1.6363;
    double poly_a = -0.0421061, poly_b = 0.209252, poly_c = -0.00640081;
    double exp_a = 0.00181491, exp_b = -0.142675, exp_c = -0.0822054, exp_d = 0.0549608;
    double sigma_max = 10.0;
    double i_split = 0.3646;
    double inv_a = 1.09542, inv_b = 0.214217, inv_c = 2.33727;
    double inv_d = 0.706692, inv_e = 0.386013, inv_f = 1.75017;

    static const JApproximation& defaults();
    static JApproximation from_json_file(const std::filesystem::path& path);
};

double j_function(double sigma, const JApproximation& approx = JApproximation::defaults());
double j_inverse(double information, const JApproximation& approx = JApproximation::defaults());

enum class ExitSide { Vnd, Cnd };

struct ExitCurve {
    ExitSide side = ExitSide::Vnd;
    double sigma_ch = 0.0;  // VND only
    std::vector<double> i_a;
    std::vector<double> i_e;
    std::map<int, double> edge_degree_fractions;
};

// Edge-perspective degree fractions from a node-degree histogram.
std::map<int, double> edge_perspective(const std::map<int, long long>& node_degree_hist);

// I_E = sum_d lambda_d J(sqrt((d-1) Jinv(I_A)^2 + sigma_ch^2))
ExitCurve exit_vnd(const std::map<int, double>& edge_lambda, double sigma_ch,
                   const std::vector<double>& i_a_grid,
                   const JApproximation& approx = JApproximation::defaults());

// I_E = sum_d rho_d (1 - J(sqrt(d-1) Jinv(1 - I_A)))
ExitCurve exit_cnd(const std::map<int, double>& edge_rho,
                   const std::vector<double>& i_a_grid,
                   const JApproximation& approx = JApproximation::defaults());

// sigma of the channel LLR for BPSK on bi-AWGN: sigma_ch^2 = 8 R Eb/N0
double channel_llr_sigma(double ebno_db, double rate);

std::vector<double> uniform_grid(int points);  // 0..1 inclusive

// True when the decoding tunnel between the VND and CND curves is open at
// this operating point: the density-evolution style iteration through both
// curves makes progress on every grid point.
bool tunnel_open(const std::map<int, double>& edge_lambda, const std::map<int, double>& edge_rho,
                 double sigma_ch, int grid_points = 1001,
                 const JApproximation& approx = JApproximation::defaults());

// Smallest Eb/N0 (dB) with an open tunnel, via bisection.
double exit_threshold_ebno(const std::map<int, double>& edge_lambda,
                           const std::map<int, double>& edge_rho, double rate,
                           double ebno_lo_db = 0.0, double ebno_hi_db = 6.0,
                           double tol_db = 1e-4,
                           const JApproximation& approx = JApproximation::defaults());

std::string exit_curve_csv(const ExitCurve& curve);

} // namespace genldpc
