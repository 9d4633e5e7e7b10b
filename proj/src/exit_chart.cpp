#include "genldpc/exit_chart.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace genldpc {

const JApproximation& JApproximation::defaults() {
    static const JApproximation instance{};
    return instance;
}

JApproximation JApproximation::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open J approximation config: " + path.string());
    nlohmann::json j;
    in >> j;
    JApproximation a;
    a.sigma_split = j.at("sigma_split").get<double>();
    a.poly_a = j.at("poly").at(0).get<double>();
    a.poly_b = j.at("poly").at(1).get<double>();
    a.poly_c = j.at("poly").at(2).get<double>();
    a.exp_a = j.at("exp").at(0).get<double>();
    a.exp_b = j.at("exp").at(1).get<double>();
    a.exp_c = j.at("exp").at(2).get<double>();
    a.exp_d = j.at("exp").at(3).get<double>();
    a.sigma_max = j.at("sigma_max").get<double>();
    a.i_split = j.at("i_split").get<double>();
    a.inv_a = j.at("inv_poly").at(0).get<double>();
    a.inv_b = j.at("inv_poly").at(1).get<double>();
    a.inv_c = j.at("inv_poly").at(2).get<double>();
    a.inv_d = j.at("inv_log").at(0).get<double>();
    a.inv_e = j.at("inv_log").at(1).get<double>();
    a.inv_f = j.at("inv_log").at(2).get<double>();
    return a;
}

double j_function(double sigma, const JApproximation& a) {
    sigma = std::abs(sigma);
    if (sigma >= a.sigma_max) return 1.0;
    double value;
    if (sigma <= a.sigma_split) {
        value = ((a.poly_a * sigma + a.poly_b) * sigma + a.poly_c) * sigma;
    } else {
        value = 1.0 - std::exp(((a.exp_a * sigma + a.exp_b) * sigma + a.exp_c) * sigma + a.exp_d);
    }
    return std::clamp(value, 0.0, 1.0);
}

double j_inverse(double information, const JApproximation& a) {
    const double i = std::clamp(information, 0.0, 1.0 - 1e-12);
    if (i <= a.i_split) return a.inv_a * i * i + a.inv_b * i + a.inv_c * std::sqrt(i);
    return -a.inv_d * std::log(a.inv_e * (1.0 - i)) + a.inv_f * i;
}

std::map<int, double> edge_perspective(const std::map<int, long long>& node_degree_hist) {
    double total_edges = 0.0;
    for (const auto& [degree, count] : node_degree_hist)
        total_edges += static_cast<double>(degree) * static_cast<double>(count);
    if (total_edges <= 0.0) throw std::invalid_argument("degree histogram has no edges");
    std::map<int, double> fractions;
    for (const auto& [degree, count] : node_degree_hist) {
        if (degree <= 0) continue;
        fractions[degree] =
            static_cast<double>(degree) * static_cast<double>(count) / total_edges;
    }
    return fractions;
}

namespace {

void check_normalized(const std::map<int, double>& fractions) {
    double sum = 0.0;
    for (const auto& [degree, fraction] : fractions) {
        if (degree < 1 || fraction < 0.0)
            throw std::invalid_argument("degree fractions must be nonnegative, degrees >= 1");
        sum += fraction;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("degree fractions must sum to 1");
}

} // namespace

ExitCurve exit_vnd(const std::map<int, double>& edge_lambda, double sigma_ch,
                   const std::vector<double>& i_a_grid, const JApproximation& approx) {
    check_normalized(edge_lambda);
    ExitCurve curve;
    curve.side = ExitSide::Vnd;
    curve.sigma_ch = sigma_ch;
    curve.edge_degree_fractions = edge_lambda;
    curve.i_a = i_a_grid;
    curve.i_e.reserve(i_a_grid.size());
    for (double ia : i_a_grid) {
        const double sigma_a = j_inverse(ia, approx);
        double ie = 0.0;
        for (const auto& [degree, fraction] : edge_lambda)
            ie += fraction *
                  j_function(std::sqrt((degree - 1) * sigma_a * sigma_a + sigma_ch * sigma_ch),
                             approx);
        curve.i_e.push_back(ie);
    }
    return curve;
}

ExitCurve exit_cnd(const std::map<int, double>& edge_rho, const std::vector<double>& i_a_grid,
                   const JApproximation& approx) {
    check_normalized(edge_rho);
    ExitCurve curve;
    curve.side = ExitSide::Cnd;
    curve.edge_degree_fractions = edge_rho;
    curve.i_a = i_a_grid;
    curve.i_e.reserve(i_a_grid.size());
    for (double ia : i_a_grid) {
        const double sigma_rev = j_inverse(1.0 - ia, approx);
        double ie = 0.0;
        for (const auto& [degree, fraction] : edge_rho)
            ie += fraction * (1.0 - j_function(std::sqrt(static_cast<double>(degree - 1)) * sigma_rev,
                                               approx));
        curve.i_e.push_back(ie);
    }
    return curve;
}

double channel_llr_sigma(double ebno_db, double rate) {
    return std::sqrt(8.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    std::vector<double> grid(points);
    for (int p = 0; p < points; ++p) grid[p] = static_cast<double>(p) / (points - 1);
    return grid;
}

bool tunnel_open(const std::map<int, double>& edge_lambda, const std::map<int, double>& edge_rho,
                 double sigma_ch, int grid_points, const JApproximation& approx) {
    check_normalized(edge_lambda);
    check_normalized(edge_rho);
    // one sweep I -> CND(VND(I)) must gain strictly on every interior point
    for (int p = 0; p < grid_points - 1; ++p) {
        const double ia = static_cast<double>(p) / (grid_points - 1);
        const double sigma_a = j_inverse(ia, approx);
        double vnd = 0.0;
        for (const auto& [degree, fraction] : edge_lambda)
            vnd += fraction *
                   j_function(std::sqrt((degree - 1) * sigma_a * sigma_a + sigma_ch * sigma_ch),
                              approx);
        const double sigma_rev = j_inverse(1.0 - vnd, approx);
        double cnd = 0.0;
        for (const auto& [degree, fraction] : edge_rho)
            cnd += fraction *
                   (1.0 - j_function(std::sqrt(static_cast<double>(degree - 1)) * sigma_rev, approx));
        if (cnd <= ia) return false;
    }
    return true;
}

double exit_threshold_ebno(const std::map<int, double>& edge_lambda,
                           const std::map<int, double>& edge_rho, double rate, double ebno_lo_db,
                           double ebno_hi_db, double tol_db, const JApproximation& approx) {
    const auto open_at = [&](double ebno_db) {
        return tunnel_open(edge_lambda, edge_rho, channel_llr_sigma(ebno_db, rate), 1001, approx);
    };
    if (open_at(ebno_lo_db)) return ebno_lo_db;
    if (!open_at(ebno_hi_db))
        throw std::runtime_error("exit_threshold_ebno: tunnel closed on the whole bracket");
    double lo = ebno_lo_db, hi = ebno_hi_db;
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        (open_at(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string exit_curve_csv(const ExitCurve& curve) {
    std::ostringstream out;
    out.precision(10);
    out << "i_a,i_e\n";
    for (std::size_t p = 0; p < curve.i_a.size(); ++p)
        out << curve.i_a[p] << "," << curve.i_e[p] << "\n";
    return out.str();
}

} // namespace genldpc
