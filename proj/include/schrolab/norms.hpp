#pragma once
#include <string>
#include <utility>
#include <vector>

#include "schrolab/field.hpp"
#include "schrolab/operators.hpp"
#include "schrolab/parallel.hpp"

namespace schrolab {

// Distribution function of |f| with the exact weak-L^p quasinorm.
// thresholds are the distinct positive values of |f| ascending; measures
// the corresponding mu{|f| > lambda}.
struct DistributionReport {
  double p = 1.0;
  double weak_quasinorm = 0.0;
  std::vector<double> thresholds;
  std::vector<double> measures;
};

struct FitReport {
  double slope = 0.0;
  double intercept = 0.0;  // in log space
  double r_squared = 1.0;
  int npoints = 0;
  double x_min = 0.0, x_max = 0.0;
};

// (sum |f|^p h^n)^{1/p}; p may be infinity (max |f|); p < 1 rejected.
double lp_norm(const Field& f, double p, Exec ex = Exec::parallel);

// Exact: sorting |f| descending as v_1 >= v_2 >= ..., the sup of
// lambda mu{|f|>lambda}^{1/p} over lambda is max_k v_k (k h^n)^{1/p}.
DistributionReport weak_lp_quasinorm(const Field& f, double p);

// sum over d(x, source) > radius of |K(x)| h^n
double annulus_tail_integral(const KernelColumn& K, double radius,
                             Exec ex = Exec::parallel);

// sum |K(x)|^2 (1 + R d(x, source))^s h^n
double weighted_l2_kernel(const KernelColumn& K, double R, double s,
                          Exec ex = Exec::parallel);

// sum |K(x)|^2 d(x, source)^s h^n (plain distance weight)
double kernel_radial_moment(const KernelColumn& K, double s,
                            Exec ex = Exec::parallel);

// Least squares through (log x, log y).  All inputs must be positive;
// ordinates below 1e3 * eps * max(y) are excluded as noise floor; at
// least 3 points must survive.
FitReport fit_power_law(const std::vector<std::pair<double, double>>& points);

// stable CSV row schemas used by the CLI outputs
inline constexpr const char* distribution_csv_header =
    "label,p,weak_quasinorm,l1,l2,linf";
inline constexpr const char* fit_csv_header = "label,slope,intercept,r2,npoints";
std::string distribution_csv_row(const std::string& label, const Field& f,
                                 const DistributionReport& rep);
std::string fit_csv_row(const std::string& label, const FitReport& rep);

namespace ref {
// threshold-scan oracle for the weak quasinorm (exact integer counts)
double weak_lp_quasinorm(const Field& f, double p);
}  // namespace ref

}  // namespace schrolab
