#pragma once

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "orthoroots/common.hpp"
#include "orthoroots/measures.hpp"

namespace orthoroots::basis {

/// Three-term recurrence for an orthonormal family p_0..p_N:
///
///   b_{k+1} p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x),   p_{-1} = 0,
///   p_0 = 1 / sqrt(mu(R)).
///
/// Immutable once built; every evaluation routine is safe to call
/// concurrently on a shared table.
class RecurrenceTable {
 public:
  /// `a` holds a_0..a_{N-1}, `b` holds b_1..b_N. Throws InvalidArgument on
  /// size mismatch or a non-positive b_k.
  RecurrenceTable(std::vector<double> a, std::vector<double> b, double p0, std::string weight_id,
                  Interval support = {-1.0, 1.0});

  int degree() const { return static_cast<int>(a_.size()); }
  double a(int k) const { return a_[static_cast<std::size_t>(k)]; }
  /// b_k for 1 <= k <= N.
  double b(int k) const { return b_[static_cast<std::size_t>(k - 1)]; }
  double p0() const { return p0_; }
  const std::vector<double>& a_coeffs() const { return a_; }
  const std::vector<double>& b_coeffs() const { return b_; }
  const std::string& weight_id() const { return weight_id_; }
  /// Hull of the support of the generating measure.
  Interval support() const { return support_; }

  /// max_{i,j <= defect_degree} |<p_i, p_j> - delta_ij|, NaN if never measured.
  double orthonormality_defect() const { return defect_; }
  int defect_degree() const { return defect_degree_; }
  void set_defect(double defect, int degree) {
    defect_ = defect;
    defect_degree_ = degree;
  }

  /// 1 / b_{k+1} for k = 0..N-1 (hot-loop helper).
  const std::vector<double>& inv_b() const { return inv_b_; }
  /// b_{k+1} / b_{k+2} for k = 0..N-2.
  const std::vector<double>& b_ratio() const { return b_ratio_; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> inv_b_;
  std::vector<double> b_ratio_;
  double p0_;
  std::string weight_id_;
  Interval support_;
  double defect_ = std::numeric_limits<double>::quiet_NaN();
  int defect_degree_ = -1;
};

struct BasisEval {
  double x = 0.0;
  int n = 0;
  std::vector<double> values;  ///< p_0(x)..p_n(x)
  std::vector<double> d1;      ///< p_k'(x), filled when order >= 1
  std::vector<double> d2;      ///< p_k''(x), filled when order >= 2
};

/// Christoffel-Darboux sums at a point.
struct KernelValues {
  double A = 0.0;  ///< sum p_i^2
  double B = 0.0;  ///< sum p_i p_i'
  double C = 0.0;  ///< sum (p_i')^2
};

/// Closed-form Jacobi recurrence for w(x) = (1-x)^beta (1+x)^gamma. The
/// first min(N, 64) coefficients are cross-checked against a discretized
/// Stieltjes run on the same weight and must agree to 1e-8.
RecurrenceTable jacobi_recurrence(double beta, double gamma, int N);

/// Closed-form Jacobi coefficients only (no p0, no cross-check).
void jacobi_coefficients(double beta, double gamma, int N, std::vector<double>& a,
                         std::vector<double>& b);

/// Discretized Stieltjes procedure. The rule is doubled until two successive
/// tables agree to 1e-12 (relative to the support width); the defect over
/// degrees <= min(N, 64) on the finest rule is stored in the table.
RecurrenceTable recurrence_from_weight(const measures::WeightSpec& weight, int N,
                                       std::size_t quad_points = 0);

/// Table for any weight: closed form for Jacobi, Stieltjes otherwise.
RecurrenceTable table_for_weight(const measures::WeightSpec& weight, int N);

/// max_{i,j<=degree} |sum_k w_k p_i(x_k) p_j(x_k) - delta_ij| over a rule for mu.
double orthonormality_defect(const RecurrenceTable& table, const measures::MeasureRule& rule,
                             int degree);

BasisEval eval_basis(const RecurrenceTable& table, double x, int n, int order = 0);
std::vector<std::complex<double>> eval_basis(const RecurrenceTable& table, std::complex<double> z,
                                             int n);

/// sum_i c_i p_i(x) by backward (Clenshaw) recurrence.
double eval_combo(const RecurrenceTable& table, std::span<const double> coeffs, double x);
/// Same, for many points at once; `out` must have xs.size() entries.
void eval_combo(const RecurrenceTable& table, std::span<const double> coeffs,
                std::span<const double> xs, std::span<double> out);

KernelValues kernels(const RecurrenceTable& table, double x, int n);

}  // namespace orthoroots::basis
