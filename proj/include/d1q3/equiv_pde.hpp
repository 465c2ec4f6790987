#pragma once

// Equivalent-PDE coefficients of the D1Q3 scheme with inhomogeneous
// advection, the cubic relaxation parameter, and a symbolic recursion that
// rebuilds the alpha_j / beta_j operators from the ABCD block structure.
//
// Operator words are strings over three letters, read left to right as a
// composition (rightmost acts first):
//   'x'  d/dx
//   'm'  multiplication by U cos(kx) (or by U for a constant field)
//   'u'  d_u = d/dx o m
// so "xm" and "u" denote the same operator; normalize() rewrites the former.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "d1q3/core.hpp"

namespace d1q3 {

/// The ten coefficients, with dt^(j-1) already folded in (order-2 entries
/// carry dt, order-3 entries dt^2, order-4 entries dt^3).
struct PdeCoefficients {
  double mu = 0.0;
  double mu_u = 0.0;
  double xi_u = 0.0;
  double xi_xu = 0.0;
  double xi_ux = 0.0;
  double zeta_u4 = 0.0;
  double zeta_xxuu = 0.0;
  double zeta_uxxu = 0.0;
  double zeta_uuxx = 0.0;
  double zeta_x4 = 0.0;
};

[[nodiscard]] PdeCoefficients pde_coefficients(const SchemeParams& params);

/// Coefficient of d^3/dx^3 in alpha_3 when the velocity is the constant lambda*U.
[[nodiscard]] double alpha3_constant_velocity(const SchemeParams& params);

/// sigma' that cancels alpha_3 for a constant velocity.  Throws
/// std::domain_error for alpha = 1 or sigma = 0.
[[nodiscard]] double cubic_sigma_prime(double U, double alpha, double sigma);

/// Linear combination of operator words.
class OperatorPoly {
 public:
  OperatorPoly() = default;
  OperatorPoly(double scalar);  // NOLINT: scalars promote to the empty word
  OperatorPoly(const std::string& word, double coeff = 1.0);

  [[nodiscard]] const std::map<std::string, double>& terms() const { return terms_; }
  [[nodiscard]] double coefficient(const std::string& word) const;
  [[nodiscard]] bool empty() const { return terms_.empty(); }

  /// Drops terms with |coeff| <= tol * (largest |coeff|).
  [[nodiscard]] OperatorPoly pruned(double tol = 1e-14) const;

  OperatorPoly& operator+=(const OperatorPoly& other);
  OperatorPoly& operator-=(const OperatorPoly& other);
  OperatorPoly& operator*=(double c);

  friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
  friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
  friend OperatorPoly operator*(double c, OperatorPoly a) { return a *= c; }
  /// Composition: (a*b) phi = a(b(phi)).
  friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b);

  [[nodiscard]] std::string to_string() const;

 private:
  void add(const std::string& word, double coeff);
  std::map<std::string, double> terms_;
};

/// Rewrites every "xm" into "u" until no occurrence remains.
[[nodiscard]] std::string normalize_word(std::string word);

/// Small dense matrix of operator polynomials, used for the block algebra.
struct OperatorMatrixPoly {
  int rows = 0;
  int cols = 0;
  std::vector<OperatorPoly> entries;

  OperatorMatrixPoly() = default;
  OperatorMatrixPoly(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r * c)) {}
  OperatorMatrixPoly(int r, int c, std::vector<OperatorPoly> e);

  OperatorPoly& operator()(int i, int j) { return entries[static_cast<size_t>(i * cols + j)]; }
  const OperatorPoly& operator()(int i, int j) const {
    return entries[static_cast<size_t>(i * cols + j)];
  }
};

OperatorMatrixPoly operator*(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b);
OperatorMatrixPoly operator+(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b);
OperatorMatrixPoly operator-(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b);
OperatorMatrixPoly operator*(double c, const OperatorMatrixPoly& a);
/// Entrywise composition with a scalar operator on the right or left.
OperatorMatrixPoly operator*(const OperatorMatrixPoly& a, const OperatorPoly& p);
OperatorMatrixPoly operator*(const OperatorPoly& p, const OperatorMatrixPoly& a);

/// D1Q3 blocks of the moment-space transport operator after factoring d/dx.
struct AbcdBlocks {
  double lambda = 1.0;
  double alpha = -1.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;

  OperatorMatrixPoly Abar;   // 1x1
  OperatorMatrixPoly Bbar;   // 1x2
  OperatorMatrixPoly Cbar;   // 2x1
  OperatorMatrixPoly Dbar;   // 2x2
  OperatorMatrixPoly Sigma;  // 2x2
  OperatorMatrixPoly E;      // 2x1, equilibrium as multiplication operators
  OperatorMatrixPoly delta;  // 2x1, d/dx o E
  OperatorMatrixPoly B2bar;  // Abar Bbar + Bbar Dbar
  OperatorMatrixPoly D2bar;  // Cbar Bbar + Dbar^2
};

[[nodiscard]] AbcdBlocks abcd_blocks(const SchemeParams& params);

/// Full 3x3 transport matrix Lambda = M diag(lambda, 0, -lambda) M^-1 in the
/// (rho, J, e) moment basis, each entry the scalar factor of d/dx.
[[nodiscard]] std::array<std::array<double, 3>, 3> transport_matrix(double lambda);

struct RecursionTerms {
  std::array<OperatorPoly, 5> alpha;  // alpha[1..4]
  std::array<OperatorMatrixPoly, 4> beta;  // beta[1..3], each 2x1 (J, e)
};

/// Builds alpha_1..alpha_order (and beta_1..beta_{order-1}) from the block
/// recursion.  order must lie in 1..4.
[[nodiscard]] RecursionTerms abcd_recursion(const SchemeParams& params, int order);

/// alpha_order from the recursion.
[[nodiscard]] OperatorPoly abcd_recursion_oracle(const SchemeParams& params, int order);

/// Hard-wired closed forms of alpha_1..alpha_4 and beta_1..beta_3, as word
/// polynomials without the dt factors.
[[nodiscard]] OperatorPoly closed_form_alpha(const SchemeParams& params, int order);
[[nodiscard]] std::array<OperatorPoly, 2> closed_form_beta(const SchemeParams& params, int order);

/// A word list (coefficient, word) describing the operator A at a given
/// order, with dt folded in.  Also the once-integrated A_infinity.
struct WordTerm {
  double coeff;
  std::string word;
};

[[nodiscard]] std::vector<WordTerm> operator_A_words(const PdeCoefficients& c, double lambda,
                                                     int order);
[[nodiscard]] std::vector<WordTerm> operator_A_infinity_words(const PdeCoefficients& c,
                                                              double lambda, int order);

}  // namespace d1q3
