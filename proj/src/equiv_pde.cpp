#include "d1q3/equiv_pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace d1q3 {

PdeCoefficients pde_coefficients(const SchemeParams& p) {
  const double a = p.alpha;
  const double sg = p.sigma;
  const double sp = p.sigma_prime;
  const double l2 = p.lambda * p.lambda;
  const double l3 = l2 * p.lambda;
  const double l4 = l3 * p.lambda;
  const double dt = p.dt;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const double a23 = (a + 2.0) / 3.0;

  PdeCoefficients c;
  c.mu = a23 * l2 * sg * dt;
  c.mu_u = l2 * sg * dt;
  c.xi_u = l3 * (2.0 * sg * sg - 1.0 / 6.0) * dt2;
  c.xi_xu = l3 * (a23 * (1.0 / 6.0 - sg * sg) + (a - 1.0) / 3.0 * (1.0 / 12.0 - sg * sp)) * dt2;
  c.xi_ux = -l3 * a23 * sg * sg * dt2;
  c.zeta_u4 = l4 * sg * (5.0 * sg * sg - 0.75) * dt3;
  c.zeta_xxuu = l4 *
                (-2.0 * a23 * sg * sg * sg +
                 (1.0 - a) / 3.0 * (2.0 * sg * sg * sp + sg * sp * sp - sp / 4.0) +
                 (1.0 + 2.0 * a) / 9.0 * sg) *
                dt3;
  c.zeta_uxxu = l4 *
                (-2.0 * a23 * sg * sg * sg + (1.0 - a) / 3.0 * sg * sg * sp +
                 (7.0 + 5.0 * a) / 36.0 * sg) *
                dt3;
  // sigma^2 inside the bracket: the dispersion relation of the constant-velocity
  // scheme fixes this term, and the block recursion agrees.
  c.zeta_uuxx = l4 * a23 * sg * (1.0 / 6.0 - 2.0 * sg * sg) * dt3;
  c.zeta_x4 = l4 * (a + 2.0) / 9.0 *
              ((a + 2.0) * sg * sg * sg - (1.0 - a) * sg * sg * sp - a / 4.0 * sg) * dt3;
  return c;
}

double alpha3_constant_velocity(const SchemeParams& p) {
  const double U = p.U;
  const double a = p.alpha;
  const double sg = p.sigma;
  const double bracket = -2.0 * (1.0 - 12.0 * sg * sg) * U * U +
                         4.0 * (1.0 - a) * sg * p.sigma_prime + 1.0 + a -
                         8.0 * (2.0 + a) * sg * sg;
  return p.lambda * p.lambda * p.lambda * U / 12.0 * bracket;
}

double cubic_sigma_prime(double U, double alpha, double sigma) {
  if (alpha == 1.0) throw std::domain_error("cubic parameter undefined for alpha = 1");
  if (sigma == 0.0) throw std::domain_error("cubic parameter undefined for sigma = 0");
  return (2.0 * (1.0 - 12.0 * sigma * sigma) * U * U + 8.0 * (2.0 + alpha) * sigma * sigma -
          (1.0 + alpha)) /
         (4.0 * (1.0 - alpha) * sigma);
}

// ---------------------------------------------------------------------------
// word algebra

std::string normalize_word(std::string word) {
  for (auto pos = word.find("xm"); pos != std::string::npos; pos = word.find("xm")) {
    word.replace(pos, 2, "u");
  }
  return word;
}

OperatorPoly::OperatorPoly(double scalar) {
  if (scalar != 0.0) terms_[""] = scalar;
}

OperatorPoly::OperatorPoly(const std::string& word, double coeff) {
  if (coeff != 0.0) terms_[normalize_word(word)] = coeff;
}

double OperatorPoly::coefficient(const std::string& word) const {
  auto it = terms_.find(normalize_word(word));
  return it == terms_.end() ? 0.0 : it->second;
}

void OperatorPoly::add(const std::string& word, double coeff) {
  auto& slot = terms_[word];
  slot += coeff;
  if (slot == 0.0) terms_.erase(word);
}

OperatorPoly OperatorPoly::pruned(double tol) const {
  double biggest = 0.0;
  for (const auto& [w, c] : terms_) biggest = std::max(biggest, std::abs(c));
  OperatorPoly out;
  for (const auto& [w, c] : terms_) {
    if (std::abs(c) > tol * biggest) out.terms_[w] = c;
  }
  return out;
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& other) {
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& other) {
  for (const auto& [w, c] : other.terms_) add(w, -c);
  return *this;
}

OperatorPoly& OperatorPoly::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, v] : terms_) v *= c;
  return *this;
}

OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b) {
  OperatorPoly out;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) out.add(normalize_word(wa + wb), ca * cb);
  }
  return out;
}

std::string OperatorPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (!w.empty()) os << "*" << w;
  }
  return os.str();
}

OperatorMatrixPoly::OperatorMatrixPoly(int r, int c, std::vector<OperatorPoly> e)
    : rows(r), cols(c), entries(std::move(e)) {
  if (static_cast<int>(entries.size()) != r * c) {
    throw std::invalid_argument("operator matrix entry count does not match its shape");
  }
}

OperatorMatrixPoly operator*(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b) {
  if (a.cols != b.rows) throw std::invalid_argument("operator matrix shape mismatch");
  OperatorMatrixPoly out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      for (int k = 0; k < a.cols; ++k) out(i, j) += a(i, k) * b(k, j);
    }
  }
  return out;
}

namespace {

void require_same_shape(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw std::invalid_argument("operator matrix shape mismatch");
  }
}

}  // namespace

OperatorMatrixPoly operator+(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b) {
  require_same_shape(a, b);
  OperatorMatrixPoly out = a;
  for (size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += b.entries[i];
  return out;
}

OperatorMatrixPoly operator-(const OperatorMatrixPoly& a, const OperatorMatrixPoly& b) {
  require_same_shape(a, b);
  OperatorMatrixPoly out = a;
  for (size_t i = 0; i < out.entries.size(); ++i) out.entries[i] -= b.entries[i];
  return out;
}

OperatorMatrixPoly operator*(double c, const OperatorMatrixPoly& a) {
  OperatorMatrixPoly out = a;
  for (auto& e : out.entries) e *= c;
  return out;
}

OperatorMatrixPoly operator*(const OperatorMatrixPoly& a, const OperatorPoly& p) {
  OperatorMatrixPoly out = a;
  for (auto& e : out.entries) e = e * p;
  return out;
}

OperatorMatrixPoly operator*(const OperatorPoly& p, const OperatorMatrixPoly& a) {
  OperatorMatrixPoly out = a;
  for (auto& e : out.entries) e = p * e;
  return out;
}

// ---------------------------------------------------------------------------
// ABCD blocks and recursion

std::array<std::array<double, 3>, 3> transport_matrix(double lambda) {
  const double l = lambda;
  Eigen::Matrix3d M;
  M << 1, 1, 1, l, 0, -l, l * l, -2 * l * l, l * l;
  const Eigen::Matrix3d Lam = M * Eigen::Vector3d(l, 0, -l).asDiagonal() * M.inverse();
  std::array<std::array<double, 3>, 3> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // entries are rational multiples of powers of lambda; scrub rounding noise
      double v = Lam(i, j);
      if (std::abs(v) < 1e-14 * (1.0 + l * l)) v = 0.0;
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
    }
  }
  return out;
}

AbcdBlocks abcd_blocks(const SchemeParams& p) {
  const double l = p.lambda;
  const auto Lam = transport_matrix(l);
  AbcdBlocks b;
  b.lambda = l;
  b.alpha = p.alpha;
  b.sigma = p.sigma;
  b.sigma_prime = p.sigma_prime;
  b.Abar = OperatorMatrixPoly(1, 1, {Lam[0][0]});
  b.Bbar = OperatorMatrixPoly(1, 2, {Lam[0][1], Lam[0][2]});
  b.Cbar = OperatorMatrixPoly(2, 1, {Lam[1][0], Lam[2][0]});
  b.Dbar = OperatorMatrixPoly(2, 2, {Lam[1][1], Lam[1][2], Lam[2][1], Lam[2][2]});
  b.Sigma = OperatorMatrixPoly(2, 2, {p.sigma, 0.0, 0.0, p.sigma_prime});
  b.E = OperatorMatrixPoly(2, 1, {OperatorPoly("m", l), OperatorPoly(l * l * p.alpha)});
  b.delta = OperatorPoly("x") * b.E;
  b.B2bar = b.Abar * b.Bbar + b.Bbar * b.Dbar;
  b.D2bar = b.Cbar * b.Bbar + b.Dbar * b.Dbar;
  return b;
}

namespace {

OperatorPoly scalar_of(const OperatorMatrixPoly& m) {
  if (m.rows != 1 || m.cols != 1) throw std::logic_error("expected a 1x1 operator block");
  return m(0, 0);
}

}  // namespace

RecursionTerms abcd_recursion(const SchemeParams& p, int order) {
  if (order < 1 || order > 4) throw std::invalid_argument("recursion order must lie in 1..4");
  const AbcdBlocks b = abcd_blocks(p);
  const OperatorPoly x("x");
  const OperatorPoly xx("xx");
  const OperatorPoly xxx("xxx");
  const auto& A = b.Abar;
  const auto& B = b.Bbar;
  const auto& C = b.Cbar;
  const auto& D = b.Dbar;
  const auto& S = b.Sigma;
  const auto& E = b.E;

  RecursionTerms r;
  auto& al = r.alpha;
  auto& be = r.beta;

  al[1] = scalar_of(A * x + B * b.delta);
  be[1] = E * al[1] - (C * x + D * b.delta);
  if (order == 1) return r;

  al[2] = scalar_of(B * S * (x * be[1]));
  be[2] = S * be[1] * al[1] + E * al[2] - D * S * (x * be[1]);
  if (order == 2) return r;

  al[3] = scalar_of(B * S * (x * be[2]) + (1.0 / 12.0) * (b.B2bar * (xx * be[1])) -
                    (1.0 / 6.0) * (B * (x * be[1]) * al[1]));
  be[3] = S * be[1] * al[2] + E * al[3] - D * S * (x * be[2]) + S * be[2] * al[1] +
          (1.0 / 6.0) * (D * (x * be[1]) * al[1]) - (1.0 / 12.0) * (be[1] * (al[1] * al[1])) -
          (1.0 / 12.0) * (b.D2bar * (xx * be[1]));
  if (order == 3) return r;

  const OperatorPoly Bdelta = scalar_of(B * b.delta);
  al[4] = scalar_of(B * S * (x * be[3]) + 0.25 * (b.B2bar * (xx * be[2])) +
                    (1.0 / 6.0) * (B * b.D2bar * S * (xxx * be[1])) -
                    (1.0 / 6.0) * (A * B * (xx * be[2])) -
                    (1.0 / 6.0) * (B * S * (x * be[1]) * (al[1] * al[1])));
  al[4] -= (1.0 / 6.0) * (Bdelta * al[1] * al[2]);
  al[4] -= (1.0 / 6.0) * (Bdelta * al[2] * al[1]);
  return r;
}

OperatorPoly abcd_recursion_oracle(const SchemeParams& params, int order) {
  return abcd_recursion(params, order).alpha[static_cast<size_t>(order)].pruned();
}

OperatorPoly closed_form_alpha(const SchemeParams& p, int order) {
  const double l = p.lambda;
  const double a = p.alpha;
  const double sg = p.sigma;
  const double sp = p.sigma_prime;
  const double a23 = (a + 2.0) / 3.0;
  switch (order) {
    case 1:
      return OperatorPoly("u", l);
    case 2:
      return l * l * sg * (OperatorPoly("uu") - OperatorPoly("xx", a23));
    case 3: {
      OperatorPoly out = OperatorPoly("uuu", 2.0 * sg * sg - 1.0 / 6.0) +
                         OperatorPoly("xxu", a23 * (1.0 / 6.0 - sg * sg) +
                                                 (a - 1.0) / 3.0 * (1.0 / 12.0 - sg * sp)) -
                         OperatorPoly("uxx", a23 * sg * sg);
      return l * l * l * out;
    }
    case 4: {
      const double s3 = sg * sg * sg;
      OperatorPoly out =
          OperatorPoly("xxxx", (a + 2.0) / 9.0 * ((a + 2.0) * s3 - (1.0 - a) * sg * sg * sp -
                                                  a / 4.0 * sg)) +
          OperatorPoly("xxuu", -2.0 * a23 * s3 +
                                   (1.0 - a) / 3.0 * (2.0 * sg * sg * sp + sg * sp * sp - sp / 4.0) +
                                   (1.0 + 2.0 * a) / 9.0 * sg) +
          OperatorPoly("uxxu", -2.0 * a23 * s3 + (1.0 - a) / 3.0 * sg * sg * sp +
                                   (7.0 + 5.0 * a) / 36.0 * sg) +
          OperatorPoly("uuxx", a23 * sg * (1.0 / 6.0 - 2.0 * sg * sg)) +
          OperatorPoly("uuuu", sg * (5.0 * sg * sg - 0.75));
      return l * l * l * l * out;
    }
    default:
      throw std::invalid_argument("closed-form alpha is available for orders 1..4");
  }
}

std::array<OperatorPoly, 2> closed_form_beta(const SchemeParams& p, int order) {
  const double l = p.lambda;
  const double l2 = l * l;
  const double a = p.alpha;
  const double sg = p.sigma;
  const double sp = p.sigma_prime;
  const double a23 = (a + 2.0) / 3.0;
  switch (order) {
    case 1:
      return {l2 * (OperatorPoly("mu") - OperatorPoly("x", a23)),
              OperatorPoly("u", l2 * l * (a - 1.0))};
    case 2: {
      OperatorPoly J = OperatorPoly("muu", 2.0 * sg) -
                       OperatorPoly("xu", a23 * sg + (a - 1.0) / 3.0 * sp) -
                       OperatorPoly("mxx", a23 * sg);
      OperatorPoly e = (a - 1.0) * (OperatorPoly("uu", sg + sp) - OperatorPoly("xx", a23 * sg));
      return {l2 * l * J, l2 * l2 * e};
    }
    case 3: {
      OperatorPoly J =
          OperatorPoly("xxx", (a + 2.0) / 9.0 * (-(1.0 - a) * sg * sp + (a + 2.0) * sg * sg + 0.25)) +
          OperatorPoly("mxxu", -2.0 * a23 * sg * sg + (1.0 - a) / 3.0 * sg * sp + (1.0 + a) / 12.0) -
          OperatorPoly("muxx", 2.0 * a23 * sg * sg) +
          OperatorPoly("xuu", -2.0 * a23 * sg * sg +
                                  (1.0 - a) / 3.0 * (2.0 * sg * sp + sp * sp - 0.25)) +
          OperatorPoly("muuu", 5.0 * sg * sg - 0.25);
      OperatorPoly e =
          OperatorPoly("xxu", (1.0 - a) / 3.0 *
                                  ((a + 2.0) * sg * sg + (1.0 + 2.0 * a) * sg * sp - (1.0 + a) / 4.0)) +
          OperatorPoly("uxx", (1.0 - a) * a23 * sg * (sg + sp)) -
          OperatorPoly("uuu", (1.0 - a) * (2.0 * sg * sg + 2.0 * sg * sp + sp * sp - 0.25));
      return {l2 * l2 * J, l2 * l2 * l * e};
    }
    default:
      throw std::invalid_argument("closed-form beta is available for orders 1..3");
  }
}

std::vector<WordTerm> operator_A_words(const PdeCoefficients& c, double lambda, int order) {
  if (order < 1 || order > 4) throw std::invalid_argument("PDE order must lie in 1..4");
  std::vector<WordTerm> w{{lambda, "u"}};
  if (order >= 2) {
    w.push_back({-c.mu, "xx"});
    w.push_back({c.mu_u, "uu"});
  }
  if (order >= 3) {
    w.push_back({c.xi_u, "uuu"});
    w.push_back({c.xi_xu, "xxu"});
    w.push_back({c.xi_ux, "uxx"});
  }
  if (order >= 4) {
    w.push_back({c.zeta_u4, "uuuu"});
    w.push_back({c.zeta_xxuu, "xxuu"});
    w.push_back({c.zeta_uxxu, "uxxu"});
    w.push_back({c.zeta_uuxx, "uuxx"});
    w.push_back({c.zeta_x4, "xxxx"});
  }
  return w;
}

std::vector<WordTerm> operator_A_infinity_words(const PdeCoefficients& c, double lambda,
                                                int order) {
  if (order < 1 || order > 4) throw std::invalid_argument("PDE order must lie in 1..4");
  // Each word of A loses its leading d/dx: 'x' drops, 'u' = x m becomes 'm'.
  // The -mu d2/dx2 diffusion already enters at first order.
  auto strip = [](const std::string& word) {
    return word[0] == 'x' ? word.substr(1) : "m" + word.substr(1);
  };
  std::vector<WordTerm> full = operator_A_words(c, lambda, order == 1 ? 2 : order);
  std::vector<WordTerm> out;
  for (const auto& t : full) {
    if (order == 1 && t.word == "uu") continue;
    out.push_back({t.coeff, strip(t.word)});
  }
  return out;
}

}  // namespace d1q3
