#include "d1q3/modes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace d1q3 {

namespace {

using cd = std::complex<double>;

// Bordered matrix [[A - I, 1], [1^T, 0]]; its solves stay on the zero-mass
// subspace (the density functional is a left fixed vector of A).
Eigen::SparseMatrix<double> bordered(const IterationMatrix& A) {
  const int n = 3 * A.N;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(A.sparse.nonZeros() + 3 * n));
  for (int col = 0; col < A.sparse.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A.sparse, col); it; ++it) {
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, -1.0);
    t.emplace_back(i, n, 1.0);
    t.emplace_back(n, i, 1.0);
  }
  Eigen::SparseMatrix<double> B(n + 1, n + 1);
  B.setFromTriplets(t.begin(), t.end());
  B.makeCompressed();
  return B;
}

double mass_fraction(const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd rho = state_density(v);
  const double l1 = rho.cwiseAbs().sum();
  return l1 > 0.0 ? std::abs(rho.sum()) / l1 : 0.0;
}

ModeResult finish_mode(cd mu, const Eigen::VectorXcd& vec, const SchemeParams& p,
                       EigenMethod method) {
  ModeResult r;
  r.mu_eig = mu;
  r.method = method;
  r.complex_pair = std::abs(mu.imag()) > 1e-12 * std::abs(mu);
  r.gamma_rate = std::log(std::abs(mu)) / p.dt;
  r.Gamma = -r.gamma_rate / (discrete_diffusivity(p) * p.k * p.k);

  Eigen::VectorXcd rho = state_density(vec);
  // rotate the complex phase so the largest entry is real, then keep the real part
  Eigen::Index imax = 0;
  rho.cwiseAbs().maxCoeff(&imax);
  if (std::abs(rho[imax]) > 0.0) rho *= std::conj(rho[imax]) / std::abs(rho[imax]);
  std::vector<double> d(static_cast<size_t>(rho.size()));
  double sup = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    d[static_cast<size_t>(i)] = rho[i].real();
    sup = std::max(sup, std::abs(rho[i].real()));
  }
  if (sup > 0.0) {
    for (auto& v : d) v /= sup;
  }
  // sign convention: non-negative around x = 0
  double probe = d[0];
  if (std::abs(probe) < 1e-8) {
    probe = 0.0;
    for (size_t i = 0; i < d.size() / 8 + 1; ++i) probe += d[i];
  }
  if (probe < 0.0) {
    for (auto& v : d) v = -v;
  }
  r.mode_density = std::move(d);
  return r;
}

Eigen::VectorXcd inverse_iteration(const IterationMatrix& A, cd mu) {
  const int n = 3 * A.N;
  Eigen::SparseMatrix<cd> S = A.sparse.cast<cd>();
  const cd shift = mu + cd(1e-11, 1e-11) * std::max(1.0, std::abs(mu));
  Eigen::SparseMatrix<cd> I(n, n);
  I.setIdentity();
  S -= shift * I;
  S.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) throw std::runtime_error("inverse iteration factorization failed");
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cd(dist(gen), dist(gen));
  v.normalize();
  for (int it = 0; it < 4; ++it) {
    v = lu.solve(v);
    v.normalize();
  }
  return v;
}

}  // namespace

double discrete_diffusivity(const SchemeParams& p) {
  return p.lambda * p.dx * p.sigma * (p.alpha + 2.0) / 3.0;
}

IterationMatrix build_iteration_matrix(const SchemeParams& p, const EquilibriumSpec& eq, int cap) {
  const int N = p.N;
  if (3 * N > cap) {
    throw std::invalid_argument("iteration matrix of size " + std::to_string(3 * N) +
                                " exceeds the cap " + std::to_string(cap));
  }
  const auto mm = MomentMatrix::make(p.lambda);
  const auto u = velocity_field(eq, p);
  const double l2 = p.lambda * p.lambda;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(27 * N));
  for (int i = 0; i < N; ++i) {
    // relaxation in moment space at site i
    const double R[3][3] = {{1.0, 0.0, 0.0},
                            {p.s * u[static_cast<size_t>(i)], 1.0 - p.s, 0.0},
                            {p.s_prime * l2 * eq.alpha, 0.0, 1.0 - p.s_prime}};
    double K[3][3];  // Minv R M
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) {
          for (int d = 0; d < 3; ++d) acc += mm.Minv[a][c] * R[c][d] * mm.M[d][b];
        }
        K[a][b] = acc;
      }
    }
    const int dest[3] = {(i + 1) % N, i, (i + N - 1) % N};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (K[a][b] != 0.0) t.emplace_back(3 * dest[a] + a, 3 * i + b, K[a][b]);
      }
    }
  }
  IterationMatrix A;
  A.N = N;
  A.sparse.resize(3 * N, 3 * N);
  A.sparse.setFromTriplets(t.begin(), t.end());
  A.sparse.makeCompressed();
  return A;
}

Eigen::VectorXd flatten(const ParticleField& f) {
  const Eigen::Index N = static_cast<Eigen::Index>(f.size());
  Eigen::VectorXd v(3 * N);
  for (Eigen::Index i = 0; i < N; ++i) {
    v[3 * i] = f.plus[static_cast<size_t>(i)];
    v[3 * i + 1] = f.zero[static_cast<size_t>(i)];
    v[3 * i + 2] = f.minus[static_cast<size_t>(i)];
  }
  return v;
}

ParticleField unflatten(const Eigen::VectorXd& v) {
  if (v.size() % 3 != 0) throw std::invalid_argument("state length is not a multiple of 3");
  const size_t N = static_cast<size_t>(v.size() / 3);
  ParticleField f(N);
  for (size_t i = 0; i < N; ++i) {
    f.plus[i] = v[static_cast<Eigen::Index>(3 * i)];
    f.zero[i] = v[static_cast<Eigen::Index>(3 * i + 1)];
    f.minus[i] = v[static_cast<Eigen::Index>(3 * i + 2)];
  }
  return f;
}

Eigen::VectorXcd state_density(const Eigen::VectorXcd& v) {
  const Eigen::Index N = v.size() / 3;
  Eigen::VectorXcd rho(N);
  for (Eigen::Index i = 0; i < N; ++i) rho[i] = v[3 * i] + v[3 * i + 1] + v[3 * i + 2];
  return rho;
}

KrylovPairs shift_invert_arnoldi(const IterationMatrix& A, const KrylovOptions& opt) {
  const int n = 3 * A.N;
  const Eigen::SparseMatrix<double> B = bordered(A);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw std::runtime_error("bordered factorization failed");

  auto T = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs.head(n) = v;
    return Eigen::VectorXd(lu.solve(rhs).head(n));
  };

  const int m = std::min(opt.subspace, n - 1);
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) start[i] = dist(gen);
  start = T(start);  // lands on the zero-mass subspace

  KrylovPairs out;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    V.col(0) = start.normalized();
    int built = m;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = T(V.col(j));
      for (int pass = 0; pass < 2; ++pass) {  // reorthogonalize once
        const Eigen::VectorXd h = V.leftCols(j + 1).transpose() * w;
        w -= V.leftCols(j + 1) * h;
        H.col(j).head(j + 1) += h;
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) < 1e-14) {
        built = j + 1;
        break;
      }
      V.col(j + 1) = w / H(j + 1, j);
    }
    const Eigen::MatrixXd Hm = H.topLeftCorner(built, built);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hm);
    const Eigen::VectorXcd theta = es.eigenvalues();
    const Eigen::MatrixXcd Y = es.eigenvectors();

    std::vector<int> order(static_cast<size_t>(built));
    for (int i = 0; i < built; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(theta[a]) > std::abs(theta[b]); });

    const int want = std::min(opt.wanted, built);
    out = {};
    bool all_converged = true;
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < want; ++r) {
      const int idx = order[static_cast<size_t>(r)];
      const cd mu = 1.0 + 1.0 / theta[idx];
      Eigen::VectorXcd x = V.leftCols(built).cast<cd>() * Y.col(idx);
      x.normalize();
      const Eigen::VectorXcd Ax = A.sparse.cast<cd>() * x;
      const double res = (Ax - mu * x).norm();
      out.values.push_back(mu);
      out.vectors.push_back(x);
      out.residuals.push_back(res);
      if (res > opt.tol) all_converged = false;
      next += x.real() + x.imag();
    }
    if (all_converged || built < m) break;
    start = next;
  }
  return out;
}

ModeResult leading_nontrivial_eigen(const IterationMatrix& A, const SchemeParams& params,
                                    EigenMethod method) {
  if (method == EigenMethod::Krylov) {
    const KrylovPairs kp = shift_invert_arnoldi(A);
    if (kp.values.empty()) throw std::runtime_error("Arnoldi returned no Ritz pairs");
    size_t best = 0;
    for (size_t i = 1; i < kp.values.size(); ++i) {
      if (std::abs(kp.values[i]) > std::abs(kp.values[best]) + 1e-15) best = i;
    }
    return finish_mode(kp.values[best], kp.vectors[best], params, method);
  }

  const Eigen::MatrixXd D = A.dense();
  Eigen::EigenSolver<Eigen::MatrixXd> es(D, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return std::abs(ev[a]) > std::abs(ev[b]); });

  for (Eigen::Index idx : order) {
    const cd mu = ev[idx];
    const Eigen::VectorXcd vec = inverse_iteration(A, mu);
    if (mass_fraction(vec) > 1e-6) continue;  // conservation mode
    return finish_mode(mu, vec, params, method);
  }
  throw std::runtime_error("no non-conserved eigenmode found");
}

ParticleField stationary_state_direct(const IterationMatrix& A, double mass) {
  const int n = 3 * A.N;
  const Eigen::SparseMatrix<double> B = bordered(A);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw std::runtime_error("bordered factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = mass;
  Eigen::VectorXd sol = lu.solve(rhs);
  // one step of iterative refinement
  const Eigen::VectorXd r = rhs - B * sol;
  sol += lu.solve(r);
  return unflatten(sol.head(n));
}

std::vector<GammaCell> gamma_surface(const SchemeParams& base, const std::vector<double>& U_list,
                                     const std::vector<int>& N_list, EigenMethod method,
                                     int jobs) {
  std::vector<GammaCell> cells;
  for (double U : U_list) {
    for (int N : N_list) cells.push_back({U, N, {}, {}});
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < cells.size(); i = next++) {
      auto& c = cells[i];
      try {
        SchemeParams p = with_mesh(base, c.N);
        p.U = c.U;
        const auto eq = make_equilibrium(p, ProfileKind::Cosine);
        c.mode = leading_nontrivial_eigen(build_iteration_matrix(p, eq), p, method);
      } catch (const std::exception& e) {
        c.error = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return cells;
}

}  // namespace d1q3
