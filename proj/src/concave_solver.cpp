#include "leo/concave_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "leo/simd/kernels.hpp"

namespace leo::opt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Flattened problem with per-cell offsets into the variable array.
struct Layout {
  std::vector<int> off;        // first var of cell c
  std::vector<int> cnt;        // number of vars of cell c
  std::vector<int> sat;        // per var
  std::vector<double> a, w, lo, hi;
  std::vector<int> sat_vars;   // number of vars per satellite
  int n{0};
  int barrier_terms{0};
};

Layout flatten(const Problem& prob) {
  Layout L;
  L.sat_vars.assign(static_cast<std::size_t>(prob.n_sats), 0);
  for (const auto& cell : prob.cells) {
    L.off.push_back(L.n);
    L.cnt.push_back(static_cast<int>(cell.vars.size()));
    for (const auto& v : cell.vars) {
      if (v.sat < 0 || v.sat >= prob.n_sats) throw std::invalid_argument("var satellite out of range");
      if (!(v.lo < v.hi)) throw InfeasibleError("variable with empty interior");
      L.sat.push_back(v.sat);
      L.a.push_back(v.a);
      L.w.push_back(v.w);
      L.lo.push_back(v.lo);
      L.hi.push_back(v.hi);
      ++L.sat_vars[static_cast<std::size_t>(v.sat)];
      ++L.n;
    }
    if (!cell.vars.empty()) {
      if (cell.offset <= 0.0 && cell.vars.size() != 1)
        throw std::invalid_argument("nonpositive offset needs a single-variable cell");
      if (cell.penalized) L.barrier_terms += 2;
    }
  }
  L.barrier_terms += 2 * L.n;
  for (int s = 0; s < prob.n_sats; ++s)
    if (L.sat_vars[static_cast<std::size_t>(s)] > 0) ++L.barrier_terms;
  return L;
}

// Per-cell factorization of the diagonal-plus-rank-two Hessian block over
// (x_c, sigma_c): B = diag(d) + U U^T, inverted with a k x k capacitance.
struct CellFactor {
  int k{0};  // rank of the update (0, 1 or 2)
  std::vector<double> dinv;           // size n_c (+1 when penalized)
  std::vector<double> u[2], v[2];     // columns of U and V = D^-1 U
  double cinv[2][2]{{0, 0}, {0, 0}};
};

class Barrier {
 public:
  Barrier(const Problem& prob, const Layout& L) : P_(prob), L_(L) {
    const auto nc = prob.cells.size();
    q_.resize(nc);
    z_.resize(nc);
    factors_.resize(nc);
    slack_.resize(static_cast<std::size_t>(prob.n_sats));
    schur_.resize(prob.n_sats, prob.n_sats);
    dense_[0].assign(static_cast<std::size_t>(prob.n_sats), 0.0);
    dense_[1].assign(static_cast<std::size_t>(prob.n_sats), 0.0);
    mark_.assign(static_cast<std::size_t>(prob.n_sats), 0);
  }

  bool active(std::size_t c) const { return L_.cnt[c] > 0; }
  bool has_sigma(std::size_t c) const { return active(c) && P_.cells[c].penalized; }

  // Recompute the per-cell terms and the budget slacks at the current point.
  void refresh(const std::vector<double>& x, const std::vector<double>& sig) {
    std::fill(slack_.begin(), slack_.end(), 0.0);
    for (int j = 0; j < L_.n; ++j) slack_[static_cast<std::size_t>(L_.sat[j])] += x[j];
    for (std::size_t s = 0; s < slack_.size(); ++s) slack_[s] = P_.cap[s] - slack_[s];
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      const auto& cell = P_.cells[c];
      double q = cell.offset, z = sig[c];
      for (int i = 0; i < L_.cnt[c]; ++i) {
        const int j = L_.off[c] + i;
        q += L_.a[j] * x[j];
        z += L_.w[j] * x[j];
      }
      q_[c] = q;
      z_[c] = z;
    }
  }

  double objective(double* utility) const {
    double util = 0.0, pen = 0.0;
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      const auto& cell = P_.cells[c];
      if (!active(c)) continue;
      util += cell.weight * std::log(q_[c]);
      if (cell.penalized) pen += 0.5 * cell.p * z_[c] * z_[c] + cell.lambda * z_[c];
    }
    if (utility) *utility = util;
    return util - pen;
  }

  // Gradient of the barrier function phi = -t F - sum log(constraints).
  void gradient(double t, const std::vector<double>& x, const std::vector<double>& sig,
                std::vector<double>& gx, std::vector<double>& gs) const {
    gx.assign(static_cast<std::size_t>(L_.n), 0.0);
    gs.assign(P_.cells.size(), 0.0);
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      const auto& cell = P_.cells[c];
      const double dq = -t * cell.weight / q_[c];
      const double dz = cell.penalized ? t * (cell.p * z_[c] + cell.lambda) : 0.0;
      for (int i = 0; i < L_.cnt[c]; ++i) {
        const int j = L_.off[c] + i;
        gx[j] = dq * L_.a[j] + dz * L_.w[j] - 1.0 / (x[j] - L_.lo[j]) + 1.0 / (L_.hi[j] - x[j]) +
                1.0 / slack_[static_cast<std::size_t>(L_.sat[j])];
      }
      if (cell.penalized) gs[c] = dz - 1.0 / (sig[c] + 1.0) - 1.0 / sig[c];
    }
  }

  // Builds the per-cell factors and the satellite Schur complement.
  void factor(double t, const std::vector<double>& x, const std::vector<double>& sig) {
    schur_.setZero();
    for (int s = 0; s < P_.n_sats; ++s) schur_(s, s) = slack_[static_cast<std::size_t>(s)] *
                                                       slack_[static_cast<std::size_t>(s)];
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      const auto& cell = P_.cells[c];
      const int n = L_.cnt[c];
      const bool sg = has_sigma(c);
      const int dim = n + (sg ? 1 : 0);
      CellFactor& f = factors_[c];
      f.dinv.resize(static_cast<std::size_t>(dim));
      for (int i = 0; i < n; ++i) {
        const int j = L_.off[c] + i;
        const double a = 1.0 / (x[j] - L_.lo[j]), b = 1.0 / (L_.hi[j] - x[j]);
        f.dinv[i] = 1.0 / (a * a + b * b);
      }
      if (sg) {
        const double a = 1.0 / (sig[c] + 1.0), b = 1.0 / sig[c];
        f.dinv[n] = 1.0 / (a * a + b * b);
      }
      f.k = 0;
      const double s1 = std::sqrt(t * cell.weight) / q_[c];
      f.u[0].assign(static_cast<std::size_t>(dim), 0.0);
      for (int i = 0; i < n; ++i) f.u[0][i] = s1 * L_.a[L_.off[c] + i];
      f.k = 1;
      if (cell.penalized && cell.p > 0.0) {
        const double s2 = std::sqrt(t * cell.p);
        f.u[1].assign(static_cast<std::size_t>(dim), 0.0);
        for (int i = 0; i < n; ++i) f.u[1][i] = s2 * L_.w[L_.off[c] + i];
        f.u[1][n] = s2;
        f.k = 2;
      }
      // With D^-1/2 U = Q R (thin QR), B^-1 = D^-1 - (D^-1/2 Q) E (D^-1/2 Q)^T
      // where E = R R^T (I + R R^T)^-1. E is formed from sums of squares
      // only, so it stays accurate when the log term dominates the barrier.
      std::vector<double> dh(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) dh[i] = std::sqrt(f.dinv[i]);
      for (int k = 0; k < f.k; ++k) {
        f.v[k].resize(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) f.v[k][i] = dh[i] * f.u[k][i];
      }
      const double r11 = std::sqrt(simd::dot(f.v[0], f.v[0]));
      if (!(r11 > 0.0)) {
        f.k = 0;
      } else {
        for (auto& e : f.v[0]) e /= r11;
        double r12 = 0.0, r22 = 0.0;
        if (f.k == 2) {
          for (int pass = 0; pass < 2; ++pass) {
            const double proj = simd::dot(f.v[0], f.v[1]);
            simd::axpy(-proj, f.v[0], f.v[1]);
            r12 += proj;
          }
          r22 = std::sqrt(simd::dot(f.v[1], f.v[1]));
          if (r22 > 0.0) {
            for (auto& e : f.v[1]) e /= r22;
          } else {
            f.k = 1;  // second direction lies in the span of the first
          }
        }
        const double a2 = r11 * r11 + r12 * r12, b2 = r22 * r22;
        const double det = 1.0 + a2 + b2 + r11 * r11 * b2;
        f.cinv[0][0] = (a2 + r11 * r11 * b2) / det;
        f.cinv[1][1] = (b2 + r11 * r11 * b2) / det;
        f.cinv[0][1] = f.cinv[1][0] = r12 * r22 / det;
        if (f.k == 1) {
          f.cinv[0][0] = a2 / (1.0 + a2);
          f.cinv[0][1] = f.cinv[1][0] = f.cinv[1][1] = 0.0;
        }
        for (int k = 0; k < f.k; ++k)
          for (int i = 0; i < dim; ++i) f.v[k][i] *= dh[i];
      }

      // A B^-1 A^T contribution: diagonal part plus a rank-k correction over
      // the satellites present in this cell.
      std::vector<int>& touched = touched_;
      touched.clear();
      for (int i = 0; i < n; ++i) {
        const int s = L_.sat[L_.off[c] + i];
        schur_(s, s) += f.dinv[i];
        if (!mark_[s]) {
          mark_[s] = 1;
          touched.push_back(s);
        }
        for (int k = 0; k < f.k; ++k) dense_[k][s] += f.v[k][i];
      }
      for (int s : touched) {
        double qv[2] = {0.0, 0.0};
        for (int l = 0; l < f.k; ++l)
          for (int k = 0; k < f.k; ++k) qv[l] += dense_[k][s] * f.cinv[k][l];
        std::span<double> col(schur_.col(s).data(), static_cast<std::size_t>(P_.n_sats));
        for (int l = 0; l < f.k; ++l) simd::axpy(-qv[l], dense_[l], col);
      }
      for (int s : touched) {
        dense_[0][s] = dense_[1][s] = 0.0;
        mark_[s] = 0;
      }
    }
    llt_.compute(schur_);
    const double scale = std::max(1e-300, schur_.diagonal().cwiseAbs().maxCoeff());
    for (double reg = 1e-14; llt_.info() != Eigen::Success && reg < 1e-5; reg *= 100.0) {
      schur_.diagonal().array() += reg * scale;
      llt_.compute(schur_);
    }
    if (llt_.info() != Eigen::Success)
      throw SolverError("Schur complement not positive definite", 0, 0);
  }

  // out = B_c^-1 in for one cell, over (x_c, sigma_c).
  void apply_cell_inverse(std::size_t c, const double* in, double* out) const {
    const CellFactor& f = factors_[c];
    const int dim = static_cast<int>(f.dinv.size());
    double proj[2] = {0.0, 0.0};
    for (int k = 0; k < f.k; ++k)
      for (int i = 0; i < dim; ++i) proj[k] += f.v[k][i] * in[i];
    double coef[2] = {0.0, 0.0};
    for (int k = 0; k < f.k; ++k)
      for (int l = 0; l < f.k; ++l) coef[k] += f.cinv[k][l] * proj[l];
    for (int i = 0; i < dim; ++i) {
      double r = f.dinv[i] * in[i];
      for (int k = 0; k < f.k; ++k) r -= f.v[k][i] * coef[k];
      out[i] = r;
    }
  }

  // Solves H d = rhs for (dx, ds).
  void solve(const std::vector<double>& rx, const std::vector<double>& rs, std::vector<double>& dx,
             std::vector<double>& ds) const {
    dx.assign(static_cast<std::size_t>(L_.n), 0.0);
    ds.assign(P_.cells.size(), 0.0);
    Eigen::VectorXd ar = Eigen::VectorXd::Zero(P_.n_sats);
    std::vector<double> in, out;
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      pack(c, rx, rs, in);
      out.resize(in.size());
      apply_cell_inverse(c, in.data(), out.data());
      for (int i = 0; i < L_.cnt[c]; ++i) ar(L_.sat[L_.off[c] + i]) += out[i];
    }
    const Eigen::VectorXd y = llt_.solve(ar);
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      pack(c, rx, rs, in);
      for (int i = 0; i < L_.cnt[c]; ++i) in[i] -= y(L_.sat[L_.off[c] + i]);
      out.resize(in.size());
      apply_cell_inverse(c, in.data(), out.data());
      for (int i = 0; i < L_.cnt[c]; ++i) dx[L_.off[c] + i] = out[i];
      if (has_sigma(c)) ds[c] = out[L_.cnt[c]];
    }
  }

  // out = H d.
  void multiply(const std::vector<double>& dx, const std::vector<double>& ds,
                std::vector<double>& ox, std::vector<double>& os) const {
    ox.assign(static_cast<std::size_t>(L_.n), 0.0);
    os.assign(P_.cells.size(), 0.0);
    std::vector<double> ad(static_cast<std::size_t>(P_.n_sats), 0.0);
    for (int j = 0; j < L_.n; ++j) ad[static_cast<std::size_t>(L_.sat[j])] += dx[j];
    std::vector<double> in;
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      const CellFactor& f = factors_[c];
      pack(c, dx, ds, in);
      const int dim = static_cast<int>(in.size());
      double proj[2] = {0.0, 0.0};
      for (int k = 0; k < f.k; ++k) proj[k] = simd::dot(f.u[k], in);
      for (int i = 0; i < dim; ++i) {
        double r = in[i] / f.dinv[i];
        for (int k = 0; k < f.k; ++k) r += f.u[k][i] * proj[k];
        if (i < L_.cnt[c]) {
          const auto s = static_cast<std::size_t>(L_.sat[L_.off[c] + i]);
          r += ad[s] / (slack_[s] * slack_[s]);
          ox[L_.off[c] + i] = r;
        } else {
          os[c] = r;
        }
      }
    }
  }

  // Largest step keeping every linear constraint and the log domain strictly
  // satisfied.
  double max_step(const std::vector<double>& x, const std::vector<double>& sig,
                  const std::vector<double>& dx, const std::vector<double>& ds) const {
    double amax = kInf;
    auto limit = [&](double room, double rate) {
      if (rate > 0.0) amax = std::min(amax, room / rate);
    };
    std::vector<double> use(static_cast<std::size_t>(P_.n_sats), 0.0);
    for (int j = 0; j < L_.n; ++j) {
      limit(x[j] - L_.lo[j], -dx[j]);
      limit(L_.hi[j] - x[j], dx[j]);
      use[static_cast<std::size_t>(L_.sat[j])] += dx[j];
    }
    for (std::size_t s = 0; s < use.size(); ++s)
      if (L_.sat_vars[s] > 0) limit(slack_[s], use[s]);
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      double dq = 0.0;
      for (int i = 0; i < L_.cnt[c]; ++i) dq += L_.a[L_.off[c] + i] * dx[L_.off[c] + i];
      limit(q_[c], -dq);
      if (has_sigma(c)) {
        limit(sig[c] + 1.0, -ds[c]);
        limit(-sig[c], ds[c]);
      }
    }
    return amax;
  }

  // phi(x + alpha d) - phi(x), accumulated term by term to avoid
  // cancellation between large absolute values.
  double delta_phi(double t, double alpha, const std::vector<double>& x,
                   const std::vector<double>& sig, const std::vector<double>& dx,
                   const std::vector<double>& ds) const {
    double d = 0.0;
    std::vector<double> use(static_cast<std::size_t>(P_.n_sats), 0.0);
    for (int j = 0; j < L_.n; ++j) {
      const double step = alpha * dx[j];
      d -= std::log1p(step / (x[j] - L_.lo[j]));
      d -= std::log1p(-step / (L_.hi[j] - x[j]));
      use[static_cast<std::size_t>(L_.sat[j])] += step;
    }
    for (std::size_t s = 0; s < use.size(); ++s)
      if (L_.sat_vars[s] > 0) d -= std::log1p(-use[s] / slack_[s]);
    for (std::size_t c = 0; c < P_.cells.size(); ++c) {
      if (!active(c)) continue;
      const auto& cell = P_.cells[c];
      double dq = 0.0, dz = 0.0;
      for (int i = 0; i < L_.cnt[c]; ++i) {
        const int j = L_.off[c] + i;
        dq += L_.a[j] * dx[j];
        dz += L_.w[j] * dx[j];
      }
      dq *= alpha;
      d -= t * cell.weight * std::log1p(dq / q_[c]);
      if (cell.penalized) {
        dz = alpha * (dz + ds[c]);
        d += t * dz * (cell.p * z_[c] + 0.5 * cell.p * dz + cell.lambda);
        d -= std::log1p(alpha * ds[c] / (sig[c] + 1.0));
        d -= std::log1p(-alpha * ds[c] / -sig[c]);
      }
    }
    return d;
  }

 private:
  void pack(std::size_t c, const std::vector<double>& vx, const std::vector<double>& vs,
            std::vector<double>& out) const {
    const int n = L_.cnt[c];
    out.resize(static_cast<std::size_t>(n + (has_sigma(c) ? 1 : 0)));
    for (int i = 0; i < n; ++i) out[i] = vx[L_.off[c] + i];
    if (has_sigma(c)) out[n] = vs[c];
  }

  const Problem& P_;
  const Layout& L_;
  std::vector<double> q_, z_, slack_;
  std::vector<CellFactor> factors_;
  Eigen::MatrixXd schur_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::vector<double> dense_[2];
  std::vector<int> touched_;
  std::vector<char> mark_;
};

// Strictly interior starting point: each variable sits halfway between its
// lower bound and its share of the remaining satellite budget.
void initial_point(const Problem& prob, const Layout& L, std::vector<double>& x,
                   std::vector<double>& sig) {
  std::vector<double> lo_sum(static_cast<std::size_t>(prob.n_sats), 0.0);
  for (int j = 0; j < L.n; ++j) lo_sum[static_cast<std::size_t>(L.sat[j])] += L.lo[j];
  for (int s = 0; s < prob.n_sats; ++s)
    if (L.sat_vars[static_cast<std::size_t>(s)] > 0 &&
        !(lo_sum[static_cast<std::size_t>(s)] < prob.cap[static_cast<std::size_t>(s)]))
      throw InfeasibleError("lower bounds exhaust the budget of satellite " + std::to_string(s));
  x.resize(static_cast<std::size_t>(L.n));
  for (int j = 0; j < L.n; ++j) {
    const auto s = static_cast<std::size_t>(L.sat[j]);
    const double share = (prob.cap[s] - lo_sum[s]) / L.sat_vars[s];
    x[j] = L.lo[j] + 0.5 * std::min(L.hi[j] - L.lo[j], share);
  }
  sig.assign(prob.cells.size(), 0.0);
  for (std::size_t c = 0; c < prob.cells.size(); ++c) {
    const auto& cell = prob.cells[c];
    if (!cell.penalized) continue;
    if (L.cnt[c] > 0) {
      sig[c] = -0.5;
    } else if (cell.p > 0.0) {
      sig[c] = std::clamp(-cell.lambda / cell.p, -1.0, 0.0);
    } else {
      sig[c] = cell.lambda > 0.0 ? -1.0 : 0.0;
    }
  }
}

}  // namespace

double evaluate(const Problem& prob, const std::vector<std::vector<double>>& x,
                const std::vector<double>& sigma, double* utility) {
  double util = 0.0, pen = 0.0;
  for (std::size_t c = 0; c < prob.cells.size(); ++c) {
    const auto& cell = prob.cells[c];
    double q = cell.offset, z = sigma.empty() ? 0.0 : sigma[c];
    for (std::size_t i = 0; i < cell.vars.size(); ++i) {
      q += cell.vars[i].a * x[c][i];
      z += cell.vars[i].w * x[c][i];
    }
    if (!cell.vars.empty() && !(q > 0.0)) {
      if (utility) *utility = -kInf;
      return -kInf;
    }
    if (!cell.vars.empty()) util += cell.weight * std::log(q);
    if (cell.penalized) pen += 0.5 * cell.p * z * z + cell.lambda * z;
  }
  if (utility) *utility = util;
  return util - pen;
}

Solution solve(const Problem& prob, const Options& opts) {
  if (static_cast<int>(prob.cap.size()) != prob.n_sats)
    throw std::invalid_argument("capacity vector size mismatch");
  for (double c : prob.cap)
    if (!(c > 0.0)) throw InfeasibleError("satellite budget must be positive");
  const Layout L = flatten(prob);
  for (std::size_t c = 0; c < prob.cells.size(); ++c) {
    const auto& cell = prob.cells[c];
    if (cell.vars.size() == 1 && cell.offset <= 0.0) {
      const auto& v = cell.vars[0];
      if (!(v.a > 0.0) || !(v.lo >= -cell.offset / v.a - 1e-12 * std::fabs(cell.offset / v.a)))
        throw std::invalid_argument("single-variable cell needs lo >= -b/a");
    }
  }

  std::vector<double> x, sig;
  initial_point(prob, L, x, sig);

  Solution sol;
  Barrier bar(prob, L);
  bar.refresh(x, sig);
  const double m = std::max(1, L.barrier_terms);
  double t = opts.t_init > 0.0 ? opts.t_init : m / (1.0 + std::fabs(bar.objective(nullptr)));

  std::vector<double> gx, gs, dx, ds, hx, hs, ex, es;
  double decrement = 0.0;
  if (L.n > 0) {
    for (int outer = 0; outer < opts.max_outer; ++outer) {
      ++sol.centering_steps;
      for (int it = 0; it < opts.max_newton; ++it) {
        bar.gradient(t, x, sig, gx, gs);
        bar.factor(t, x, sig);
        for (auto& v : gx) v = -v;
        for (auto& v : gs) v = -v;
        bar.solve(gx, gs, dx, ds);
        // One round of iterative refinement against the structured product.
        bar.multiply(dx, ds, hx, hs);
        for (std::size_t j = 0; j < hx.size(); ++j) hx[j] = gx[j] - hx[j];
        for (std::size_t c = 0; c < hs.size(); ++c) hs[c] = gs[c] - hs[c];
        bar.solve(hx, hs, ex, es);
        for (std::size_t j = 0; j < dx.size(); ++j) dx[j] += ex[j];
        for (std::size_t c = 0; c < ds.size(); ++c) ds[c] += es[c];
        ++sol.newton_steps;

        double lam2 = 0.0;
        for (std::size_t j = 0; j < dx.size(); ++j) lam2 += gx[j] * dx[j];
        for (std::size_t c = 0; c < ds.size(); ++c) lam2 += gs[c] * ds[c];
        decrement = 0.5 * std::max(lam2, 0.0);
        if (decrement <= 1e-10) break;

        double alpha = std::min(1.0, 0.99 * bar.max_step(x, sig, dx, ds));
        const double slope = -lam2;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
          const double dphi = bar.delta_phi(t, alpha, x, sig, dx, ds);
          if (std::isfinite(dphi) && dphi <= 0.25 * alpha * slope) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted) break;  // no further progress at working precision
        for (std::size_t j = 0; j < dx.size(); ++j) x[j] += alpha * dx[j];
        for (std::size_t c = 0; c < ds.size(); ++c) sig[c] += alpha * ds[c];
        bar.refresh(x, sig);
      }
      const double f = bar.objective(nullptr);
      sol.gap = m / t;
      if (sol.gap <= opts.gap_tol * (1.0 + std::fabs(f))) break;
      t *= opts.t_growth;
    }
    if (decrement > 1e-3 || sol.gap > 1e3 * opts.gap_tol * (1.0 + std::fabs(bar.objective(nullptr))))
      throw SolverError("barrier method did not converge", sol.gap, decrement);
  }
  sol.decrement = decrement;

  sol.x.resize(prob.cells.size());
  for (std::size_t c = 0; c < prob.cells.size(); ++c) {
    sol.x[c].resize(static_cast<std::size_t>(L.cnt[c]));
    for (int i = 0; i < L.cnt[c]; ++i) sol.x[c][i] = x[L.off[c] + i];
  }
  sol.sigma = sig;
  sol.objective = evaluate(prob, sol.x, sol.sigma, &sol.utility);
  return sol;
}

}  // namespace leo::opt
