#include "bvkit/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bvkit {

namespace {

double lp_norm_vec(const std::vector<double>& v, const Exponent& p) {
  if (p.is_inf()) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
  }
  const double pv = p.value();
  double acc = 0.0;
  for (double x : v) acc += pv == 1.0 ? std::abs(x) : std::pow(std::abs(x), pv);
  if (pv == 1.0) return acc;
  return pv == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / pv);
}

std::vector<double> add_scaled(std::vector<double> base, const GridFunction& g, double s) {
  auto vals = g.values();
  for (std::size_t i = 0; i < vals.size(); ++i) base[i] += s * vals[i];
  return base;
}

}  // namespace

GridFunction Chain::synthesize(int d, int m) const {
  std::vector<double> acc(static_cast<std::size_t>(std::int64_t(1) << (m * d)), 0.0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc = add_scaled(std::move(acc), atoms[i].values, coeffs[i]);
  }
  return GridFunction(d, m, std::move(acc));
}

double chain_norm(const Chain& b, const Exponent& p_prime) {
  return lp_norm_vec(b.coeffs, p_prime);
}

double Decomposition::cost(const Exponent& p_prime) const {
  double acc = 0.0;
  for (const auto& chain : chains) acc += chain_norm(chain, p_prime);
  return acc;
}

GridFunction Decomposition::synthesize(int d, int m) const {
  std::vector<double> acc(static_cast<std::size_t>(std::int64_t(1) << (m * d)), 0.0);
  for (const auto& chain : chains) {
    for (std::size_t i = 0; i < chain.atoms.size(); ++i) {
      acc = add_scaled(std::move(acc), chain.atoms[i].values, chain.coeffs[i]);
    }
  }
  return GridFunction(d, m, std::move(acc));
}

bool is_moment_free(const GridFunction& g, int k, double tol) {
  const PolyBasis basis = PolyBasis::total_degree(g.dim(), k);
  const CellWindow w = g.whole_window();
  const Eigen::MatrixXd A = detail::basis_matrix(g, w, basis);
  const Eigen::VectorXd v = detail::window_values(g, w);
  const Eigen::VectorXd moments = A.transpose() * v * g.cell_volume();
  return moments.lpNorm<Eigen::Infinity>() <= tol;
}

std::pair<Atom, double> make_atom(const GridFunction& raw, const DyadicCube& Q,
                                  const Kappa& kappa) {
  const CellWindow w = raw.window(Q);
  const PolyBasis basis = PolyBasis::total_degree(raw.dim(), kappa.k);
  const Eigen::MatrixXd A = detail::basis_matrix(raw, w, basis);
  const Eigen::VectorXd v = detail::window_values(raw, w);
  Eigen::VectorXd c;
  if (A.rows() < A.cols()) {
    c = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(A).solve(v);
  } else {
    c = (A.transpose() * A).ldlt().solve(A.transpose() * v);
  }
  const Eigen::VectorXd r = v - A * c;

  std::vector<double> values(static_cast<std::size_t>(raw.size()), 0.0);
  std::int64_t row = 0;
  for_each_cell(raw, w, [&](std::int64_t cell) {
    values[static_cast<std::size_t>(cell)] = r(row++);
  });
  GridFunction residual(raw.dim(), raw.resolution(), std::move(values));

  const Exponent q_prime = kappa.q.conjugate();
  const double norm = lq_norm(residual, q_prime, Region::in(Q));
  const double target = std::pow(Q.volume(), -kappa.lambda);
  if (norm <= 1e-13 * std::max(1.0, v.lpNorm<Eigen::Infinity>())) {
    throw std::domain_error("make_atom: degenerate atom (zero residual after projection)");
  }
  std::vector<double> scaled(residual.values().begin(), residual.values().end());
  const double factor = target / norm;
  for (double& x : scaled) x *= factor;
  Atom atom{Q, GridFunction(raw.dim(), raw.resolution(), std::move(scaled))};
  return {std::move(atom), norm / target};
}

ExtremalAtom extremal_atom(const GridFunction& f, const DyadicCube& Q, const Kappa& kappa) {
  const CellWindow w = f.window(Q);
  const double vol_neg_lambda = std::pow(Q.volume(), -kappa.lambda);
  const double cellvol = f.cell_volume();

  std::vector<double> values(static_cast<std::size_t>(f.size()), 0.0);

  if (!kappa.q.is_inf() && kappa.q.value() == 2.0) {
    detail::WindowFit fit = detail::fit_window(f, w, kappa.k, kappa.q, false);
    if (fit.error <= 0.0) throw std::domain_error("extremal_atom: E_{kq}(f;Q) = 0");
    const PolyBasis basis = PolyBasis::total_degree(f.dim(), kappa.k);
    const Eigen::MatrixXd A = detail::basis_matrix(f, w, basis);
    Eigen::VectorXd coeffs = fit.coeffs;
    const Eigen::VectorXd r = detail::window_values(f, w) - A * coeffs;
    const double scale = vol_neg_lambda / fit.error;
    std::int64_t row = 0;
    for_each_cell(f, w, [&](std::int64_t cell) {
      values[static_cast<std::size_t>(cell)] = r(row++) * scale;
    });
    Atom atom{Q, GridFunction(f.dim(), f.resolution(), std::move(values))};
    const double pairing = pair(f, atom.values);
    return {std::move(atom), pairing};
  }

  if (kappa.q.is_inf() || kappa.q.value() == 1.0) {
    detail::WindowFit fit = detail::fit_window(f, w, kappa.k, kappa.q, true);
    if (fit.error <= 0.0) throw std::domain_error("extremal_atom: E_{kq}(f;Q) = 0");
    if (fit.dual.size() == 0) throw std::logic_error("extremal_atom: missing dual");
    std::int64_t row = 0;
    for_each_cell(f, w, [&](std::int64_t cell) {
      values[static_cast<std::size_t>(cell)] = fit.dual(row++) * vol_neg_lambda / cellvol;
    });
    Atom atom{Q, GridFunction(f.dim(), f.resolution(), std::move(values))};
    const double pairing = pair(f, atom.values);
    return {std::move(atom), pairing};
  }
  throw std::invalid_argument("extremal_atom: q must be one of {1, 2, inf}");
}

namespace {

// Splits g across a covering-or-partial packing: one chain of projected,
// renormalized restrictions plus the leftover needed to make the sum exact.
struct SplitResult {
  Chain chain;
  GridFunction remainder;
  bool usable = false;
};

SplitResult split_over_packing(const GridFunction& g, const Packing& pi, const Kappa& kappa) {
  SplitResult out{Chain{}, GridFunction::constant(g.dim(), g.resolution(), 0.0), false};
  std::vector<double> rem(g.values().begin(), g.values().end());
  Chain chain;
  for (const auto& cube : pi.cubes) {
    if (cube.level > g.resolution()) return out;
    // Restrict g to the cube.
    std::vector<double> piece(static_cast<std::size_t>(g.size()), 0.0);
    bool nonzero = false;
    for_each_cell(g, g.window(cube), [&](std::int64_t c) {
      piece[static_cast<std::size_t>(c)] = g[c];
      nonzero = nonzero || g[c] != 0.0;
    });
    if (!nonzero) continue;
    GridFunction restricted(g.dim(), g.resolution(), std::move(piece));
    try {
      auto [atom, scale] = make_atom(restricted, cube, kappa);
      for (std::int64_t c = 0; c < g.size(); ++c) {
        rem[static_cast<std::size_t>(c)] -= scale * atom.values[c];
      }
      chain.packing.cubes.push_back(cube);
      chain.atoms.push_back(std::move(atom));
      chain.coeffs.push_back(scale);
    } catch (const std::domain_error&) {
      // Piece is polynomial on the cube; leave it to the remainder.
    }
  }
  if (chain.atoms.empty()) return out;
  out.chain = std::move(chain);
  out.remainder = GridFunction(g.dim(), g.resolution(), std::move(rem));
  out.usable = true;
  return out;
}

Packing uniform_partition(int d, int level) {
  Packing pi;
  std::function<void(const DyadicCube&)> rec = [&](const DyadicCube& q) {
    if (q.level == level) {
      pi.cubes.push_back(q);
      return;
    }
    for (const auto& c : q.children()) rec(c);
  };
  rec(DyadicCube::root(d));
  return pi;
}

// Nonnegative least squares by cyclic coordinate descent; problems here are
// tiny (a handful of candidate chains).
Eigen::VectorXd nnls(const Eigen::MatrixXd& S, const Eigen::VectorXd& g, int sweeps = 2000) {
  const Eigen::Index n = S.cols();
  Eigen::MatrixXd gram = S.transpose() * S;
  Eigen::VectorXd rhs = S.transpose() * g;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (gram(i, i) <= 0.0) continue;
      const double grad = rhs(i) - gram.row(i).dot(mu);
      const double next = std::max(0.0, mu(i) + grad / gram(i, i));
      change = std::max(change, std::abs(next - mu(i)));
      mu(i) = next;
    }
    if (change < 1e-14) break;
  }
  return mu;
}

struct Candidate {
  Decomposition decomposition;
  double cost;
};

Candidate baseline_chain(const GridFunction& g, const Kappa& kappa) {
  Candidate cand;
  const Exponent q_prime = kappa.q.conjugate();
  const double norm = lq_norm(g, q_prime);
  if (norm <= 0.0) {
    cand.cost = 0.0;
    return cand;
  }
  std::vector<double> scaled(g.values().begin(), g.values().end());
  for (double& x : scaled) x /= norm;
  Chain chain;
  chain.packing.cubes = {DyadicCube::root(g.dim())};
  chain.atoms.push_back(
      Atom{DyadicCube::root(g.dim()), GridFunction(g.dim(), g.resolution(), std::move(scaled))});
  chain.coeffs.push_back(norm);
  cand.decomposition.chains.push_back(std::move(chain));
  cand.cost = norm;
  return cand;
}

Candidate search_upper(const GridFunction& g, const Kappa& kappa,
                       const std::vector<Packing>& candidates, int depth) {
  Candidate best = baseline_chain(g, kappa);
  if (depth <= 0 || best.cost <= 1e-14) return best;
  const Exponent p_prime = kappa.p.conjugate();
  for (const auto& pi : candidates) {
    SplitResult split = split_over_packing(g, pi, kappa);
    if (!split.usable) continue;
    const double head = chain_norm(split.chain, p_prime);
    if (head >= best.cost) continue;  // remainder can only add cost
    Candidate tail = search_upper(split.remainder, kappa, candidates, depth - 1);
    const double total = head + tail.cost;
    if (total < best.cost) {
      Decomposition dec;
      dec.chains.push_back(split.chain);
      for (auto& chain : tail.decomposition.chains) dec.chains.push_back(std::move(chain));
      best = Candidate{std::move(dec), total};
    }
  }
  return best;
}

}  // namespace

UpperReport u_norm_upper(const GridFunction& g, const Kappa& kappa, const SearchBudget& budget,
                         const std::vector<GridFunction>* witnesses) {
  if (kappa.d != g.dim()) throw std::invalid_argument("u_norm_upper: dimension mismatch");
  if (!is_moment_free(g, kappa.k)) {
    throw std::invalid_argument("u_norm_upper: g must have vanishing moments (U^0_kappa)");
  }

  std::vector<Packing> candidates;
  for (int level = 1; level <= std::min(budget.max_partition_level, g.resolution()); ++level) {
    candidates.push_back(uniform_partition(g.dim(), level));
  }
  if (witnesses) {
    for (const auto& wfn : *witnesses) {
      if (wfn.dim() != g.dim() || wfn.resolution() != g.resolution()) continue;
      NormReport rep = v_seminorm(wfn, kappa, wfn.resolution());
      if (!rep.certificate.empty()) candidates.push_back(rep.certificate);
    }
  }

  Candidate best = search_upper(g, kappa, candidates, std::max(1, budget.recursion_depth));

  // KKT-guided refinement on tiny q = 2 instances: chains aligned with the
  // extremal atoms of the oracle maximizer, combined by NNLS, remainder via
  // the baseline chain.
  const bool oracle_ok = budget.dual_guided && g.size() <= 64 && !kappa.q.is_inf() &&
                         kappa.q.value() == 2.0 &&
                         (kappa.p.is_inf() || kappa.p.value() == 2.0);
  if (oracle_ok && best.cost > 1e-14) {
    try {
      detail::OracleResult oracle =
          detail::exact_dual_oracle(g, kappa, g.resolution(), 1e-7, 20000);
      std::vector<Chain> chains;
      std::vector<Eigen::VectorXd> columns;
      GridFunction fstar(g.dim(), g.resolution(),
                         std::vector<double>(oracle.f_hat.data(),
                                             oracle.f_hat.data() + oracle.f_hat.size()));
      for (std::size_t ci = 0; ci < oracle.constraints.size(); ++ci) {
        if (oracle.activity[ci] < 0.9) continue;
        const Packing& pi = oracle.constraints[ci];
        Chain chain;
        std::vector<double> weights;
        for (const auto& cube : pi.cubes) {
          try {
            ExtremalAtom ea = extremal_atom(fstar, cube, kappa);
            chain.packing.cubes.push_back(cube);
            chain.atoms.push_back(std::move(ea.atom));
            weights.push_back(ea.pairing);
          } catch (const std::domain_error&) {
          }
        }
        if (chain.atoms.empty()) continue;
        // Coefficients of the chain maximizing <f*, b> with [b]_{p'} <= 1.
        if (kappa.p.is_inf()) {
          std::size_t arg = 0;
          for (std::size_t i = 1; i < weights.size(); ++i) {
            if (weights[i] > weights[arg]) arg = i;
          }
          chain.coeffs.assign(weights.size(), 0.0);
          chain.coeffs[arg] = 1.0;
        } else {
          double norm = 0.0;
          for (double wgt : weights) norm += wgt * wgt;
          norm = std::sqrt(norm);
          if (norm <= 0.0) continue;
          chain.coeffs.resize(weights.size());
          for (std::size_t i = 0; i < weights.size(); ++i) chain.coeffs[i] = weights[i] / norm;
        }
        chains.push_back(std::move(chain));
      }
      if (!chains.empty()) {
        Eigen::MatrixXd S(g.size(), static_cast<Eigen::Index>(chains.size()));
        for (std::size_t i = 0; i < chains.size(); ++i) {
          GridFunction s = chains[i].synthesize(g.dim(), g.resolution());
          for (std::int64_t c = 0; c < g.size(); ++c) S(c, static_cast<Eigen::Index>(i)) = s[c];
        }
        Eigen::VectorXd target(g.size());
        for (std::int64_t c = 0; c < g.size(); ++c) target(c) = g[c];
        Eigen::VectorXd mu = nnls(S, target);
        std::vector<double> rem(g.values().begin(), g.values().end());
        double cost = 0.0;
        Decomposition dec;
        for (std::size_t i = 0; i < chains.size(); ++i) {
          if (mu(static_cast<Eigen::Index>(i)) <= 1e-12) continue;
          Chain scaled = chains[i];
          for (double& c : scaled.coeffs) c *= mu(static_cast<Eigen::Index>(i));
          cost += chain_norm(scaled, kappa.p.conjugate());
          GridFunction s = scaled.synthesize(g.dim(), g.resolution());
          for (std::int64_t c = 0; c < g.size(); ++c) rem[static_cast<std::size_t>(c)] -= s[c];
          dec.chains.push_back(std::move(scaled));
        }
        GridFunction remainder(g.dim(), g.resolution(), std::move(rem));
        Candidate tail = baseline_chain(remainder, kappa);
        cost += tail.cost;
        for (auto& chain : tail.decomposition.chains) dec.chains.push_back(std::move(chain));
        if (cost < best.cost) best = Candidate{std::move(dec), cost};
      }
    } catch (const std::exception&) {
      // Oracle refinements are best-effort; the constructive bound stands.
    }
  }

  return UpperReport{best.cost, std::move(best.decomposition)};
}

LowerReport u_norm_lower(const GridFunction& g, const Kappa& kappa,
                         const std::vector<GridFunction>& witnesses, bool exact) {
  if (!is_moment_free(g, kappa.k)) {
    throw std::invalid_argument("u_norm_lower: g must have vanishing moments");
  }
  LowerReport report;
  for (const auto& wfn : witnesses) {
    if (wfn.dim() != g.dim() || wfn.resolution() != g.resolution()) continue;
    const double seminorm = v_seminorm(wfn, kappa, wfn.resolution()).value;
    if (seminorm <= 1e-13) continue;
    report.value = std::max(report.value, std::abs(pair(wfn, g)) / seminorm);
  }
  if (exact) {
    if (g.size() > 64) {
      throw std::invalid_argument("u_norm_lower: exact mode refused above 64 cells");
    }
    detail::OracleResult oracle =
        detail::exact_dual_oracle(g, kappa, g.resolution(), 1e-7, 20000);
    report.value = std::max(report.value, oracle.lower);
    report.exact = true;
  }
  return report;
}

GapReport duality_gap(const GridFunction& g, const Kappa& kappa,
                      const std::vector<GridFunction>& witnesses, bool exact,
                      const SearchBudget& budget) {
  std::vector<GridFunction> wit = witnesses;
  wit.push_back(g);  // g itself is always an admissible witness
  LowerReport lower = u_norm_lower(g, kappa, wit, exact);
  UpperReport upper = u_norm_upper(g, kappa, budget, &wit);
  GapReport gap;
  gap.lower = lower.value;
  gap.upper = upper.value;
  gap.relative_gap = (upper.value - lower.value) / std::max(upper.value, 1e-300);
  return gap;
}

PairingCheck check_pairing_inequality(const GridFunction& f, const Chain& b,
                                      const Kappa& kappa) {
  PairingCheck check;
  const GridFunction synth = b.synthesize(f.dim(), f.resolution());
  check.lhs = std::abs(pair(f, synth));
  check.gamma_value = gamma(f, b.packing, kappa);
  check.rhs = chain_norm(b, kappa.p.conjugate()) * check.gamma_value;
  int deepest = 0;
  for (const auto& cube : b.packing.cubes) deepest = std::max(deepest, cube.level);
  check.seminorm_value = v_seminorm(f, kappa, deepest).value;
  check.ok = check.lhs <= check.rhs * (1.0 + 1e-9) + 1e-12;
  return check;
}

namespace detail {

OracleResult exact_dual_oracle(const GridFunction& g, const Kappa& kappa, int max_level,
                               double tol, int max_iter) {
  if (g.size() > 64) throw std::invalid_argument("dual oracle: instance too large");
  if (kappa.q.is_inf() || kappa.q.value() != 2.0) {
    throw std::invalid_argument("dual oracle: supported for q = 2 only");
  }
  const bool p_two = !kappa.p.is_inf() && kappa.p.value() == 2.0;
  if (!p_two && !kappa.p.is_inf()) {
    throw std::invalid_argument("dual oracle: supported for p in {2, inf}");
  }

  const int d = g.dim();
  const Eigen::Index n = g.size();

  // Orthonormal basis of the moment-free subspace (g lives there, and the
  // seminorm is a genuine norm there).
  const PolyBasis basis = PolyBasis::total_degree(d, kappa.k);
  const Eigen::MatrixXd A = basis_matrix(g, g.whole_window(), basis);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Qfull = qr.householderQ();
  const Eigen::Index nb = A.cols();
  Eigen::MatrixXd B = Qfull.rightCols(n - nb);

  // Per-cube residual quadratic forms: E_2(f;Q)^2 = f^T M_Q f.
  std::vector<DyadicCube> cubes;
  std::function<void(const DyadicCube&)> collect = [&](const DyadicCube& q) {
    cubes.push_back(q);
    if (q.level < max_level) {
      for (const auto& c : q.children()) collect(c);
    }
  };
  collect(DyadicCube::root(d));

  std::unordered_map<DyadicCube, Eigen::MatrixXd, DyadicCubeHash> cube_form;
  const double cellvol = g.cell_volume();
  for (const auto& cube : cubes) {
    const CellWindow w = g.window(cube);
    const Eigen::Index nc = w.count();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nc, n);
    std::int64_t row = 0;
    for_each_cell(g, w, [&](std::int64_t c) { S(row++, c) = 1.0; });
    const Eigen::MatrixXd Aq = basis_matrix(g, w, basis);
    Eigen::MatrixXd proj;
    if (Aq.rows() <= Aq.cols()) {
      proj = Eigen::MatrixXd::Zero(nc, nc);  // fit is exact, residual vanishes
    } else {
      Eigen::MatrixXd gram = Aq.transpose() * Aq;
      proj = Eigen::MatrixXd::Identity(nc, nc) - Aq * gram.ldlt().solve(Aq.transpose());
    }
    const double wgt = std::pow(cube.volume(), -2.0 * kappa.lambda) * cellvol;
    cube_form[cube] = wgt * (S.transpose() * proj * S);
  }

  // Constraint list: packings for p = 2, single cubes for p = inf.
  OracleResult out;
  if (p_two) {
    out.constraints = all_packings(d, max_level);
    // Drop the empty packing: its constraint is vacuous.
    std::erase_if(out.constraints, [](const Packing& pi) { return pi.empty(); });
  } else {
    for (const auto& cube : cubes) {
      Packing pi;
      pi.cubes = {cube};
      out.constraints.push_back(pi);
    }
  }

  std::vector<Eigen::MatrixXd> H;
  H.reserve(out.constraints.size());
  for (const auto& pi : out.constraints) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (const auto& cube : pi.cubes) M += cube_form.at(cube);
    H.push_back(B.transpose() * M * B);
  }

  Eigen::VectorXd gv(n);
  for (Eigen::Index i = 0; i < n; ++i) gv(i) = g[i] * cellvol;  // <f,g> = f^T gv
  const Eigen::VectorXd c = B.transpose() * gv;

  const Eigen::Index dim = B.cols();
  const std::size_t nc = H.size();
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(nc), 1.0);

  auto eval = [&](const Eigen::VectorXd& weights, Eigen::VectorXd* fstar) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < nc; ++i) K += weights(static_cast<Eigen::Index>(i)) * H[i];
    K.diagonal().array() += 1e-13 * (1.0 + K.trace() / double(dim));
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    Eigen::VectorXd xi = ldlt.solve(c);
    if (fstar) *fstar = 0.5 * xi;
    return 0.25 * c.dot(xi) + weights.sum();
  };

  double phi = eval(mu, nullptr);
  double step = 0.5;
  Eigen::VectorXd fstar(dim);
  out.lower = 0.0;
  out.upper = phi;
  for (int iter = 0; iter < max_iter; ++iter) {
    eval(mu, &fstar);
    Eigen::VectorXd grad(static_cast<Eigen::Index>(nc));
    double max_quad = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
      const double quad = fstar.dot(H[i] * fstar);
      grad(static_cast<Eigen::Index>(i)) = 1.0 - quad;
      max_quad = std::max(max_quad, quad);
    }
    // Certified feasible point: rescale f* onto the constraint set.
    if (max_quad > 0.0) {
      const Eigen::VectorXd feasible = fstar / std::sqrt(max_quad);
      out.lower = std::max(out.lower, c.dot(feasible));
    }
    out.upper = std::min(out.upper, phi);
    if (out.upper - out.lower <= tol * std::max(1.0, out.lower)) break;

    // Projected gradient step with backtracking on the dual objective.
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::VectorXd trial = (mu - step * grad).cwiseMax(0.0);
      const double phi_trial = eval(trial, nullptr);
      if (phi_trial <= phi) {
        mu = trial;
        phi = phi_trial;
        step *= 1.2;
        break;
      }
      step *= 0.5;
    }
  }

  // Recover the feasible maximizer in cell coordinates.
  eval(mu, &fstar);
  double max_quad = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    max_quad = std::max(max_quad, fstar.dot(H[i] * fstar));
  }
  Eigen::VectorXd feasible = max_quad > 0.0 ? (fstar / std::sqrt(max_quad)).eval() : fstar;
  out.lower = std::max(out.lower, c.dot(feasible));
  out.f_hat = B * feasible;
  out.activity.resize(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    out.activity[i] = std::sqrt(std::max(0.0, feasible.dot(H[i] * feasible)));
  }
  return out;
}

}  // namespace detail

}  // namespace bvkit
