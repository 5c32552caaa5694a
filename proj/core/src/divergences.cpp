#include "bnlab/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bnlab/errors.hpp"
#include "bnlab/rng.hpp"

namespace bnlab {

namespace {

double raw_entropy(const std::vector<double>& m) {
  double h = 0.0;
  for (double v : m) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double logit(double x) { return std::log(x / (1.0 - x)); }

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Packed CPT row index of node i's listed parents under full state `state`.
int row_index(const Dag& g, int i, std::uint32_t state) {
  int idx = 0;
  int pos = 0;
  for (int p : g.parents(i)) {
    idx |= ((state >> p) & 1u) << pos;
    ++pos;
  }
  return idx;
}

// Objective and gradient of D(q_theta || p) over flat logit coordinates.
class ReverseObjective {
 public:
  ReverseObjective(const Dag& g, const JointDistribution& p) : g_(g), p_(p) {
    const int n = g.num_nodes();
    offsets_.resize(n);
    int m = 0;
    for (int i = 0; i < n; ++i) {
      offsets_[i] = m;
      m += 1 << g.parent_count(i);
    }
    dim_ = m;
    theta_.resize(m);
    q_.resize(std::size_t{1} << n);
  }

  int dim() const { return dim_; }
  int offset(int node) const { return offsets_[node]; }
  const std::vector<double>& theta() const { return theta_; }

  // Returns D(q_sigmoid(t) || p) in bits; fills grad (size dim) if non-null.
  double eval(const std::vector<double>& t, std::vector<double>* grad) {
    const int n = g_.num_nodes();
    for (int k = 0; k < dim_; ++k) theta_[k] = sigmoid(t[k]);
    for (std::uint32_t x = 0; x < q_.size(); ++x) {
      double q = 1.0;
      for (int i = 0; i < n; ++i) {
        const double th = theta_[offsets_[i] + row_index(g_, i, x)];
        q *= ((x >> i) & 1u) ? th : 1.0 - th;
      }
      q_[x] = q;
    }
    double f = 0.0;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    for (std::uint32_t x = 0; x < q_.size(); ++x) {
      if (q_[x] <= 0.0) continue;
      const double ratio = std::log2(q_[x] / p_[x]);
      f += q_[x] * ratio;
      if (grad) {
        const double w = q_[x] * ratio;
        for (int i = 0; i < n; ++i) {
          const int k = offsets_[i] + row_index(g_, i, x);
          const double xi = static_cast<double>((x >> i) & 1u);
          (*grad)[k] += w * (xi - theta_[k]);
        }
      }
    }
    return f;
  }

 private:
  const Dag& g_;
  const JointDistribution& p_;
  std::vector<int> offsets_;
  int dim_ = 0;
  std::vector<double> theta_;
  std::vector<double> q_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double entropy(const JointDistribution& p, std::uint16_t vars, std::uint16_t given) {
  if (vars == 0) throw std::invalid_argument("entropy: empty variable set");
  if (vars & given) {
    throw std::invalid_argument("entropy: variable and conditioning sets overlap");
  }
  const double joint = raw_entropy(p.marginal(vars | given));
  if (given == 0) return joint;
  return joint - raw_entropy(p.marginal(given));
}

double mutual_information(const JointDistribution& p, int i, int j, std::uint16_t cond) {
  const int n = p.num_vars();
  if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
    throw std::invalid_argument("mutual_information: bad variable pair");
  }
  const std::uint16_t bi = std::uint16_t(1u << i);
  const std::uint16_t bj = std::uint16_t(1u << j);
  if ((bi | bj) & cond) {
    throw std::invalid_argument("mutual_information: variable inside conditioning set");
  }
  double v = raw_entropy(p.marginal(bi | cond)) + raw_entropy(p.marginal(bj | cond)) -
             raw_entropy(p.marginal(bi | bj | cond));
  if (cond != 0) v -= raw_entropy(p.marginal(cond));
  return std::max(v, 0.0);
}

double relative_entropy(const JointDistribution& p, const JointDistribution& q) {
  if (p.num_vars() != q.num_vars()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) continue;
    if (q[x] <= 0.0) {
      throw std::domain_error("relative_entropy: first argument puts mass outside support");
    }
    s += p[x] * std::log2(p[x] / q[x]);
  }
  return std::max(s, 0.0);
}

BayesNet m_projection_net(const JointDistribution& p, const Dag& g) {
  if (p.num_vars() != g.num_nodes()) {
    throw std::invalid_argument("m_projection: dimension mismatch");
  }
  const int n = g.num_nodes();
  Parametrization theta(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t rows = std::size_t{1} << g.parent_count(i);
    std::vector<double> mass(rows, 0.0);
    std::vector<double> mass1(rows, 0.0);
    for (std::uint32_t x = 0; x < p.size(); ++x) {
      const int c = row_index(g, i, x);
      mass[c] += p[x];
      if ((x >> i) & 1u) mass1[c] += p[x];
    }
    theta[i].resize(rows);
    for (std::size_t c = 0; c < rows; ++c) {
      theta[i][c] = mass[c] > 0.0 ? mass1[c] / mass[c] : 0.5;
    }
  }
  return BayesNet(Dag(g), std::move(theta));
}

JointDistribution m_projection(const JointDistribution& p, const Dag& g) {
  return joint_distribution(m_projection_net(p, g));
}

double kl_to_graph_factorized(const JointDistribution& p, const Dag& g) {
  if (p.num_vars() != g.num_nodes()) {
    throw std::invalid_argument("kl_to_graph: dimension mismatch");
  }
  const int n = g.num_nodes();
  double s = -raw_entropy(p.probs());
  for (int i = 0; i < n; ++i) {
    s += entropy(p, std::uint16_t(1u << i), g.parent_mask(i));
  }
  return std::max(s, 0.0);
}

double kl_to_graph(const JointDistribution& p, const Dag& g) {
  if (!p.is_strictly_positive()) {
    throw std::domain_error("kl_to_graph: distribution must be strictly positive");
  }
  const double via_entropies = kl_to_graph_factorized(p, g);
  const double via_projection = relative_entropy(p, m_projection(p, g));
  if (std::abs(via_entropies - via_projection) > 1e-9) {
    throw std::logic_error("kl_to_graph: internal cross-check failed");
  }
  return via_entropies;
}

double i_projection_objective(const Dag& g, const JointDistribution& p,
                              const std::vector<std::vector<double>>& t,
                              std::vector<std::vector<double>>* grad) {
  if (!p.is_strictly_positive()) {
    throw std::domain_error("i_projection: distribution must be strictly positive");
  }
  ReverseObjective obj(g, p);
  const int n = g.num_nodes();
  if (t.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("i_projection_objective: one coordinate block per node");
  }
  std::vector<double> flat(obj.dim());
  for (int i = 0; i < n; ++i) {
    if (t[i].size() != (std::size_t{1} << g.parent_count(i))) {
      throw std::invalid_argument("i_projection_objective: block size mismatch");
    }
    std::copy(t[i].begin(), t[i].end(), flat.begin() + obj.offset(i));
  }
  std::vector<double> flat_grad(obj.dim());
  const double f = obj.eval(flat, grad ? &flat_grad : nullptr);
  if (grad) {
    grad->assign(n, {});
    for (int i = 0; i < n; ++i) {
      const std::size_t rows = std::size_t{1} << g.parent_count(i);
      (*grad)[i].assign(flat_grad.begin() + obj.offset(i),
                        flat_grad.begin() + obj.offset(i) + rows);
    }
  }
  return f;
}

IProjectionResult i_projection(const JointDistribution& p, const Dag& g,
                               const IProjectionOptions& opts) {
  if (!p.is_strictly_positive()) {
    throw std::domain_error("i_projection: distribution must be strictly positive");
  }
  ReverseObjective obj(g, p);
  const int m = obj.dim();
  const int n = g.num_nodes();
  auto gen = make_stream(opts.seed, 0, 0);

  // Starting point of restart 0: logits of the m-projection tables.
  std::vector<double> start0(m);
  {
    const BayesNet proj = m_projection_net(p, g);
    for (int i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < proj.theta()[i].size(); ++c) {
        const double th = std::clamp(proj.theta()[i][c], 1e-3, 1.0 - 1e-3);
        start0[obj.offset(i) + static_cast<int>(c)] = logit(th);
      }
    }
  }

  IProjectionResult result;
  result.divergence_bits = std::numeric_limits<double>::infinity();
  bool best_converged = false;
  int iters_used = 0;

  std::vector<double> t(m), grad(m), grad_new(m), d(m), t_new(m), s(m), y(m);
  std::vector<double> h(static_cast<std::size_t>(m) * m);
  std::vector<double> hy(m);

  for (int r = 0; r < opts.restarts && iters_used < opts.max_iterations; ++r) {
    ++result.restarts_used;
    if (r == 0) {
      t = start0;
    } else {
      for (int k = 0; k < m; ++k) t[k] = uniform01(gen) * 5.0 - 2.5;
    }
    // Inverse-Hessian approximation, reset to identity per restart.
    std::fill(h.begin(), h.end(), 0.0);
    for (int k = 0; k < m; ++k) h[static_cast<std::size_t>(k) * m + k] = 1.0;

    double f = obj.eval(t, &grad);
    bool local_converged = false;

    while (iters_used < opts.max_iterations) {
      ++iters_used;
      for (int a = 0; a < m; ++a) {
        double v = 0.0;
        for (int b = 0; b < m; ++b) v += h[static_cast<std::size_t>(a) * m + b] * grad[b];
        d[a] = -v;
      }
      double gd = dot(grad, d);
      if (gd >= 0.0) {  // not a descent direction: fall back to steepest descent
        for (int k = 0; k < m; ++k) {
          std::fill(h.begin() + static_cast<std::size_t>(k) * m,
                    h.begin() + static_cast<std::size_t>(k) * m + m, 0.0);
          h[static_cast<std::size_t>(k) * m + k] = 1.0;
          d[k] = -grad[k];
        }
        gd = dot(grad, d);
        if (gd >= 0.0) {  // zero gradient: stationary point
          local_converged = true;
          break;
        }
      }
      // Backtracking line search with the Armijo condition.
      double alpha = 1.0;
      double f_new = f;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        for (int k = 0; k < m; ++k) t_new[k] = t[k] + alpha * d[k];
        f_new = obj.eval(t_new, &grad_new);
        if (f_new <= f + 1e-4 * alpha * gd) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;

      for (int k = 0; k < m; ++k) {
        s[k] = alpha * d[k];
        y[k] = grad_new[k] - grad[k];
      }
      const bool done = std::abs(f - f_new) <= opts.tolerance;
      const double sy = dot(s, y);
      if (sy > 1e-12) {
        // BFGS inverse update: H += (sy+yHy)/sy^2 ss^T - (Hys^T + sy^TH)/sy.
        for (int a = 0; a < m; ++a) {
          double v = 0.0;
          for (int b = 0; b < m; ++b) v += h[static_cast<std::size_t>(a) * m + b] * y[b];
          hy[a] = v;
        }
        const double yhy = dot(y, hy);
        const double c1 = (sy + yhy) / (sy * sy);
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            h[static_cast<std::size_t>(a) * m + b] +=
                c1 * s[a] * s[b] - (hy[a] * s[b] + s[a] * hy[b]) / sy;
          }
        }
      }
      t = t_new;
      f = f_new;
      grad = grad_new;
      if (done) {
        local_converged = true;
        break;
      }
    }

    if (f < result.divergence_bits) {
      result.divergence_bits = f;
      best_converged = local_converged;
      result.theta.assign(n, {});
      for (int i = 0; i < n; ++i) {
        const std::size_t rows = std::size_t{1} << g.parent_count(i);
        result.theta[i].resize(rows);
        for (std::size_t c = 0; c < rows; ++c) {
          result.theta[i][c] = sigmoid(t[obj.offset(i) + static_cast<int>(c)]);
        }
      }
    }
    // The objective is nonnegative, so a converged value this small is final.
    if (best_converged && result.divergence_bits < 1e-12) break;
  }

  result.iterations_used = iters_used;
  result.converged = best_converged;
  result.divergence_bits = std::max(result.divergence_bits, 0.0);
  return result;
}

double graph_to_kl(const Dag& g, const JointDistribution& p, const IProjectionOptions& opts) {
  const IProjectionResult r = i_projection(p, g, opts);
  if (!r.converged) {
    throw ConvergenceError("graph_to_kl: descent did not converge within budget",
                           r.divergence_bits);
  }
  return r.divergence_bits;
}

double information_content(const BayesNet& net, int i, int j) {
  const int n = net.dag().num_nodes();
  if (n > 6) {
    throw CapacityError("information_content: exhaustive subset scan limited to 6 nodes");
  }
  if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
    throw std::invalid_argument("information_content: bad variable pair");
  }
  const JointDistribution p = joint_distribution(net);
  const std::uint16_t rest = std::uint16_t(((1u << n) - 1) & ~(1u << i) & ~(1u << j));
  double best = std::numeric_limits<double>::infinity();
  std::uint16_t sub = rest;
  while (true) {
    best = std::min(best, mutual_information(p, i, j, sub));
    if (sub == 0) break;
    sub = std::uint16_t((sub - 1) & rest);
  }
  return best;
}

double network_ic(const BayesNet& net) {
  const auto edges = net.dag().edges();
  if (edges.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [u, v] : edges) {
    best = std::min(best, information_content(net, u, v));
  }
  return best;
}

}  // namespace bnlab
