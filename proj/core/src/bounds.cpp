#include "bnlab/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bnlab/divergences.hpp"

namespace bnlab {

namespace {

constexpr double kLn2 = 0.69314718055994531;
const std::string kBaseNote = "logs are base 2";

BoundReport make_report(std::string id, const nlohmann::json& inputs, double raw,
                        std::string unit, std::string note) {
  BoundReport r;
  r.bound_id = std::move(id);
  r.inputs_json = inputs.dump();
  r.raw_value = raw;
  r.value = unit == "probability" ? std::clamp(raw, 0.0, 1.0) : raw;
  r.unit = std::move(unit);
  r.note = std::move(note);
  return r;
}

}  // namespace

BoundReport kl_pointwise_bound(double gamma, double epsilon) {
  if (!(gamma > 0.0 && gamma <= 0.5)) {
    throw std::invalid_argument("kl_pointwise_bound: gamma must be in (0, 0.5]");
  }
  if (!(epsilon > 0.0 && epsilon < gamma / 2.0)) {
    throw std::invalid_argument("kl_pointwise_bound: requires 0 < epsilon < gamma/2");
  }
  const double raw = 8.0 * epsilon * epsilon / (gamma * gamma);
  return make_report("kl-pointwise", {{"gamma", gamma}, {"epsilon", epsilon}}, raw,
                     "divergence-bits", kBaseNote);
}

BoundReport kl_chain_bound(double gamma, double epsilon, std::uint64_t m) {
  if (!(gamma > 0.0 && gamma <= 0.5)) {
    throw std::invalid_argument("kl_chain_bound: gamma must be in (0, 0.5]");
  }
  if (m < 2) throw std::invalid_argument("kl_chain_bound: m must be >= 2");
  if (!(epsilon > 0.0 && epsilon < gamma * gamma / (32.0 * kLn2))) {
    throw std::invalid_argument("kl_chain_bound: requires 0 < epsilon < gamma^2/(32*ln2)");
  }
  const double raw = 64.0 * static_cast<double>(m) * kLn2 / (gamma * gamma) * epsilon;
  return make_report("kl-chain", {{"gamma", gamma}, {"epsilon", epsilon}, {"m", m}}, raw,
                     "divergence-bits", kBaseNote + "; the 64*m*ln2 constant is the proof form");
}

BoundReport sanov_lower_exponent(const BayesNet& net_star, const Dag& g) {
  const JointDistribution p_star = joint_distribution(net_star);
  if (kl_to_graph(p_star, g) <= 1e-9) {
    throw std::domain_error(
        "sanov_lower_exponent: rival is an I-map, the exponent is undefined; "
        "the over-fit asymptote regime applies");
  }
  const double kl = graph_to_kl(g, p_star);
  const nlohmann::json inputs = {{"n", g.num_nodes()},
                                 {"dim_star", net_star.dag().dimension()},
                                 {"dim_rival", g.dimension()},
                                 {"reverse_kl_bits", kl}};
  return make_report("sanov-lower-exponent", inputs, -kl, "exponent-per-sample", kBaseNote);
}

BoundReport underfit_upper_exponent(const BayesNet& net_star) {
  if (!joint_distribution(net_star).is_strictly_positive()) {
    throw std::domain_error("underfit_upper_exponent: net must be strictly positive");
  }
  const int n = net_star.dag().num_nodes();
  const double g = gamma(net_star);
  const double ic = network_ic(net_star);
  const double branch1 = -std::pow(g, 2.0 * n) / 6.0;
  // Magnitude of the n*log2(gamma/2)+1 bracket; it is negative for any
  // realistic gamma and enters as a Lipschitz constant.
  const double bracket = std::abs(n * std::log2(g / 2.0) + 1.0);
  // The /6 in the first branch is the printed constant; substituting the
  // deviation level gamma^(2n)/4 into the exp(-alpha^2*N/3) exponent would
  // give /12. The looser printed form is kept.
  const double branch2 =
      -ic * ic / (48.0 * bracket * bracket * std::pow(4.0, static_cast<double>(n)));
  const double raw = std::isfinite(ic) ? std::max(branch1, branch2) : branch1;
  const nlohmann::json inputs = {{"n", n}, {"gamma", g}, {"ic", ic}};
  return make_report("underfit-upper-exponent", inputs, raw, "exponent-per-sample",
                     kBaseNote + "; bracket n*log2(gamma/2)+1 taken as a magnitude");
}

BoundReport ideal_recovery_threshold(const BayesNet& net_star, const PenaltyFunction& psi) {
  const int n = net_star.dag().num_nodes();
  const int dim = net_star.dag().dimension();
  if (dim <= n) {
    throw std::invalid_argument(
        "ideal_recovery_threshold: the true graph has no extra dimensions, no constraint");
  }
  const double ic = network_ic(net_star);
  const double ratio = ic / static_cast<double>(dim - n);
  constexpr std::uint64_t kScanLimit = 10'000'000;
  std::uint64_t last_fail = 0;
  for (std::uint64_t N = 1; N <= kScanLimit; ++N) {
    if (psi(N) / static_cast<double>(N) > ratio) last_fail = N;
  }
  if (last_fail == kScanLimit) {
    throw std::runtime_error("ideal_recovery_threshold: no threshold within the scan limit");
  }
  const double raw = static_cast<double>(last_fail + 1);
  const nlohmann::json inputs = {
      {"n", n}, {"dim_star", dim}, {"ic", ic}, {"penalty", psi.describe()}};
  return make_report("ideal-recovery-threshold", inputs, raw, "threshold-N",
                     "smallest N0 with psi(N)/N <= IC/(dim-n) for all scanned N >= N0; " +
                         kBaseNote);
}

std::vector<BoundReport> deviation_bounds(const BayesNet& net_star, double alpha,
                                          std::uint64_t N, std::uint16_t subset,
                                          std::uint16_t subset2) {
  const int n = net_star.dag().num_nodes();
  const double g = gamma(net_star);
  const double gn = std::pow(g, static_cast<double>(n));
  if (!(alpha > 0.0 && alpha < gn)) {
    throw std::invalid_argument(
        "deviation bounds (marginal, plogp, entropy, conditional-entropy, loglik-gap): "
        "alpha must satisfy 0 < alpha < gamma^n");
  }
  if (N < 1) throw std::invalid_argument("deviation_bounds: N must be >= 1");
  if (subset == 0) throw std::invalid_argument("deviation_bounds: empty subset");
  if (subset & subset2) {
    throw std::invalid_argument("deviation_bounds: subset and conditioning set overlap");
  }
  const JointDistribution p = joint_distribution(net_star);
  const std::vector<double> marg = p.marginal(subset);
  const double p_max = *std::max_element(marg.begin(), marg.end());
  const double Nd = static_cast<double>(N);
  const double a2n3 = alpha * alpha * Nd / 3.0;
  // Lipschitz magnitude of x*log2(x) on [gamma^n - alpha, 1].
  const double lipschitz = std::abs(std::log2(gn - alpha) + 1.0);
  const double pow2n = std::pow(2.0, static_cast<double>(n));

  nlohmann::json inputs = {{"n", n},      {"gamma", g},        {"alpha", alpha},
                           {"N", N},      {"subset", subset},  {"subset2", subset2},
                           {"p_max", p_max}};
  std::vector<BoundReport> out;
  char note[160];

  std::snprintf(note, sizeof(note),
                "P(|empirical - true| >= alpha) for the worst assignment of the subset; %s",
                kBaseNote.c_str());
  out.push_back(make_report("marginal-deviation", inputs, 2.0 * std::exp(-a2n3 / p_max),
                            "probability", note));

  std::snprintf(note, sizeof(note),
                "deviation threshold alpha*|log2(gamma^n-alpha)+1| = %.17g; %s",
                alpha * lipschitz, kBaseNote.c_str());
  out.push_back(make_report("plogp-deviation", inputs, 2.0 * std::exp(-a2n3 / p_max),
                            "probability", note));

  std::snprintf(note, sizeof(note),
                "deviation threshold 2^n*alpha*|log2(gamma^n-alpha)+1| = %.17g; %s",
                pow2n * alpha * lipschitz, kBaseNote.c_str());
  out.push_back(make_report("entropy-deviation", inputs, 2.0 * pow2n * std::exp(-a2n3),
                            "probability", note));

  std::snprintf(note, sizeof(note),
                "deviation threshold 2^(n+1)*alpha*|log2(gamma^n-alpha)+1| = %.17g; %s",
                2.0 * pow2n * alpha * lipschitz, kBaseNote.c_str());
  out.push_back(make_report("conditional-entropy-deviation", inputs,
                            4.0 * pow2n * std::exp(-a2n3), "probability", note));

  std::snprintf(note, sizeof(note),
                "deviation threshold N*n*2^(n+2)*alpha*|log2(gamma^n-alpha)+1| = %.17g; %s",
                Nd * n * 4.0 * pow2n * alpha * lipschitz, kBaseNote.c_str());
  out.push_back(make_report("loglik-gap-deviation", inputs,
                            n * 8.0 * pow2n * std::exp(-a2n3), "probability", note));
  return out;
}

BoundReport overfit_asymptote(int dim_gap, std::uint64_t N) {
  if (dim_gap < 1) throw std::invalid_argument("overfit_asymptote: dim_gap must be >= 1");
  if (N < 2) throw std::invalid_argument("overfit_asymptote: N must be >= 2");
  const double half_gap = dim_gap / 2.0;
  const double log2N = std::log2(static_cast<double>(N));
  const double raw = std::pow(log2N, half_gap - 1.0) *
                     std::pow(static_cast<double>(N), -half_gap) / std::tgamma(half_gap);
  const nlohmann::json inputs = {{"dim_gap", dim_gap}, {"N", N}};
  return make_report("overfit-asymptote", inputs, raw, "probability",
                     kBaseNote + "; asymptotic up to a constant factor");
}

}  // namespace bnlab
