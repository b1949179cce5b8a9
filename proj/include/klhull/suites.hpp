#pragma once

// Named verification suites. Each returns BoundReport rows; a suite passes
// when every row is satisfied. Monte Carlo rows compare mean - 3 stderr (or
// mean + 3 stderr) with the bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "klhull/bounds.hpp"
#include "klhull/entropic_sdp.hpp"
#include "klhull/error.hpp"
#include "klhull/io.hpp"
#include "klhull/quadmap.hpp"
#include "klhull/random.hpp"
#include "klhull/verify.hpp"

namespace klhull {

struct SuiteOptions {
  std::uint64_t seed = 1;
  long samples = 0;  // 0 selects the suite default
  int threads = 1;
  int instances = 100;  // sandwich only
};

struct SuiteResult {
  std::string name;
  std::vector<BoundReport> rows;
  std::vector<std::string> notes;  // informational, no pass/fail

  bool ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const BoundReport& r) { return r.satisfied; });
  }
};

inline constexpr long kLogMomentSamples = 1000000;
inline constexpr long kRankMTailSamples = 100000;

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline BoundReport upper_row(std::string name, const McEstimate& e, double bound) {
  return {std::move(name), e.mean, bound, e.mean <= bound + 3.0 * e.std_error};
}

}  // namespace detail

inline SuiteResult suite_constants() {
  SuiteResult s{"constants", {}, {}};
  auto& r = s.rows;
  const PhiResult p6 = phi_minimize(6.0);
  const double at3 = phi_expression(6.0, 3.0);
  const GaussLogMoments g = gauss_log_moments();
  const double tail = laplace_tail_upper(10, 1.0 + 3.0 / std::sqrt(10.0));

  r.push_back({"3 + ln 6 < beta", rank_one_certificate(), kBeta, rank_one_certificate() < kBeta});
  r.push_back({"phi(6) <= 5/72", p6.value, 5.0 / 72.0, p6.value <= 5.0 / 72.0});
  r.push_back({"phi_expression(6, 3) == 5/72", at3, 5.0 / 72.0, std::abs(at3 - 5.0 / 72.0) <= 1e-9});
  r.push_back({"phi(6) < 0.07", p6.value, 0.07, p6.value < 0.07});
  r.push_back({"E ln^2 x1^2 in (6.54, 6.55)", g.m2, 6.55, g.m2 > 6.54 && g.m2 < 6.55});
  r.push_back({"E ln^2 x1^2 closed form", g.m2, chi2_1_log_square_moment(),
               std::abs(g.m2 - chi2_1_log_square_moment()) <= 1e-9});
  r.push_back({"E |ln x1^2| in (1.75, 1.77)", g.m1, 1.76, g.m1 > 1.75 && g.m1 < 1.77});
  r.push_back({"sqrt(6.55 + 1) < 2.75", std::sqrt(7.55), 2.75, std::sqrt(7.55) < 2.75});
  r.push_back({"2.75 / 3 < 0.92", 2.75 / 3.0, 0.92, 2.75 / 3.0 < 0.92});
  r.push_back({"1 - 0.07 - 0.92 >= 0.01", 1.0 - 0.07 - 0.92, 0.01, 1.0 - 0.07 - 0.92 >= 0.01 - 1e-12});
  r.push_back({"laplace_tail_upper(10, 1 + 3/sqrt 10) <= exp(-9/8)", tail, std::exp(-9.0 / 8.0),
               tail <= std::exp(-9.0 / 8.0)});
  r.push_back({"exp(-9/8) < 0.33", std::exp(-9.0 / 8.0), 0.33, std::exp(-9.0 / 8.0) < 0.33});
  r.push_back({"1 - 0.33 - 0.5 >= 0.17", 1.0 - 0.33 - 0.5, 0.17, 1.0 - 0.33 - 0.5 >= 0.17 - 1e-12});
  for (int m : {1, 4, 16, 64, 100}) {
    const double sm = std::sqrt(double(m));
    const double lhs = std::sqrt(std::numbers::pi / m) + std::sqrt(1.5 * std::numbers::pi / m) + 2.0 / m;
    r.push_back({"sqrt(pi/m) + sqrt(3pi/2m) + 2/m < 6/sqrt m, m=" + std::to_string(m), lhs, 6.0 / sm,
                 lhs < 6.0 / sm});
    const double cert = rank_m_certificate(m);
    r.push_back({"12/sqrt m + ln(1 + 3/sqrt m) < 15/sqrt m, m=" + std::to_string(m), cert,
                 rank_m_beta(m), cert < rank_m_beta(m)});
  }
  for (int m : {9, 16, 64, 100}) {
    const double t = laplace_tail_upper(m, rank_m_norm_threshold(m));
    r.push_back({"laplace_tail_upper(m, 1 + 3/sqrt m) <= exp(-9/8), m=" + std::to_string(m), t,
                 std::exp(-9.0 / 8.0), t <= std::exp(-9.0 / 8.0)});
  }
  s.notes.push_back(detail::fmt("phi(6) minimizer alpha = %.6f", p6.alpha));
  return s;
}

// 20 random diagonal forms (n in 1..10) and the rank-one form.
inline SuiteResult suite_log_moments(const SuiteOptions& opt = {}) {
  const long samples = opt.samples > 0 ? opt.samples : kLogMomentSamples;
  SuiteResult s{"lemma21", {}, {}};
  const GaussianSampler root(opt.seed, 0x6c3231ull);
  GaussianSampler pick = root.substream(0);
  std::vector<DiagonalForm> forms{DiagonalForm::rank_one(1)};
  for (int f = 0; f < 20; ++f) {
    const auto n = static_cast<std::size_t>(1 + pick.uniform() * 10.0);
    forms.push_back(DiagonalForm::random(std::min<std::size_t>(n, 10), pick));
  }
  for (std::size_t f = 0; f < forms.size(); ++f) {
    const std::string tag = f == 0 ? "rank-1" : "form " + std::to_string(f) + " (n=" +
                                                    std::to_string(forms[f].n()) + ")";
    const auto q = mc_qm_values(forms[f], 1, samples, root.substream(1 + f), opt.threads);
    const McEstimate abs_log = mean_abs_log(q);
    s.rows.push_back(detail::upper_row("E|ln q| < 2.75, " + tag, abs_log, 2.75));
    if (f == 0) {
      s.rows.push_back({"E|ln q| = 1.76 +- 0.02, rank-1", abs_log.mean, 1.76,
                        std::abs(abs_log.mean - 1.76) <= 0.02});
    }
    for (double t : {2.0, 4.0, 6.0, 10.0}) {
      const McEstimate e = tail_frequency(q, t);
      s.rows.push_back(detail::upper_row("P(q >= " + detail::fmt("%g", t) + ") <= phi, " + tag, e, phi(t)));
      if (f == 0) {
        const double exact = chi2_1_survival(t);
        const bool close = std::abs(e.mean - exact) <= 4.0 * std::sqrt(exact * (1 - exact) / samples);
        s.rows.push_back({"P(q >= " + detail::fmt("%g", t) + ") = erfc(sqrt(t/2)), rank-1", e.mean,
                          exact, close});
      }
    }
  }
  return s;
}

// m in {1, 4, 16, 100}, 5 random forms each: both tails at t = 1 + 3/sqrt m,
// 2, 1/2 and 1/(1 + 3/sqrt m), and E|ln q_m| <= 6/sqrt m.
inline SuiteResult suite_rank_m_tails(const SuiteOptions& opt = {}) {
  const long samples = opt.samples > 0 ? opt.samples : kRankMTailSamples;
  SuiteResult s{"lemma51", {}, {}};
  const GaussianSampler root(opt.seed, 0x6c3531ull);
  GaussianSampler pick = root.substream(0);
  std::uint64_t stream = 1;
  for (int m : {1, 4, 16, 100}) {
    for (int f = 0; f < 5; ++f) {
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(1 + pick.uniform() * 8.0), 8);
      const DiagonalForm form = f == 0 ? DiagonalForm::rank_one(1) : DiagonalForm::random(n, pick);
      const std::string tag = "m=" + std::to_string(m) + ", form " + std::to_string(f) + " (n=" +
                              std::to_string(form.n()) + ")";
      const auto q = mc_qm_values(form, m, samples, root.substream(stream++), opt.threads);
      const double s3 = 3.0 / std::sqrt(double(m));
      for (double t : {1.0 + s3, 2.0, 0.5, 1.0 / (1.0 + s3)}) {
        const McEstimate e = tail_frequency(q, t);
        const char* side = t > 1.0 ? "P(q_m >= " : "P(q_m <= ";
        s.rows.push_back(detail::upper_row(side + detail::fmt("%.4g", t) + ") <= laplace, " + tag, e,
                                           laplace_tail_upper(m, t)));
      }
      s.rows.push_back(detail::upper_row("E|ln q_m| <= 6/sqrt m, " + tag, mean_abs_log(q),
                                         6.0 / std::sqrt(double(m))));
    }
  }
  return s;
}

struct SandwichInstance {
  QuadraticMap map;
  SimplexVector alpha;
};

// Random instances with n in 1..6, k in 1..5, condition numbers <= 100 and
// alpha uniform on the simplex.
inline std::vector<SandwichInstance> sandwich_instances(std::uint64_t seed, int count) {
  std::vector<SandwichInstance> out;
  const GaussianSampler root(seed, 0x73616eull);
  for (int i = 0; i < count; ++i) {
    GaussianSampler s = root.substream(static_cast<std::uint64_t>(i));
    const auto n = std::min<std::size_t>(1 + static_cast<std::size_t>(s.uniform() * 6.0), 6);
    const auto k = std::min<std::size_t>(1 + static_cast<std::size_t>(s.uniform() * 5.0), 5);
    Instance inst = generate_instance(n, k, splitmix64(seed ^ splitmix64(i)), 100.0, false);
    Vector w(k);
    double sum = 0.0;
    for (double& v : w) sum += (v = -std::log(s.uniform()));
    for (double& v : w) v /= sum;
    out.push_back({std::move(inst.map), SimplexVector(std::move(w))});
  }
  return out;
}

inline SuiteResult suite_sandwich(const SuiteOptions& opt = {}) {
  SuiteResult s{"sandwich", {}, {}};
  const auto instances = sandwich_instances(opt.seed, opt.instances);
  const GaussianSampler root(opt.seed, 0x6f7261ull);
  double worst_upper = -1e300, worst_lower = -1e300, max_gap = -1e300, max_fw = 0.0;
  bool upper_ok = true, lower_ok = true, converged = true;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const SandwichReport r = check_sandwich(instances[i].map, instances[i].alpha,
                                            root.substream(i));
    worst_upper = std::max(worst_upper, r.sphere - r.sdp_value - r.fw_gap);
    worst_lower = std::max(worst_lower, r.sdp_value - r.sphere - r.fw_gap);
    max_gap = std::max(max_gap, r.gap());
    max_fw = std::max(max_fw, r.fw_gap);
    upper_ok = upper_ok && r.upper_ok;
    lower_ok = lower_ok && r.lower_ok;
    converged = converged && r.fw_gap <= kDefaults.fw_gap;
    if (!r.ok()) s.notes.push_back("instance " + std::to_string(i) + " failed:\n" + r.instance);
  }
  const std::string cnt = std::to_string(instances.size()) + " instances";
  s.rows.push_back({"max(sphere - sdp - fw_gap) <= 1e-6, " + cnt, worst_upper, 1e-6, upper_ok});
  s.rows.push_back({"max(sdp - sphere - fw_gap) <= 4.8, " + cnt, worst_lower, kBeta, lower_ok});
  s.rows.push_back({"max fw_gap <= 1e-6, " + cnt, max_fw, kDefaults.fw_gap, converged});
  s.notes.push_back(detail::fmt("empirical max (sdp - sphere) = %.6g", max_gap));
  return s;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"constants", "lemma21", "lemma51", "sandwich"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, const SuiteOptions& opt = {}) {
  if (name == "constants") return suite_constants();
  if (name == "lemma21") return suite_log_moments(opt);
  if (name == "lemma51") return suite_rank_m_tails(opt);
  if (name == "sandwich") return suite_sandwich(opt);
  throw InvalidArgument("unknown suite \"" + name + "\" (expected constants, lemma21, lemma51 or sandwich)");
}

inline Json suite_json(const SuiteResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"name", r.name}, {"value", r.value}, {"reference", r.reference},
                    {"satisfied", r.satisfied}});
  return {{"suite", s.name}, {"ok", s.ok()}, {"rows", rows}, {"notes", s.notes}};
}

}  // namespace klhull
