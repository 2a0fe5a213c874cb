#pragma once

// Experiment runners behind the command-line subcommands. Each takes the
// expanded grid of configurations and returns a table with a fixed schema.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dnawt/capacity.hpp"
#include "dnawt/codec.hpp"
#include "dnawt/config.hpp"
#include "dnawt/converse.hpp"
#include "dnawt/csv.hpp"
#include "dnawt/erasure_probs.hpp"
#include "dnawt/leakage.hpp"
#include "dnawt/sampling_channel.hpp"

namespace dnawt {

struct ExperimentOutput {
  Table table;
  std::vector<std::string> warnings;
};

struct Experiment {
  std::string name;
  std::string summary;
  std::set<std::string> keys;
  bool stochastic;
  std::function<ExperimentOutput(const std::vector<Config>&)> run;
};

namespace detail {

inline std::size_t as_size(const Config& c, const std::string& key, std::uint64_t fallback) {
  return static_cast<std::size_t>(c.get_u64(key, fallback));
}

inline std::uint64_t required_seed(const Config& c) {
  if (!c.has("seed")) config_error("a seed is required for stochastic runs (--seed or seed=...)");
  return c.get_u64("seed", 0);
}

inline std::string opt_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace detail

// ---- capacity -------------------------------------------------------------

inline ExperimentOutput run_capacity(const std::vector<Config>& points) {
  ExperimentOutput out;
  out.table.header = {"experiment", "beta", "p0", "q0", "r_key", "C_M", "C_s", "C_s_keyed", "C_bewtc_scaled"};
  for (const auto& c : points) {
    const CapacityInputs in{c.get_double("beta", 2.0), c.get_probability("p0", 0.1), c.get_probability("q0", 0.6),
                            c.get_double("r_key", 0.0)};
    in.validate();
    const double share = payload_share(in.beta);
    std::optional<double> plain;
    if (in.q0 >= in.p0) plain = secure_storage_capacity(in.beta, in.p0, in.q0);
    out.table.rows.push_back({"capacity", format_number(in.beta), format_number(in.p0), format_number(in.q0),
                              format_number(in.r_key), format_number(storage_capacity(in.beta, in.p0)),
                              detail::opt_number(plain), format_number(secure_storage_capacity_keyed(in)),
                              format_number(share * bewtc_secrecy_capacity(in.p0, in.q0, in.r_key / share))});
  }
  return out;
}

// ---- erasure-probs --------------------------------------------------------

struct MixPreset {
  double M, kappa_bar, rho, N_r;
};

inline MixPreset mix_preset(const std::string& name) {
  if (name == "eve") return {1e4, 100.0, 1e-5, 5e8};
  if (name == "bob") return {1e4, 1e4, 0.1, 1e6};
  config_error("unknown erasure-probs preset '" + name + "' (expected eve or bob)");
}

inline ExperimentOutput run_erasure_probs(const std::vector<Config>& points) {
  ExperimentOutput out;
  out.table.header = {"experiment", "M",   "kappa_bar",   "N_B",        "N_r",       "N_tot",
                      "rho",        "s",   "theta_exact", "eve_approx", "bob_approx"};
  for (const auto& c : points) {
    const std::string preset = c.get_string("preset", "eve");
    const MixPreset p = mix_preset(preset);
    const double M = c.get_double("M", p.M);
    const double kappa = c.get_double("kappa_bar", p.kappa_bar);
    const double N_r = static_cast<double>(c.get_u64("N_r", static_cast<std::uint64_t>(p.N_r)));
    const MixModel model = c.has("N_B") ? MixModel::from_background(M, kappa, c.get_double("N_B", 0.0), N_r)
                                        : MixModel::from_rho(M, kappa, c.get_double("rho", p.rho), N_r);
    const double s = static_cast<double>(c.get_u64("s", 1));
    const double rho = model.rho();
    const double eve = std::pow(eve_erasure_prob(rho, N_r, M), s);
    const double bob = rho * s / M >= 1.0 ? (N_r > 0 ? 0.0 : 1.0) : std::exp(N_r * std::log1p(-rho * s / M));
    if (!model.reads_negligible())
      out.warnings.push_back("N_r exceeds 10% of N_tot; the approximations assume N_r << N_tot");
    if (!eve_regime(rho) && !bob_regime(rho))
      out.warnings.push_back("rho = " + format_number(rho) + " lies between the two approximation regimes");
    out.table.rows.push_back({"erasure-probs", format_number(M), format_number(kappa), format_number(model.N_B),
                              format_number(N_r), format_number(model.N_tot()), format_number(rho), format_number(s),
                              format_number(theta_exact(model, s)), format_number(eve), format_number(bob)});
  }
  return out;
}

// ---- simulate -------------------------------------------------------------

struct SimulationPreset {
  std::string scheme;
  std::size_t M, L;
  double p0, q0;
  std::size_t n_w, n_k, n_aux;
};

inline SimulationPreset simulation_preset(const std::string& name) {
  if (name == "otp-smoke") return {"otp", 4, 4, 0.1, 0.6, 16, 16, 1};
  if (name == "below-capacity") return {"wiretap", 4, 4, 0.1, 0.6, 4, 1, 9};
  if (name == "above-capacity") return {"wiretap", 4, 4, 0.1, 0.6, 398, 1, 1};
  config_error("unknown simulate preset '" + name + "' (expected otp-smoke, below-capacity or above-capacity)");
}

struct SimulationSummary {
  double bob_error_rate = 0.0;
  double bob_erasure_freq = 0.0;
  double eve_erasure_freq = 0.0;
};

/// Monte Carlo over the full DNA pipeline with uniform messages and keys.
inline SimulationSummary simulate_pipeline(const WiretapCodebook& book, const ChannelGeometry& geometry,
                                           const SamplingDistribution& P, const SamplingDistribution& Q,
                                           std::size_t trials, std::uint64_t seed) {
  SimulationSummary s;
  if (trials == 0) return s;
  std::size_t errors = 0, bob_erased = 0, eve_erased = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, t);
    SplitMix64 rng(ts);
    const auto w = static_cast<std::size_t>(rng.below(book.n_w()));
    const auto k = static_cast<std::size_t>(rng.below(book.n_k()));
    const auto r = dna_wiretap_pipeline(w, k, geometry, P, Q, book, PipelineSeeds::derive(derive_seed(ts, 1)));
    if (!r.bob.ok() || r.bob.message != w) ++errors;
    bob_erased += r.bob_view.mask().erased_count();
    eve_erased += r.eve_view.mask().erased_count();
  }
  const double n = static_cast<double>(trials);
  s.bob_error_rate = static_cast<double>(errors) / n;
  s.bob_erasure_freq = static_cast<double>(bob_erased) / (n * static_cast<double>(book.m()));
  s.eve_erasure_freq = static_cast<double>(eve_erased) / (n * static_cast<double>(book.m()));
  return s;
}

inline ExperimentOutput run_simulation(const std::vector<Config>& points) {
  ExperimentOutput out;
  out.table.header = {"experiment", "preset",      "M",           "L",          "beta_finite",      "p0",
                      "q0",         "n_w",         "n_k",         "n_aux",      "message_rate",     "trials",
                      "seed",       "bob_error_rate", "bob_erasure_freq", "eve_erasure_freq", "exact_error",
                      "exact_leakage_bits", "exact_tv", "payload_fraction"};
  for (const auto& c : points) {
    const std::string preset = c.get_string("preset", "below-capacity");
    const SimulationPreset p = simulation_preset(preset);
    const std::string scheme = c.get_string("scheme", p.scheme);
    if (scheme != "otp" && scheme != "wiretap") config_error("scheme must be otp or wiretap");
    const ChannelGeometry geometry{detail::as_size(c, "M", p.M), detail::as_size(c, "L", p.L)};
    geometry.validate();
    const IndexScheme index(geometry.M, geometry.L);
    const double p0 = c.get_probability("p0", p.p0);
    const double q0 = c.get_probability("q0", p.q0);
    const std::size_t n_w = detail::as_size(c, "n_w", p.n_w);
    const std::size_t trials = detail::as_size(c, "trials", 10000);
    const std::uint64_t seed = detail::required_seed(c);
    const std::uint64_t budget = c.get_u64("budget", kDefaultEnumerationBudget);

    const WiretapCodebook book =
        scheme == "otp" ? make_otp_codebook(geometry.M, index.payload_width(), n_w, derive_seed(seed, 0))
                        : generate_codebook(geometry.M, index.payload_width(), n_w, detail::as_size(c, "n_k", p.n_k),
                                            detail::as_size(c, "n_aux", p.n_aux), derive_seed(seed, 0));
    const auto summary = simulate_pipeline(book, geometry, SamplingDistribution::erasure(p0),
                                           SamplingDistribution::erasure(q0), trials, derive_seed(seed, 1));
    std::optional<double> exact_error, exact_leak, exact_tv;
    try {
      const ErasureProfile profile = erasure_profile(book, budget);
      exact_error = profile.error_probability(p0);
      exact_leak = profile.mutual_information(q0);
      exact_tv = profile.variation(q0);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      out.warnings.push_back("exact enumeration skipped: " + std::string(e.what()));
    }
    const double ml = static_cast<double>(geometry.M * geometry.L);
    out.table.rows.push_back(
        {"simulate", preset, format_count(geometry.M), format_count(geometry.L), format_number(geometry.beta()),
         format_number(p0), format_number(q0), format_count(book.n_w()), format_count(book.n_k()),
         format_count(book.n_aux()), format_number(std::log2(static_cast<double>(book.n_w())) / ml),
         format_count(trials), format_count(seed), format_number(summary.bob_error_rate),
         format_number(summary.bob_erasure_freq), format_number(summary.eve_erasure_freq),
         detail::opt_number(exact_error), detail::opt_number(exact_leak), detail::opt_number(exact_tv),
         format_number(static_cast<double>(index.payload_width()) / static_cast<double>(geometry.L))});
  }
  return out;
}

// ---- leakage --------------------------------------------------------------

inline ExperimentOutput run_leakage(const std::vector<Config>& points) {
  ExperimentOutput out;
  out.table.header = {"experiment", "m",      "l",           "n_w",        "n_k",          "n_aux",
                      "eps_m",      "eps_w",  "seed",        "mi_bits",    "tv",           "csiszar_bound",
                      "csiszar_ok", "decode_error", "mc_trials", "mc_mi_bits", "mc_se"};
  for (const auto& c : points) {
    const std::string scheme = c.get_string("scheme", "wiretap");
    if (scheme != "otp" && scheme != "wiretap") config_error("scheme must be otp or wiretap");
    const std::size_t m = detail::as_size(c, "m", 6);
    const std::size_t l = detail::as_size(c, "l", 3);
    const std::size_t n_w = detail::as_size(c, "n_w", 4);
    const double eps_m = c.get_probability("eps_m", 0.2);
    const double eps_w = c.get_probability("eps_w", 0.7);
    const std::uint64_t seed = detail::required_seed(c);
    const std::size_t mc_trials = detail::as_size(c, "mc_trials", 0);
    const std::uint64_t budget = c.get_u64("budget", kDefaultEnumerationBudget);
    const WiretapCodebook book = scheme == "otp" ? make_otp_codebook(m, l, n_w, derive_seed(seed, 0))
                                                 : generate_codebook(m, l, n_w, detail::as_size(c, "n_k", 2),
                                                                     detail::as_size(c, "n_aux", 2), derive_seed(seed, 0));
    const ErasureProfile profile = erasure_profile(book, budget);
    LeakageReport r;
    r.n_w = book.n_w();
    r.mi_bits = profile.mutual_information(eps_w);
    r.tv = profile.variation(eps_w);
    r.csiszar_bound = csiszar_bound(2.0 * r.tv, r.n_w);
    r.decode_error = profile.error_probability(eps_m);
    std::string csiszar_ok;
    if (r.n_w >= 4) csiszar_ok = csiszar_bound_check(r) ? "1" : "0";
    std::optional<double> mc_mean, mc_se;
    if (mc_trials > 0) {
      const Estimate e = mc_leakage_estimate(book, eps_w, mc_trials, derive_seed(seed, 1));
      mc_mean = e.mean;
      mc_se = e.se;
    }
    out.table.rows.push_back({"leakage", format_count(m), format_count(l), format_count(book.n_w()),
                              format_count(book.n_k()), format_count(book.n_aux()), format_number(eps_m),
                              format_number(eps_w), format_count(seed), format_number(r.mi_bits), format_number(r.tv),
                              format_number(r.csiszar_bound), csiszar_ok, format_number(r.decode_error),
                              format_count(mc_trials), detail::opt_number(mc_mean), detail::opt_number(mc_se)});
  }
  return out;
}

// ---- optimize -------------------------------------------------------------

inline ExperimentOutput run_optimize(const std::vector<Config>& points) {
  ExperimentOutput out;
  out.table.header = {"experiment", "task", "M", "delta", "p0", "q0", "x", "resolution", "value", "reference", "passes"};
  for (const auto& c : points) {
    const std::string task = c.get_string("task", "prop1");
    const std::size_t M = detail::as_size(c, "M", 4);
    // The derivative margin turns positive only for very small delta at the default q0.
    const double delta = c.get_double("delta", task == "lemma2" ? 1e-12 : 0.01);
    const double p0 = c.get_probability("p0", 0.3);
    const double q0 = c.get_probability("q0", 0.8);
    std::vector<std::string> row{"optimize", task, format_count(M), format_number(delta), format_number(p0),
                                 format_number(q0)};
    std::string x_col, res_col;
    double value = 0.0, reference = 0.0;
    bool passes = false;
    if (task == "prop1") {
      const std::size_t resolution = detail::as_size(c, "resolution", 200);
      const auto r = prop1_vertex_check(M, delta, p0, q0, resolution);
      value = r.max_value;
      reference = r.vertex_value;
      passes = r.passes();
      res_col = format_count(resolution);
    } else if (task == "kkt") {
      const auto s = kkt_maximizer(M, delta);
      value = s.value;
      reference = s.formula_value;
      passes = std::abs(kkt_residual(M, s.lambda)) <= 1e-12 && s.lambda <= 1.0 &&
               std::abs(s.value - s.formula_value) <= 1e-12;
    } else if (task == "lemma2") {
      value = lemma2_margin(delta, q0);
      reference = 0.0;
      passes = value > 0.0;
    } else if (task == "entropy-ratio") {
      const double x = c.get_double("x", 1e-8);
      value = entropy_ratio(x, p0, q0);
      reference = q0 - p0;
      passes = std::abs(value - reference) <= 1e-2;
      x_col = format_number(x);
    } else if (task == "appc") {
      const double beta = c.get_double("beta", 2.0);
      const double L = beta * std::log2(static_cast<double>(M));
      value = appc_rate_bound(static_cast<double>(M), L, p0, q0, delta);
      reference = appc_rate_limit(beta, p0, q0, delta);
      passes = std::isfinite(value);
    } else {
      config_error("unknown optimize task '" + task + "' (expected prop1, kkt, lemma2, entropy-ratio or appc)");
    }
    row.insert(row.end(), {x_col, res_col, format_number(value), format_number(reference), passes ? "1" : "0"});
    out.table.rows.push_back(std::move(row));
  }
  return out;
}

inline std::vector<Experiment> experiments() {
  const std::set<std::string> common{"budget"};
  const auto with = [&](std::set<std::string> keys) {
    keys.insert(common.begin(), common.end());
    return keys;
  };
  return {
      {"capacity", "tabulate the capacity formulas", with({"beta", "p0", "q0", "r_key"}), false, run_capacity},
      {"erasure-probs", "oligo erasure probabilities of a mixed sample",
       with({"preset", "M", "kappa_bar", "rho", "N_B", "N_r", "s"}), false, run_erasure_probs},
      {"simulate", "Monte Carlo of the DNA wiretap pipeline",
       with({"preset", "scheme", "M", "L", "p0", "q0", "n_w", "n_k", "n_aux", "seed", "trials"}), true,
       run_simulation},
      {"leakage", "exact leakage and error of a block-erasure wiretap code",
       with({"scheme", "m", "l", "n_w", "n_k", "n_aux", "eps_m", "eps_w", "seed", "mc_trials"}), true, run_leakage},
      {"optimize", "converse optimization oracles",
       with({"task", "M", "delta", "p0", "q0", "x", "resolution", "beta"}), false, run_optimize},
  };
}

}  // namespace dnawt
