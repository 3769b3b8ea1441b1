// meanders: samplers, exact values, exhaustive enumeration and Monte Carlo
// experiments for random meander systems.
//
// Exit codes: 0 success, 1 usage error, 2 validation/domain error,
// 3 acceptance failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanders/acceptance.hpp"
#include "meanders/analytic.hpp"
#include "meanders/bijections.hpp"
#include "meanders/cycles.hpp"
#include "meanders/enumeration.hpp"
#include "meanders/harness.hpp"
#include "meanders/json_io.hpp"
#include "meanders/samplers.hpp"

namespace {

using namespace meanders;

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stol(part));
  if (out.empty()) throw InvalidTypeError("empty list");
  return out;
}

int cmd_sample(const std::string& family_text, long n, std::uint64_t seed, long count) {
  const Family family = Family::parse(family_text);
  const FamilySampler sampler(family, n);
  for (long i = 0; i < count; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    std::cout << serialize(sampler.sample(rng)) << '\n';
  }
  return 0;
}

int cmd_stats(const std::string& in_path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!in_path.empty()) {
    file.open(in_path);
    if (!file) throw ValidationError("cannot open " + in_path);
    in = &file;
  }
  std::string line;
  CycleScratch scratch;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    const MeanderSystem ms = deserialize(line);
    const SpecialCounts sc = special_counts(ms);
    nlohmann::ordered_json hist, cluster;
    std::size_t largest = 0;
    std::map<Index, std::int64_t> half_lengths;
    std::int64_t cycles = 0;
    for_each_cycle(ms, scratch, [&](const std::vector<Index>& sup) {
      ++cycles;
      ++half_lengths[static_cast<Index>(sup.size() / 2)];
      largest = std::max(largest, sup.size());
    });
    for (const auto& [k, c] : half_lengths) hist[std::to_string(k)] = c;
    for (const auto& [k, c] : sc.cluster_by_halflength) cluster[std::to_string(k)] = c;
    nlohmann::ordered_json j;
    j["n"] = ms.n();
    j["cycles"] = cycles;
    j["largest_half_length"] = largest / 2;
    j["ringlets"] = sc.ringlets;
    j["rings"] = sc.rings;
    j["staples"] = sc.staples;
    j["half_length_histogram"] = hist;
    j["cluster_by_halflength"] = cluster;
    std::cout << j.dump() << '\n';
  }
  return 0;
}

int cmd_exact(const std::string& stat, long n, std::optional<long> k,
              std::optional<double> x, const std::string& weights_text,
              std::optional<long> shapes) {
  nlohmann::ordered_json j;
  j["stat"] = stat;
  auto need_k = [&]() {
    if (!k) throw InvalidTypeError("--stat " + stat + " needs --k");
    return *k;
  };
  auto need_x = [&]() {
    if (!x) throw InvalidTypeError("--stat " + stat + " needs --x");
    return *x;
  };
  auto need_weights = [&]() {
    if (weights_text.empty()) throw InvalidTypeError("--stat " + stat + " needs --weights");
    return WeightSequence(detail::parse_weights(weights_text));
  };
  if (stat != "gcd_law" && stat != "tau" && stat != "pi0") j["n"] = n;
  if (k) j["k"] = *k;
  if (x) j["x"] = *x;

  if (stat == "catalan") {
    j["value"] = catalan(n).get_str();
  } else if (stat == "log_catalan") {
    j["value"] = log_catalan(n);
  } else if (stat == "p_arc") {
    j["value"] = p_arc(n).get_str();
  } else if (stat == "ringlets") {
    j["value"] = expected_ringlets_exact(n).get_str();
  } else if (stat == "rings") {
    j["value"] = expected_rings_exact(n).get_str();
  } else if (stat == "staples") {
    j["value"] = expected_staples_exact(n).get_str();
  } else if (stat == "cluster") {
    const long kk = need_k();
    long sc = shapes ? *shapes : meander_number(static_cast<int>(kk));
    j["shape_count"] = sc;
    j["value"] = expected_cluster_cycles(n, kk, sc);
  } else if (stat == "ratio_sq") {
    j["value"] = catalan_ratio_expansion(n, need_k()).sq;
  } else if (stat == "ratio_cov") {
    j["value"] = catalan_ratio_expansion(n, need_k()).cov;
  } else if (stat == "block_dist") {
    const auto b = block_dist_gf(n, need_k());
    if (b.exact)
      j["value"] = b.exact->get_str();
    else
      j["value"] = b.value;
  } else if (stat == "double_exp") {
    j["value"] = double_exp_law(n, need_x());
  } else if (stat == "gcd_law") {
    j["value"] = rainbow_gcd_law(static_cast<long>(need_x()));
  } else if (stat == "rainbow_mean") {
    j["value"] = rainbow_moments(static_cast<double>(n)).mean_leading;
  } else if (stat == "rainbow_second") {
    j["value"] = rainbow_moments(static_cast<double>(n)).second_moment_leading;
  } else if (stat == "tau") {
    j["value"] = weight_analysis(need_weights()).tau;
  } else if (stat == "pi0") {
    j["value"] = weight_analysis(need_weights()).pi0;
  } else if (stat == "sg_bound") {
    j["value"] = ringlet_bound_sg(need_weights(), n);
  } else {
    throw InvalidTypeError("unknown exact statistic '" + stat + "'");
  }
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_enumerate(long n, const std::string& stat, const std::string& family,
                  bool meander_numbers, int max_k) {
  if (meander_numbers) {
    const auto rep = superadditivity_check(max_k);
    nlohmann::ordered_json j;
    nlohmann::ordered_json values;
    for (std::size_t i = 0; i < rep.values.size(); ++i)
      values[std::to_string(i + 1)] = rep.values[i];
    j["meander_numbers"] = values;
    j["superadditive"] = rep.superadditive;
    j["roots_below_12_901"] = rep.roots_below_upper_bound;
    j["roots"] = rep.roots;
    std::cout << j.dump() << '\n';
    return 0;
  }
  const ExactModel model = family == "comb" ? ExactModel::comb : ExactModel::uniform;
  if (family != "comb" && family != "uniform")
    throw InvalidTypeError("enumeration family must be uniform or comb");
  const auto dist =
      exact_distribution(static_cast<Index>(n), statistic_from_name(stat), model);
  nlohmann::ordered_json j;
  j["n"] = dist.n;
  j["statistic"] = dist.statistic;
  j["model"] = dist.model;
  j["total"] = dist.total;
  nlohmann::ordered_json counts;
  for (const auto& [value, count] : dist.counts) counts[std::to_string(value)] = count;
  j["counts"] = counts;
  j["mean"] = dist.mean().get_str();
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  const auto rows = run_experiment(cfg);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw ValidationError("cannot open " + cfg.out_path);
    out = &file;
  }
  if (cfg.format == ExperimentConfig::Format::csv)
    write_csv(rows, *out);
  else
    write_jsonl(rows, *out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random meander systems: samplers, exact laws, experiments"};
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "emit sampled systems as JSON lines");
  std::string sample_family = "uniform";
  long sample_n = 10;
  std::uint64_t sample_seed = 42;
  long sample_count = 1;
  sample->add_option("--family", sample_family, "family spec");
  sample->add_option("--n", sample_n, "half-size (N for relaxed_rainbow)")->required();
  sample->add_option("--seed", sample_seed, "master seed");
  sample->add_option("--count", sample_count, "number of systems");
  std::string sample_format = "jsonl";
  sample->add_option("--format", sample_format)->check(CLI::IsMember({"jsonl"}));

  auto* stats = app.add_subcommand("stats", "per-system statistics for JSON-line input");
  std::string stats_in;
  stats->add_option("--in", stats_in, "input file (default stdin)");

  auto* exact = app.add_subcommand("exact", "exact/analytic values as JSON");
  std::string exact_stat;
  long exact_n = 0;
  std::optional<long> exact_k;
  std::optional<double> exact_x;
  std::optional<long> exact_shapes;
  std::string exact_weights;
  exact->add_option("--stat", exact_stat)->required();
  exact->add_option("--n", exact_n);
  exact->add_option("--k", exact_k);
  exact->add_option("--x", exact_x);
  exact->add_option("--shapes", exact_shapes, "shape count for cluster");
  exact->add_option("--weights", exact_weights, "comma-separated weights");

  auto* enumerate = app.add_subcommand("enumerate", "exhaustive small-n oracles");
  long enum_n = 2;
  std::string enum_stat = "cycle_count";
  std::string enum_family = "uniform";
  bool enum_meanders = false;
  int enum_max_k = 6;
  enumerate->add_option("--n", enum_n);
  enumerate->add_option("--stat", enum_stat);
  enumerate->add_option("--family", enum_family, "uniform or comb");
  enumerate->add_flag("--meander-numbers", enum_meanders, "emit R_1..R_maxk");
  enumerate->add_option("--max-k", enum_max_k);

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiment runner");
  std::string exp_name, exp_family = "uniform", exp_nlist = "1000", exp_out, exp_format = "csv";
  long exp_samples = 1000;
  std::uint64_t exp_seed = 42;
  int exp_threads = 0;
  std::vector<std::string> exp_params;
  experiment->add_option("--name", exp_name)->required();
  experiment->add_option("--family", exp_family);
  experiment->add_option("--n-list", exp_nlist, "comma-separated sizes");
  experiment->add_option("--samples", exp_samples);
  experiment->add_option("--seed", exp_seed);
  experiment->add_option("--threads", exp_threads, "0 = hardware");
  experiment->add_option("--out", exp_out, "output path (default stdout)");
  experiment->add_option("--format", exp_format)->check(CLI::IsMember({"csv", "jsonl"}));
  experiment->add_option("--param", exp_params, "key=value experiment knob");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  bool verify_quick = false;
  int verify_threads = 0;
  std::uint64_t verify_seed = 42;
  verify->add_flag("--quick", verify_quick, "reduced smoke scale");
  verify->add_option("--threads", verify_threads);
  verify->add_option("--seed", verify_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sample->parsed())
      return cmd_sample(sample_family, sample_n, sample_seed, sample_count);
    if (stats->parsed()) return cmd_stats(stats_in);
    if (exact->parsed())
      return cmd_exact(exact_stat, exact_n, exact_k, exact_x, exact_weights, exact_shapes);
    if (enumerate->parsed())
      return cmd_enumerate(enum_n, enum_stat, enum_family, enum_meanders, enum_max_k);
    if (experiment->parsed()) {
      ExperimentConfig cfg;
      cfg.name = exp_name;
      cfg.family = Family::parse(exp_family);
      cfg.n_values = parse_long_list(exp_nlist);
      cfg.samples = exp_samples;
      cfg.seed = exp_seed;
      cfg.threads = exp_threads;
      cfg.out_path = exp_out;
      cfg.format = exp_format == "csv" ? ExperimentConfig::Format::csv
                                       : ExperimentConfig::Format::jsonl;
      for (const auto& kv : exp_params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidTypeError("--param needs key=value");
        cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      return cmd_experiment(cfg);
    }
    if (verify->parsed()) {
      AcceptanceOptions opt;
      opt.quick = verify_quick;
      opt.threads = verify_threads;
      opt.seed = verify_seed;
      const auto report = verify_acceptance(opt);
      return report.all_pass() ? 0 : 3;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
