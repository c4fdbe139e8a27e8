// Command-line driver: certify | witness | spectrum | ratio | sff.
// Exit codes: 0 success, 1 computational refusal or I/O failure, 2 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "genff/certify.hpp"
#include "genff/intpoly.hpp"
#include "genff/levelstats.hpp"
#include "genff/model.hpp"
#include "genff/sff.hpp"

namespace {

using genff::BigFloat;
using ordered_json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Refusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliOptions {
  std::string subcommand;
  std::uint32_t sites = 0;
  std::string orders_csv = "1";
  bool use_divisors = false;
  bool no_constant = false;
  unsigned digits = genff::kDefaultPrecisionDigits;
  std::string gamma_str;
  std::vector<std::string> coupling_overrides;  // d:alpha:beta
  std::string output;
  std::string format = "json";
  std::size_t bins = 50;
  std::string policy = "convention";
  std::string summary_path;
  std::string histogram_path;
  std::uint32_t q = 1;
  double t0 = 0.0;
  double tau = 1e5;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
};

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string big_str(const BigFloat& x, unsigned digits) {
  return x.str(digits);
}

std::set<std::uint32_t> parse_orders(const CliOptions& opt) {
  if (opt.use_divisors) {
    std::set<std::uint32_t> out;
    for (std::uint32_t d = 1; d < opt.sites; ++d)
      if (opt.sites % d == 0) out.insert(d);
    return out;
  }
  std::set<std::uint32_t> out;
  std::stringstream ss(opt.orders_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      const unsigned long v = std::stoul(tok);
      out.insert(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad --orders entry: " + tok);
    }
  }
  if (out.empty()) throw UsageError("--orders must name at least one order");
  return out;
}

genff::ModelParams build_params(const CliOptions& opt) {
  const auto orders = parse_orders(opt);
  genff::ModelParams params;
  try {
    params = genff::ModelParams::with_default_couplings(opt.sites, orders, opt.digits);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  genff::PrecisionGuard guard(opt.digits);
  if (opt.no_constant) params.gamma = BigFloat(0);
  if (!opt.gamma_str.empty()) params.gamma = BigFloat(opt.gamma_str);
  for (const std::string& ov : opt.coupling_overrides) {
    std::stringstream ss(ov);
    std::string d_str, a_str, b_str;
    if (!std::getline(ss, d_str, ':') || !std::getline(ss, a_str, ':') ||
        !std::getline(ss, b_str))
      throw UsageError("--coupling expects d:alpha:beta, got: " + ov);
    try {
      const auto d = static_cast<std::uint32_t>(std::stoul(d_str));
      const BigFloat alpha(a_str), beta(b_str);
      bool replaced = false;
      for (auto& h : params.harmonics)
        if (h.order == d) {
          h.alpha = alpha;
          h.beta = beta;
          replaced = true;
        }
      if (!replaced) params.harmonics.push_back({d, alpha, beta});
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad --coupling value: ") + e.what());
    }
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return params;
}

genff::HarmonicSet harmonic_set(const genff::ModelParams& params, bool include_constant) {
  genff::HarmonicSet h;
  h.sites = params.sites;
  for (const auto& harm : params.harmonics) h.orders.insert(harm.order);
  h.include_constant = include_constant;
  return h;
}

ordered_json couplings_json(const genff::ModelParams& params) {
  ordered_json j;
  j["gamma"] = big_str(params.gamma, params.precision_digits);
  ordered_json harmonics = ordered_json::array();
  for (const auto& h : params.harmonics) {
    ordered_json one;
    one["d"] = h.order;
    one["alpha"] = big_str(h.alpha, params.precision_digits);
    one["beta"] = big_str(h.beta, params.precision_digits);
    harmonics.push_back(one);
  }
  j["harmonics"] = harmonics;
  return j;
}

std::string orders_string(const genff::ModelParams& params) {
  std::string out;
  for (const auto& h : params.harmonics) {
    if (!out.empty()) out += ",";
    out += std::to_string(h.order);
  }
  return out;
}

// One-line resolved configuration, embedded in every output file.
std::string config_line(const CliOptions& opt, const genff::ModelParams& params) {
  std::ostringstream out;
  out << "subcommand=" << opt.subcommand << " L=" << opt.sites
      << " orders=" << orders_string(params) << " constant=" << (opt.no_constant ? "0" : "1")
      << " digits=" << opt.digits;
  if (opt.subcommand == "ratio")
    out << " bins=" << opt.bins << " policy=" << opt.policy;
  if (opt.subcommand == "sff")
    out << " q=" << opt.q << " t0=" << fmt17(opt.t0) << " tau=" << fmt17(opt.tau)
        << " n_samples=" << opt.samples << " seed=" << opt.seed;
  if (opt.subcommand == "spectrum") out << " format=" << opt.format;
  return out.str();
}

ordered_json config_json(const CliOptions& opt, const genff::ModelParams& params) {
  ordered_json j;
  j["subcommand"] = opt.subcommand;
  j["L"] = opt.sites;
  j["orders"] = orders_string(params);
  j["constant"] = !opt.no_constant;
  j["digits"] = opt.digits;
  if (opt.subcommand == "ratio") {
    j["bins"] = opt.bins;
    j["policy"] = opt.policy;
  }
  if (opt.subcommand == "sff") {
    j["q"] = opt.q;
    j["t0"] = opt.t0;
    j["tau"] = opt.tau;
    j["n_samples"] = opt.samples;
    j["seed"] = opt.seed;
  }
  if (opt.subcommand == "spectrum") j["format"] = opt.format;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Refusal("cannot open output file: " + path.string());
  out << body;
  if (!out) throw Refusal("write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// CSV writer: comment header with the resolved config, then a header row,
// then rows. UTF-8, '\n' endings, floats at 17 significant digits.
void write_csv_file(const std::filesystem::path& path, const std::string& config,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::string body = "# config: " + config + "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    body += (i ? "," : "") + header[i];
  body += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      body += (i ? "," : "") + row[i];
    body += "\n";
  }
  write_text_file(path, body);
}

genff::DegeneratePolicy parse_policy(const std::string& name) {
  if (name == "convention") return genff::DegeneratePolicy::kConvention;
  if (name == "drop") return genff::DegeneratePolicy::kDrop;
  throw UsageError("--policy must be 'convention' or 'drop'");
}

ordered_json certificate_record(const CliOptions& opt, const genff::ModelParams& params,
                                const genff::IndependenceVerdict& verdict,
                                const genff::SingleParticleSpectrum& sp) {
  ordered_json rec;
  rec["config"] = config_json(opt, params);
  rec["L"] = params.sites;
  ordered_json orders = ordered_json::array();
  for (const auto& h : params.harmonics) orders.push_back(h.order);
  rec["orders"] = orders;
  rec["include_constant"] = !opt.no_constant;
  if (const auto* cert = std::get_if<genff::Certificate>(&verdict)) {
    rec["verdict"] = "independent";
    rec["required_orders"] = cert->required_orders;
    rec["degree_sum"] = cert->degree_sum;
    rec["bound"] = cert->bound;
  } else {
    const auto& wit = std::get<genff::Witness>(verdict);
    const genff::HarmonicSet h = harmonic_set(params, !opt.no_constant);
    // Defensive re-verification before anything reaches disk.
    if (!genff::verify_witness_exact(wit.poly, h))
      throw Refusal("internal error: witness failed exact re-verification");
    rec["verdict"] = "dependent";
    const auto req = genff::required_orders(h);
    rec["required_orders"] = req;
    std::uint64_t degree_sum = 0;
    for (auto m : req) degree_sum += genff::totient(m);
    rec["degree_sum"] = degree_sum;
    rec["bound"] = params.sites;
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : wit.coeffs) coeffs.push_back(c.get_str());
    rec["witness"] = coeffs;
    rec["residual"] = static_cast<double>(genff::verify_witness_numeric(wit.coeffs, sp));
  }
  rec["couplings"] = couplings_json(params);
  return rec;
}

int run_certify(const CliOptions& opt, bool want_witness) {
  const genff::ModelParams params = build_params(opt);
  const genff::SingleParticleSpectrum sp = genff::dispersion(params);
  const auto verdict = genff::certify(harmonic_set(params, !opt.no_constant));
  if (want_witness && std::holds_alternative<genff::Certificate>(verdict))
    throw Refusal("spectrum is rationally independent: no witness exists");
  const ordered_json rec = certificate_record(opt, params, verdict, sp);
  const std::string path = opt.output.empty()
                               ? (opt.subcommand + "_L" + std::to_string(opt.sites) + ".json")
                               : opt.output;
  write_json_file(path, rec);
  std::cout << opt.subcommand << " L=" << opt.sites << " orders=" << orders_string(params)
            << ": " << rec["verdict"].get<std::string>() << " (degree_sum="
            << rec["degree_sum"].get<std::uint64_t>() << ", bound="
            << rec["bound"].get<std::uint64_t>() << ") -> " << path << "\n";
  return 0;
}

int run_spectrum(const CliOptions& opt) {
  const genff::ModelParams params = build_params(opt);
  const genff::SingleParticleSpectrum sp = genff::dispersion(params);
  const std::string default_ext = opt.format == "bin" ? ".fspc"
                                  : opt.format == "csv" ? ".csv"
                                                        : ".json";
  const std::string path = opt.output.empty()
                               ? ("spectrum_L" + std::to_string(opt.sites) + default_ext)
                               : opt.output;
  if (opt.format == "bin") {
    genff::ManyBodySpectrum mb = genff::many_body_spectrum(sp);
    genff::write_fspc(mb, path);
    std::cout << "spectrum L=" << opt.sites << ": " << mb.energies().size()
              << " levels -> " << path << "\n";
    return 0;
  }
  if (opt.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::uint32_t k = 0; k < sp.sites(); ++k)
      rows.push_back({std::to_string(k), fmt17(sp.shadow()[k])});
    write_csv_file(path, config_line(opt, params), {"k", "epsilon"}, rows);
    std::cout << "spectrum L=" << opt.sites << ": " << sp.sites() << " modes -> " << path
              << "\n";
    return 0;
  }
  ordered_json j;
  j["config"] = config_json(opt, params);
  j["L"] = params.sites;
  j["couplings"] = couplings_json(params);
  ordered_json eps = ordered_json::array();
  for (std::uint32_t k = 0; k < sp.sites(); ++k)
    eps.push_back(big_str(sp.energies()[k], params.precision_digits));
  j["single_particle"] = eps;
  if (params.sites <= genff::kManyBodySiteCap) {
    const genff::ManyBodySpectrum mb = genff::many_body_spectrum(sp);
    j["many_body"] = {{"count", mb.energies().size()},
                      {"min", mb.energies().front()},
                      {"max", mb.energies().back()},
                      {"degeneracy_threshold", mb.degeneracy_threshold()}};
  }
  write_json_file(path, j);
  std::cout << "spectrum L=" << opt.sites << ": " << sp.sites() << " modes -> " << path << "\n";
  return 0;
}

int run_ratio(const CliOptions& opt) {
  const genff::ModelParams params = build_params(opt);
  const genff::SingleParticleSpectrum sp = genff::dispersion(params);
  genff::ManyBodySpectrum mb = genff::many_body_spectrum(sp);
  const genff::DegeneratePolicy policy = parse_policy(opt.policy);
  const genff::RatioReport report = genff::ratio_report(mb, policy);

  const std::string path =
      opt.output.empty() ? ("ratio_L" + std::to_string(opt.sites) + ".csv") : opt.output;
  {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(report.ratios.size());
    for (std::size_t k = 0; k < report.ratios.size(); ++k)
      rows.push_back({std::to_string(k), fmt17(report.ratios[k])});
    write_csv_file(path, config_line(opt, params), {"k", "r"}, rows);
  }

  const std::string summary_path =
      opt.summary_path.empty() ? path + ".summary.json" : opt.summary_path;
  ordered_json summary;
  summary["config"] = config_json(opt, params);
  summary["L"] = params.sites;
  summary["couplings"] = couplings_json(params);
  summary["mean_r"] = report.mean_r;
  summary["n_levels"] = report.n_levels;
  summary["n_zero_gaps"] = report.n_zero_gaps;
  summary["n_dropped"] = report.n_dropped;
  summary["policy"] = opt.policy;
  summary["poisson_mean_reference"] = 2.0 * std::log(2.0) - 1.0;
  write_json_file(summary_path, summary);

  if (!opt.histogram_path.empty()) {
    const genff::HistogramData h = genff::histogram(report.ratios, opt.bins);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < h.densities.size(); ++i)
      rows.push_back({fmt17(h.bin_edges[i]), fmt17(h.bin_edges[i + 1]),
                      fmt17(h.densities[i]), fmt17(h.reference_densities[i])});
    write_csv_file(opt.histogram_path, config_line(opt, params),
                   {"bin_lo", "bin_hi", "density", "poisson_density"}, rows);
  }

  std::cout << "ratio L=" << opt.sites << ": mean_r=" << fmt17(report.mean_r)
            << " n_levels=" << report.n_levels << " n_zero_gaps=" << report.n_zero_gaps
            << " -> " << path << "\n";
  return 0;
}

int run_sff(const CliOptions& opt) {
  const genff::ModelParams params = build_params(opt);
  const genff::SingleParticleSpectrum sp = genff::dispersion(params);
  genff::MomentReport rep;
  try {
    rep = genff::moment_estimate(sp, opt.q, opt.t0, opt.tau, opt.samples, opt.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string path =
      opt.output.empty() ? ("sff_L" + std::to_string(opt.sites) + "_q" +
                            std::to_string(opt.q) + ".csv")
                         : opt.output;
  std::vector<std::vector<std::string>> rows{{
      std::to_string(rep.q),
      std::to_string(rep.sites),
      fmt17(rep.estimate),
      fmt17(rep.std_error),
      rep.references.exact_free.get_str(),
      rep.references.paper_free.get_str(),
      rep.references.poisson.get_str(),
      fmt17(rep.tau),
      std::to_string(rep.n_samples),
      std::to_string(rep.seed),
  }};
  write_csv_file(path, config_line(opt, params),
                 {"q", "L", "estimate", "std_error", "exact_free", "paper_free", "poisson",
                  "tau", "n_samples", "seed"},
                 rows);
  std::cout << "sff L=" << opt.sites << " q=" << opt.q << ": estimate=" << fmt17(rep.estimate)
            << " +- " << fmt17(rep.std_error) << " -> " << path << "\n";
  return 0;
}

void add_model_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--L", opt.sites, "system size (number of sites)")->required();
  cmd->add_option("--orders", opt.orders_csv, "comma-separated harmonic orders (default 1)");
  cmd->add_flag("--divisors", opt.use_divisors, "use every proper divisor of L as an order");
  cmd->add_flag("--no-constant", opt.no_constant, "drop the chemical potential (gamma = 0)");
  cmd->add_option("--digits", opt.digits, "working precision in decimal digits (>= 30)");
  cmd->add_option("--gamma", opt.gamma_str, "override gamma (decimal string)");
  cmd->add_option("--coupling", opt.coupling_overrides,
                  "override one harmonic as d:alpha:beta (repeatable)");
  cmd->add_option("-o,--output", opt.output, "output file path");
}

}  // namespace

int main(int argc, char** argv) {
  CliOptions opt;
  CLI::App app{"generic free fermion spectra: exact independence certification and statistics"};
  app.require_subcommand(1);
  app.set_config("--config");

  CLI::App* certify_cmd = app.add_subcommand("certify", "decide rational independence");
  add_model_flags(certify_cmd, opt);

  CLI::App* witness_cmd = app.add_subcommand("witness", "emit an explicit resonance witness");
  add_model_flags(witness_cmd, opt);

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "write spectra to disk");
  add_model_flags(spectrum_cmd, opt);
  spectrum_cmd->add_option("--format", opt.format, "json | csv | bin")
      ->check(CLI::IsMember({"json", "csv", "bin"}));

  CLI::App* ratio_cmd = app.add_subcommand("ratio", "gap-ratio statistics");
  add_model_flags(ratio_cmd, opt);
  ratio_cmd->add_option("--bins", opt.bins, "histogram bin count");
  ratio_cmd->add_option("--policy", opt.policy, "degenerate-gap policy: convention | drop")
      ->check(CLI::IsMember({"convention", "drop"}));
  ratio_cmd->add_option("--summary", opt.summary_path, "summary JSON path");
  ratio_cmd->add_option("--histogram-out", opt.histogram_path, "histogram CSV path");

  CLI::App* sff_cmd = app.add_subcommand("sff", "spectral form factor moments");
  add_model_flags(sff_cmd, opt);
  sff_cmd->add_option("--q", opt.q, "moment order");
  sff_cmd->add_option("--t0", opt.t0, "window start");
  sff_cmd->add_option("--tau", opt.tau, "window length");
  sff_cmd->add_option("--samples", opt.samples, "Monte Carlo sample count");
  sff_cmd->add_option("--seed", opt.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (certify_cmd->parsed()) {
      opt.subcommand = "certify";
      return run_certify(opt, false);
    }
    if (witness_cmd->parsed()) {
      opt.subcommand = "witness";
      return run_certify(opt, true);
    }
    if (spectrum_cmd->parsed()) {
      opt.subcommand = "spectrum";
      return run_spectrum(opt);
    }
    if (ratio_cmd->parsed()) {
      opt.subcommand = "ratio";
      return run_ratio(opt);
    }
    opt.subcommand = "sff";
    return run_sff(opt);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
