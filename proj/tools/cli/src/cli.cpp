// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "permflow/cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "permflow/cli/io.hpp"
#include "permflow/error.hpp"
#include "permflow/fixedpoint.hpp"
#include "permflow/multiprecision.hpp"
#include "permflow/permanent.hpp"
#include "permflow/rng.hpp"
#include "permflow/sampling.hpp"

namespace permflow::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(long double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
  return buf;
}

std::string fmt_complex(std::complex<long double> z, int digits) {
  const long double im = z.imag() == 0 ? 0.0L : z.imag();  // no "-0"
  return fmt(z.real() == 0 ? 0.0L : z.real(), digits) + (std::signbit(im) ? "" : "+") + fmt(im, digits) + "i";
}

// Sends text to the file when a path is given, else to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

OccupationVector mult_or_ones(const std::string& text, std::size_t size) {
  return text.empty() ? OccupationVector::ones(size) : OccupationVector::parse(text);
}

Engine parse_engine(const std::string& name) {
  static const std::map<std::string, Engine> engines = {
      {"naive", Engine::kNaive},          {"ryser", Engine::kRyser},
      {"ryser-nw", Engine::kRyserNW},     {"bbfg-gray", Engine::kBbfgGray},
      {"bbfg", Engine::kBbfgDirect},      {"bbfg-repeated", Engine::kBbfgRepeated},
      {"multiprecision", Engine::kMultiprecision}, {"fixed", Engine::kFixedPoint},
  };
  const auto it = engines.find(name);
  if (it == engines.end()) throw Error(ErrorCode::kParse, "unknown engine '" + name + "'");
  return it->second;
}

// ---- perm -----------------------------------------------------------------

struct PermArgs {
  std::string input, engine = "bbfg-gray", row_mult, col_mult, fixed_config, split = "contiguous", output;
  bool use_double = false, use_extended = false, pockets = false, allow_more_rows = false;
  unsigned bits = kOracleBits, streams = 1, stagger = 1;
  std::size_t workers = 1;
};

void cmd_perm(const PermArgs& args, std::ostream& out) {
  const ComplexMatrix a = read_matrix(args.input);
  const OccupationVector row_mult = mult_or_ones(args.row_mult, a.rows());
  const OccupationVector col_mult = mult_or_ones(args.col_mult, a.cols());
  const bool unit = std::all_of(row_mult.counts().begin(), row_mult.counts().end(), [](unsigned m) { return m == 1; }) &&
                    std::all_of(col_mult.counts().begin(), col_mult.counts().end(), [](unsigned m) { return m == 1; });
  const Engine engine = parse_engine(args.engine);

  EngineOptions options;
  options.precision = args.use_extended ? Precision::kExtended : Precision::kDouble;
  options.workers = args.workers;
  options.pockets = args.pockets;
  options.allow_more_rows = args.allow_more_rows;
  if (args.split == "contiguous") {
    options.split = SplitMode::kContiguous;
  } else if (args.split == "leading-digit") {
    options.split = SplitMode::kLeadingDigit;
  } else {
    throw Error(ErrorCode::kParse, "unknown split mode '" + args.split + "'");
  }

  const auto start = Clock::now();
  PermanentResult result;
  std::string value_text;
  if (engine == Engine::kMultiprecision) {
    const MpComplex value = perm_multiprecision_value(a, row_mult, col_mult, args.bits, args.allow_more_rows);
    result.value = value.to_std();
    result.engine = engine;
    result.precision = Precision::kMultiprecision;
    result.precision_bits = args.bits;
    result.addend_count = repeated_addend_count(row_mult);
    value_text = value.to_string(static_cast<int>(args.bits * 0.30103) + 1);
  } else if (engine == Engine::kFixedPoint) {
    FixedPointConfig config;
    if (!args.fixed_config.empty()) config = fixed_config_from_text(read_file(args.fixed_config));
    FixedPointOptions fopts;
    fopts.streams = args.streams;
    fopts.stagger = args.stagger;
    result = perm_fixed(a, row_mult, col_mult, config, fopts);
  } else if (engine == Engine::kBbfgRepeated) {
    result = perm_parallel(a, row_mult, col_mult, args.workers, options.split, options);
  } else {
    const ComplexMatrix m = unit ? a : expand_multiplicities(a, row_mult, col_mult);
    switch (engine) {
      case Engine::kNaive: result = perm_naive(m, options); break;
      case Engine::kRyser: result = perm_ryser(m, options); break;
      case Engine::kRyserNW: result = perm_ryser_nw(m, options); break;
      case Engine::kBbfgGray: result = perm_bbfg(m, true, options); break;
      default: result = perm_bbfg(m, false, options); break;
    }
  }
  const double elapsed = seconds_since(start);
  if (value_text.empty()) value_text = fmt_complex(result.value, result.precision == Precision::kDouble ? 17 : 21);

  out << "value: " << value_text << "\n"
      << "engine: " << to_string(result.engine) << "\n"
      << "precision: " << to_string(result.precision) << " (" << result.precision_bits << " bits)\n";
  out << "addends: " << result.addend_count << "\n"
      << "elapsed_seconds: " << elapsed << "\n";

  if (!args.output.empty()) {
    nlohmann::json doc;
    doc["value"] = {static_cast<double>(result.value.real()), static_cast<double>(result.value.imag())};
    doc["value_text"] = value_text;
    doc["engine"] = std::string(to_string(result.engine));
    doc["precision"] = std::string(to_string(result.precision));
    doc["precision_bits"] = result.precision_bits;
    doc["addends"] = result.addend_count;
    doc["elapsed_seconds"] = elapsed;
    write_file(args.output, doc.dump(2) + "\n");
  }
}

// ---- gen-unitary ------------------------------------------------------------

struct GenArgs {
  std::size_t modes = 0;
  std::uint64_t seed = 0;
  std::string output;
};

void cmd_gen_unitary(const GenArgs& args, std::ostream& out) {
  emit(args.output, out, matrix_to_text(haar_random_unitary(args.modes, args.seed)));
}

// ---- sample -----------------------------------------------------------------

struct SampleArgs {
  std::string unitary, input_state, loss_modes, strategy = "dilation", engine = "bbfg-repeated", output;
  std::size_t modes = 0, samples = 1000, workers = 1;
  unsigned photons = 0;
  std::uint64_t seed = 0;
  std::optional<double> loss;
  bool with_meta = false;
};

void cmd_sample(const SampleArgs& args, std::ostream& out) {
  ComplexMatrix u;
  if (!args.unitary.empty()) {
    u = read_matrix(args.unitary);
  } else if (args.modes > 0) {
    u = haar_random_unitary(args.modes, args.seed);
  } else {
    throw Error(ErrorCode::kParse, "sample needs --unitary or --modes");
  }
  OccupationVector input;
  if (!args.input_state.empty()) {
    input = OccupationVector::parse(args.input_state);
  } else {
    if (args.photons == 0) throw Error(ErrorCode::kParse, "sample needs --input-state or --photons");
    if (args.photons > u.rows()) throw Error(ErrorCode::kRange, "more photons than modes");
    input = OccupationVector::zeros(u.rows());
    for (unsigned k = 0; k < args.photons; ++k) input[k] = 1;
  }

  SamplerOptions options;
  options.engine = parse_engine(args.engine);
  options.workers = args.workers;
  const auto start = Clock::now();
  std::vector<SampleRecord> samples;
  if (!args.loss_modes.empty()) {
    const std::vector<double> etas = parse_double_list(args.loss_modes);
    samples = sample_lossy(u, input, etas, args.samples, args.seed, options);
  } else if (args.loss) {
    LossStrategy strategy;
    if (args.strategy == "dilation") {
      strategy = LossStrategy::kDilation;
    } else if (args.strategy == "thinning") {
      strategy = LossStrategy::kThinning;
    } else {
      throw Error(ErrorCode::kParse, "unknown loss strategy '" + args.strategy + "'");
    }
    samples = sample_lossy(u, input, *args.loss, args.samples, args.seed, strategy, options);
  } else {
    samples = sample_ideal(u, input, args.samples, args.seed, options);
  }
  const double elapsed = seconds_since(start);

  std::ostringstream summary;
  summary << "samples: " << samples.size() << "\n";
  if (samples.empty()) {
    summary << "mean_photons: n/a\nseconds_per_sample: n/a\n";
  } else {
    double photons = 0.0;
    for (const SampleRecord& s : samples) photons += s.output_state.total();
    summary << "mean_photons: " << photons / static_cast<double>(samples.size()) << "\n"
            << "seconds_per_sample: " << elapsed / static_cast<double>(samples.size()) << "\n";
  }
  const std::string lines = samples_to_text(samples, args.with_meta);
  if (args.output.empty()) {
    out << lines;
    std::istringstream in(summary.str());
    for (std::string line; std::getline(in, line);) out << "# " << line << "\n";
  } else {
    write_file(args.output, lines);
    out << summary.str();
  }
}

// ---- accuracy ---------------------------------------------------------------

struct AccuracyArgs {
  unsigned min_n = 2, max_n = 10, oracle_bits = kOracleBits;
  std::size_t trials = 20;
  std::string engines = "bbfg-gray-double,ryser-double", output;
  std::uint64_t seed = 0;
};

using EngineFn = std::function<double(const ComplexMatrix&, const MpComplex&)>;

EngineFn accuracy_engine(const std::string& id, unsigned oracle_bits) {
  if (id == "oracle") {
    return [oracle_bits](const ComplexMatrix& a, const MpComplex& ref) {
      const auto value = perm_multiprecision_value(a, OccupationVector::ones(a.rows()),
                                                   OccupationVector::ones(a.cols()), oracle_bits);
      return relative_error(value, ref);
    };
  }
  if (id == "fixed") {
    return [](const ComplexMatrix& a, const MpComplex& ref) { return relative_error(perm_fixed(a).value, ref); };
  }
  const auto dash = id.rfind('-');
  if (dash == std::string::npos) throw Error(ErrorCode::kParse, "engine id '" + id + "' needs a precision suffix");
  const std::string name = id.substr(0, dash), precision = id.substr(dash + 1);
  EngineOptions options;
  if (precision == "double") {
    options.precision = Precision::kDouble;
  } else if (precision == "extended") {
    options.precision = Precision::kExtended;
  } else {
    throw Error(ErrorCode::kParse, "unknown precision '" + precision + "' in engine id '" + id + "'");
  }
  const Engine engine = parse_engine(name);
  return [engine, options](const ComplexMatrix& a, const MpComplex& ref) {
    PermanentResult r;
    switch (engine) {
      case Engine::kNaive: r = perm_naive(a, options); break;
      case Engine::kRyser: r = perm_ryser(a, options); break;
      case Engine::kRyserNW: r = perm_ryser_nw(a, options); break;
      case Engine::kBbfgGray: r = perm_bbfg(a, true, options); break;
      case Engine::kBbfgDirect: r = perm_bbfg(a, false, options); break;
      case Engine::kBbfgRepeated:
        r = perm_bbfg_repeated(a, OccupationVector::ones(a.rows()), OccupationVector::ones(a.cols()), options);
        break;
      default: throw Error(ErrorCode::kParse, "engine not available for accuracy runs");
    }
    return relative_error(r.value, ref);
  };
}

void cmd_accuracy(const AccuracyArgs& args, std::ostream& out) {
  if (args.min_n < 1 || args.max_n < args.min_n) throw Error(ErrorCode::kRange, "invalid size range");
  if (args.trials == 0) throw Error(ErrorCode::kRange, "at least one trial is required");
  std::vector<std::pair<std::string, EngineFn>> engines;
  for (const std::string& id : CLI::detail::split(args.engines, ',')) {
    engines.emplace_back(id, accuracy_engine(id, args.oracle_bits));
  }
  if (engines.empty()) throw Error(ErrorCode::kParse, "no engines selected");

  // errors[engine][n - min_n] holds one entry per trial.
  std::vector<std::vector<std::vector<double>>> errors(engines.size(),
                                                       std::vector<std::vector<double>>(args.max_n - args.min_n + 1));
  for (unsigned n = args.min_n; n <= args.max_n; ++n) {
    for (std::size_t t = 0; t < args.trials; ++t) {
      const std::uint64_t stream = kStreamExperiment ^ (static_cast<std::uint64_t>(n) << 32 | t);
      const ComplexMatrix u = haar_random_unitary(n, derive_seed(args.seed, stream));
      const MpComplex oracle = perm_multiprecision_value(u, OccupationVector::ones(n), OccupationVector::ones(n),
                                                         args.oracle_bits);
      for (std::size_t e = 0; e < engines.size(); ++e) errors[e][n - args.min_n].push_back(engines[e].second(u, oracle));
    }
  }

  std::ostringstream csv;
  csv << kAccuracyHeader << "\n";
  for (std::size_t e = 0; e < engines.size(); ++e) {
    for (unsigned n = args.min_n; n <= args.max_n; ++n) {
      std::vector<double> v = errors[e][n - args.min_n];
      std::sort(v.begin(), v.end());
      const std::size_t k = v.size();
      const double median = k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
      csv << engines[e].first << "," << n << "," << k << "," << fmt(median, 6) << "," << fmt(v.back(), 6) << "\n";
    }
  }
  emit(args.output, out, csv.str());
}

// ---- bench / fit ------------------------------------------------------------

struct BenchArgs {
  std::string n_list = "2,3,4", m_list = "20", eta_list = "1", output;
  std::size_t samples = 10, workers = 1;
  std::uint64_t seed = 0;
};

void cmd_bench(const BenchArgs& args, std::ostream& out) {
  if (args.n_list.empty() || args.m_list.empty() || args.eta_list.empty()) {
    throw Error(ErrorCode::kEmptyState, "empty benchmark grid");
  }
  if (args.samples == 0) throw Error(ErrorCode::kRange, "at least one sample per grid point is required");
  const auto ns = parse_unsigned_list(args.n_list);
  const auto ms = parse_unsigned_list(args.m_list);
  const auto etas = parse_double_list(args.eta_list);
  std::vector<BenchRecord> records;
  SamplerOptions options;
  options.workers = args.workers;
  for (unsigned m : ms) {
    const ComplexMatrix u = haar_random_unitary(m, derive_seed(args.seed, m));
    for (unsigned n : ns) {
      if (n == 0 || n > m) throw Error(ErrorCode::kRange, "grid point n=" + std::to_string(n) + ", m=" +
                                                              std::to_string(m) + " needs 1 <= n <= m");
      OccupationVector input = OccupationVector::zeros(m);
      for (unsigned k = 0; k < n; ++k) input[k] = 1;
      for (double eta : etas) {
        const auto start = Clock::now();
        if (eta < 1.0) {
          sample_lossy(u, input, eta, args.samples, args.seed, LossStrategy::kDilation, options);
        } else {
          sample_ideal(u, input, args.samples, args.seed, options);
        }
        const double per_sample = std::max(seconds_since(start), 1e-9) / static_cast<double>(args.samples);
        records.push_back({n, m, eta, per_sample, args.samples});
      }
    }
  }
  emit(args.output, out, bench_to_csv(records));
}

struct FitArgs {
  std::string input, output;
};

void cmd_fit(const FitArgs& args, std::ostream& out) {
  const std::vector<BenchRecord> records = bench_from_csv(read_file(args.input));
  const FitResult fit = fit_T0(records);
  std::ostringstream report;
  report << "T0: " << fmt(fit.t0, 10) << " s\n"
         << "residual: " << fmt(fit.residual, 6) << "\n"
         << "n,m,eta,measured,predicted\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const BenchRecord& r = records[i];
    report << r.n << "," << r.m << "," << fmt(r.loss, 6) << "," << fmt(r.seconds_per_sample, 6) << ","
           << fmt(fit.predicted[i], 6) << "\n";
  }
  emit(args.output, out, report.str());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix permanents and boson sampling", "permflow"};
  app.require_subcommand(1);

  PermArgs perm;
  auto* perm_cmd = app.add_subcommand("perm", "Evaluate a matrix permanent");
  perm_cmd->add_option("--input", perm.input, "Matrix file")->required();
  perm_cmd->add_option("--engine", perm.engine,
                       "naive | ryser | ryser-nw | bbfg-gray | bbfg | bbfg-repeated | multiprecision | fixed")
      ->capture_default_str();
  perm_cmd->add_option("--row-mult", perm.row_mult, "Row multiplicities, e.g. 1,2,2");
  perm_cmd->add_option("--col-mult", perm.col_mult, "Column multiplicities");
  auto* dbl = perm_cmd->add_flag("--double", perm.use_double, "Binary64 arithmetic (default)");
  auto* ext = perm_cmd->add_flag("--extended", perm.use_extended, "Extended precision arithmetic");
  auto* bits = perm_cmd->add_option("--bits", perm.bits, "Mantissa bits for the multiprecision engine");
  dbl->excludes(ext);
  dbl->excludes(bits);
  ext->excludes(bits);
  perm_cmd->add_option("--workers", perm.workers, "Worker threads")->check(CLI::PositiveNumber);
  perm_cmd->add_option("--split", perm.split, "contiguous | leading-digit");
  perm_cmd->add_flag("--pockets", perm.pockets, "Magnitude-bucketed accumulation");
  perm_cmd->add_flag("--allow-more-rows", perm.allow_more_rows, "Accept more rows than columns (BB/FG)");
  perm_cmd->add_option("--fixed-config", perm.fixed_config, "Fixed-point width profile (JSON)");
  perm_cmd->add_option("--streams", perm.streams, "Fixed-point delta streams (1 or 4)");
  perm_cmd->add_option("--stagger", perm.stagger, "Interleaved counters per stream");
  perm_cmd->add_option("--output", perm.output, "Write a JSON result document");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-unitary", "Write a Haar-random unitary");
  gen_cmd->add_option("--modes", gen.modes, "Matrix size")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--output", gen.output, "Output file (default stdout)");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw boson-sampling outputs");
  auto* unitary_opt = sample_cmd->add_option("--unitary", sample.unitary, "Interferometer matrix file");
  sample_cmd->add_option("--modes", sample.modes, "Haar-random interferometer size")->excludes(unitary_opt);
  auto* state_opt = sample_cmd->add_option("--input-state", sample.input_state, "Input occupation, e.g. 1,1,0");
  sample_cmd->add_option("--photons", sample.photons, "Single photons in the first modes")->excludes(state_opt);
  sample_cmd->add_option("--samples", sample.samples, "Sample count")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "Seed");
  auto* loss_opt = sample_cmd->add_option("--loss", sample.loss, "Uniform transmission eta in [0, 1]");
  sample_cmd->add_option("--loss-modes", sample.loss_modes, "Per-mode transmissions")->excludes(loss_opt);
  sample_cmd->add_option("--strategy", sample.strategy, "dilation | thinning");
  sample_cmd->add_option("--engine", sample.engine, "Permanent engine for the weights");
  sample_cmd->add_option("--workers", sample.workers, "Worker threads")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--output", sample.output, "Sample file (default stdout)");
  sample_cmd->add_flag("--with-meta", sample.with_meta, "Append seed and elapsed time to each line");

  AccuracyArgs accuracy;
  auto* acc_cmd = app.add_subcommand("accuracy", "Relative error against the multiprecision oracle");
  acc_cmd->add_option("--min-n", accuracy.min_n, "Smallest size");
  acc_cmd->add_option("--max-n", accuracy.max_n, "Largest size");
  acc_cmd->add_option("--trials", accuracy.trials, "Unitaries per size");
  acc_cmd->add_option("--engines", accuracy.engines, "Comma-separated engine ids, e.g. bbfg-gray-double,fixed");
  acc_cmd->add_option("--oracle-bits", accuracy.oracle_bits, "Oracle mantissa bits");
  acc_cmd->add_option("--seed", accuracy.seed, "Seed");
  acc_cmd->add_option("--output", accuracy.output, "CSV file (default stdout)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the sampler over a grid");
  bench_cmd->add_option("--n-list", bench.n_list, "Photon counts");
  bench_cmd->add_option("--m-list", bench.m_list, "Mode counts");
  bench_cmd->add_option("--eta-list", bench.eta_list, "Transmissions");
  bench_cmd->add_option("--samples", bench.samples, "Samples per grid point");
  bench_cmd->add_option("--seed", bench.seed, "Seed");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--output", bench.output, "CSV file (default stdout)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the sampling-time model to bench output");
  fit_cmd->add_option("--input", fit.input, "Bench CSV")->required();
  fit_cmd->add_option("--output", fit.output, "Report file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code;
  }

  try {
    if (*perm_cmd) cmd_perm(perm, out);
    if (*gen_cmd) cmd_gen_unitary(gen, out);
    if (*sample_cmd) cmd_sample(sample, out);
    if (*acc_cmd) cmd_accuracy(accuracy, out);
    if (*bench_cmd) cmd_bench(bench, out);
    if (*fit_cmd) cmd_fit(fit, out);
  } catch (const std::exception& e) {
    err << "permflow: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace permflow::cli
