#include "zmix/cli.hpp"

#include <cfloat>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zmix/bench.hpp"
#include "zmix/intrinsic_dim.hpp"
#include "zmix/labelmetrics.hpp"
#include "zmix/mixer.hpp"
#include "zmix/synthdata.hpp"
#include "zmix/tensor_io.hpp"
#include "zmix/zeta.hpp"

namespace zmix::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t value = 0;
    std::size_t used = 0;
    try {
      value = std::stoul(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || value == 0) {
      throw UsageError("--dims expects positive integers joined by 'x', got '" + text + "'");
    }
    dims.push_back(value);
  }
  if (dims.empty()) throw UsageError("--dims is empty");
  return dims;
}

std::string write_csv_string(const std::function<void(std::ostream&)>& body) {
  std::ostringstream out;
  body(out);
  return out.str();
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string shape;
  std::size_t n = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  double turns = synth::kHelixTurns;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  synth::SyntheticDataset ds;
  try {
    if (a.shape == "helix3" || a.shape == "helix12") {
      ds = synth::gen_helix(a.n, a.shape == "helix3" ? 3 : 12, a.turns, a.noise, a.seed);
    } else {
      ds = synth::generate(a.shape, a.n, a.noise, a.seed);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  io::write_tensor(with_suffix(a.out, ".features.tensor"), ds.features);
  io::write_labels(with_suffix(a.out, ".labels.csv"), ds.labels.labels);
  const auto params = ds.params.to_json();
  io::write_file_atomic(with_suffix(a.out, ".params.json"), params + "\n");
  out << params << '\n';
  return kOk;
}

// --- augment ---------------------------------------------------------------

struct AugmentArgs {
  std::string input;
  std::string labels;
  std::string method;
  double gamma = 2.8;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t batch_size = 0;
  std::size_t classes = 0;
};

template <typename T>
void run_augment(const AugmentArgs& a, const Matrix<T>& x, const SoftLabelMatrix& y,
                 std::ostream& out) {
  Rng rng(a.seed);
  const std::size_t batch = a.batch_size == 0 ? x.rows() : a.batch_size;
  BatchAugmenter<T> augment;
  if (a.method == "zeta") {
    const Gamma gamma(a.gamma);
    augment = [&, gamma](const Matrix<T>& bx, const SoftLabelMatrix& by) {
      return zeta_mixup_batch(bx, by, gamma, rng);
    };
  } else {
    MixupOptions options;
    options.alpha = a.alpha;
    augment = [&, options](const Matrix<T>& bx, const SoftLabelMatrix& by) {
      return mixup_batch(bx, by, options, rng);
    };
  }
  AugmentedBatch<T> result;
  try {
    result = augment_in_batches(x, y, batch, augment);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  io::write_tensor(with_suffix(a.out, ".features.tensor"), result.features);
  io::write_tensor(with_suffix(a.out, ".soft_labels.tensor"), result.soft_labels);
  io::write_tensor(with_suffix(a.out, ".weights.tensor"), result.weights_used);

  json summary;
  summary["method"] = a.method;
  if (a.method == "zeta") {
    summary["gamma"] = a.gamma;
  } else {
    summary["alpha"] = a.alpha;
  }
  summary["seed"] = a.seed;
  summary["n"] = x.rows();
  summary["d"] = x.cols();
  summary["k"] = y.cols();
  summary["batch_size"] = result.batch_size;
  out << summary.dump() << '\n';
}

int cmd_augment(const AugmentArgs& a, std::ostream& out, std::ostream& err) {
  const auto tensor = io::read_tensor(a.input);
  if (tensor.shape.size() < 2) throw io::FormatError("features tensor must have >= 2 axes", 0);
  auto labels = io::read_labels(a.labels);
  if (labels.size() != tensor.shape.front()) {
    throw io::FormatError("features have " + std::to_string(tensor.shape.front()) +
                              " rows but labels have " + std::to_string(labels.size()),
                          0);
  }
  ClassLabels classes = ClassLabels::infer(std::move(labels));
  if (a.classes != 0) {
    if (a.classes < classes.k) throw UsageError("--classes is smaller than the largest label + 1");
    classes.k = a.classes;
  }
  const auto y = one_hot(classes);

  if (a.method == "zeta" && !Gamma(a.gamma).dominant()) {
    err << "warning: gamma " << a.gamma << " < " << kGammaMin
        << "; the top weight is not guaranteed to dominate\n";
  }
  if (tensor.dtype() == io::DType::f32) {
    run_augment(a, tensor.to_matrix<float>(), y, out);
  } else {
    run_augment(a, tensor.to_matrix<double>(), y, out);
  }
  return kOk;
}

// --- id --------------------------------------------------------------------

struct IdArgs {
  std::string input;
  std::size_t k = 8;
  double threshold = 0.05;
  std::string out;
};

int cmd_id(const IdArgs& a, std::ostream& out) {
  const auto points = io::read_tensor(a.input).to_matrix<double>();
  if (a.k >= points.rows()) {
    throw UsageError("--k (" + std::to_string(a.k) + ") must be smaller than N (" +
                     std::to_string(points.rows()) + ")");
  }
  const auto summary = id::dataset_local_id(points, a.k, a.threshold);
  io::write_file_atomic(with_suffix(a.out, ".id.json"), summary.to_json() + "\n");
  json brief;
  brief["k"] = summary.k;
  brief["threshold"] = summary.eigen_threshold;
  brief["mean"] = summary.mean;
  brief["std"] = summary.std;
  brief["n_degenerate"] = summary.n_degenerate;
  out << brief.dump() << '\n';
  return kOk;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string oracle;
  std::string soft_labels;
  std::optional<double> entropy_filter;
  std::size_t bins = 50;
  std::string out;
};

void write_distribution(const std::string& prefix, const std::string& name,
                        const std::vector<double>& values, std::size_t bins) {
  const auto dist = metrics::export_distribution(values, bins, true);
  io::write_file_atomic(with_suffix(prefix, "." + name + "_hist.csv"),
                        write_csv_string([&](std::ostream& o) {
                          metrics::write_histogram_csv(o, dist.histogram);
                        }));
  io::write_file_atomic(with_suffix(prefix, "." + name + "_kde.csv"),
                        write_csv_string([&](std::ostream& o) {
                          metrics::write_curve_csv(o, *dist.kde);
                        }));
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto oracle = io::read_tensor(a.oracle).to_matrix<double>();
  const auto soft = io::read_tensor(a.soft_labels).to_matrix<double>();
  if (oracle.rows() != soft.rows() || oracle.cols() != soft.cols()) {
    throw io::FormatError("oracle predictions are " + std::to_string(oracle.rows()) + "x" +
                              std::to_string(oracle.cols()) + " but soft labels are " +
                              std::to_string(soft.rows()) + "x" + std::to_string(soft.cols()),
                          0);
  }
  metrics::RowMetrics m;
  try {
    m = metrics::evaluate_rows(oracle, soft);
  } catch (const std::invalid_argument& e) {
    throw NumericFailure(e.what());
  }

  std::vector<double> kept_ce;
  std::ostringstream rows;
  rows << "index,entropy,cross_entropy,kept\n" << std::setprecision(17);
  for (std::size_t i = 0; i < m.entropy.size(); ++i) {
    const bool kept = !a.entropy_filter || m.entropy[i] < *a.entropy_filter;
    if (kept) kept_ce.push_back(m.cross_entropy[i]);
    rows << i << ',' << m.entropy[i] << ',' << m.cross_entropy[i] << ',' << (kept ? 1 : 0) << '\n';
  }
  io::write_file_atomic(with_suffix(a.out, ".metrics.csv"), rows.str());
  if (!m.entropy.empty()) write_distribution(a.out, "entropy", m.entropy, a.bins);
  if (!kept_ce.empty()) {
    write_distribution(a.out, "ce", kept_ce, a.bins);
  } else {
    err << "warning: no rows pass the entropy filter; cross-entropy distribution not written\n";
  }

  json summary;
  summary["n"] = m.entropy.size();
  summary["n_kept"] = kept_ce.size();
  if (a.entropy_filter) summary["entropy_filter"] = *a.entropy_filter;
  out << summary.dump() << '\n';
  return kOk;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::size_t batch = 32;
  std::string dims = "3x224x224";
  std::size_t iters = 100;
  std::size_t warmup = 3;
  std::uint64_t seed = 0;
  double gamma = 2.8;
  double alpha = 1.0;
  std::size_t classes = 10;
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  if (a.iters < 10) throw UsageError("--iters must be >= 10");
  if (a.warmup < 3) throw UsageError("--warmup must be >= 3");
  bench::BenchConfig config;
  config.batch = a.batch;
  config.sample_dims = parse_dims(a.dims);
  config.iterations = a.iters;
  config.warmup = a.warmup;
  config.seed = a.seed;
  config.gamma = a.gamma;
  config.alpha = a.alpha;
  config.classes = a.classes;
  bench::BenchComparison report;
  try {
    report = bench::run_benchmark(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto text = report.to_json();
  if (!a.out.empty()) io::write_file_atomic(with_suffix(a.out, ".bench.json"), text + "\n");
  out << text << '\n';
  return kOk;
}

// --- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string features;
  std::string soft_labels;
  std::string weights;
  std::string input;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const auto w = io::read_tensor(a.weights).to_matrix<double>();
  const auto y = io::read_tensor(a.soft_labels).to_matrix<double>();
  const std::size_t n = w.rows();
  const std::size_t batch = w.cols();
  if (y.rows() != n) throw io::FormatError("soft labels and weights differ in row count", 0);
  if (batch == 0 && n > 0) throw io::FormatError("weights tensor has no columns", 0);

  std::vector<std::string> failures;
  for (std::size_t p = 0; p < n; ++p) {
    double sum = 0.0;
    bool negative = false;
    for (const double v : w.row(p)) {
      negative = negative || !(v >= 0.0);
      sum += v;
    }
    if (negative || std::abs(sum - 1.0) > 1e-9) {
      failures.push_back("weights row " + std::to_string(p) + " is not stochastic");
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    double sum = 0.0;
    bool negative = false;
    for (const double v : y.row(p)) {
      negative = negative || !(v >= 0.0);
      sum += v;
    }
    if (negative || std::abs(sum - 1.0) > 1e-9) {
      failures.push_back("soft label row " + std::to_string(p) + " is not a distribution");
    }
  }

  if (!a.input.empty()) {
    const auto feat_tensor = io::read_tensor(a.features);
    const auto xin = io::read_tensor(a.input).to_matrix<double>();
    const auto xout = feat_tensor.to_matrix<double>();
    if (xin.rows() != n || xout.rows() != n || xin.cols() != xout.cols()) {
      throw io::FormatError("input/augmented features do not match the weights", 0);
    }
    // f32 batches accumulate in f32, so the bound grows with the batch size.
    const double rel = feat_tensor.dtype() == io::DType::f32
                           ? std::max(1e-6, 2.0 * static_cast<double>(batch) * FLT_EPSILON)
                           : 1e-6;
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t base = (p / batch) * batch;
      const std::size_t len = std::min(batch, n - base);
      for (std::size_t c = 0; c < xin.cols(); ++c) {
        double expect = 0.0;
        double scale = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          expect += w(p, j) * xin(base + j, c);
          scale += std::abs(w(p, j) * xin(base + j, c));
        }
        if (std::abs(xout(p, c) - expect) > rel * scale + 1e-300) {
          failures.push_back("features row " + std::to_string(p) + " is not weights x input");
          break;
        }
      }
    }
  }

  json report;
  report["rows"] = n;
  report["ok"] = failures.empty();
  report["failures"] = failures;
  out << report.dump() << '\n';
  if (!failures.empty()) throw NumericFailure(std::to_string(failures.size()) + " invariant violations");
  return kOk;
}

// --- gamma-min -------------------------------------------------------------

int cmd_gamma_min(double tolerance, std::ostream& out) {
  if (!(tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  const double root = solve_gamma_min(tolerance);
  const double zeta = zeta_tail_corrected(root);
  json j;
  j["gamma_min"] = root;
  j["zeta_at_root"] = zeta;
  j["tolerance"] = tolerance;
  out << j.dump() << '\n';
  if (std::abs(zeta - 2.0) > 10.0 * tolerance) throw NumericFailure("root does not solve zeta = 2");
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"zeta-mixup augmentation toolkit", "zmix"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen_cmd->add_option("--shape", gen.shape, "crescents | spirals | helix3 | helix12")
      ->required()
      ->check(CLI::IsMember({"crescents", "spirals", "helix3", "helix12"}));
  gen_cmd->add_option("--n", gen.n, "Number of points")->required();
  gen_cmd->add_option("--noise", gen.noise, "Gaussian noise sigma per coordinate");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--turns", gen.turns, "Helix turns");
  gen_cmd->add_option("--out", gen.out, "Output prefix")->required();

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment", "Apply zeta-mixup or mixup to a dataset");
  aug_cmd->add_option("--input", aug.input, "Features tensor")->required();
  aug_cmd->add_option("--labels", aug.labels, "Labels CSV")->required();
  aug_cmd->add_option("--method", aug.method, "zeta | mixup")
      ->required()
      ->check(CLI::IsMember({"zeta", "mixup"}));
  aug_cmd->add_option("--gamma", aug.gamma, "zeta-mixup exponent");
  aug_cmd->add_option("--alpha", aug.alpha, "mixup Beta(alpha, alpha) parameter");
  aug_cmd->add_option("--seed", aug.seed, "Random seed")->required();
  aug_cmd->add_option("--batch-size", aug.batch_size, "Rows per batch (0 = whole input)");
  aug_cmd->add_option("--classes", aug.classes, "Class count (default: max label + 1)");
  aug_cmd->add_option("--out", aug.out, "Output prefix")->required();

  IdArgs ida;
  auto* id_cmd = app.add_subcommand("id", "Estimate local intrinsic dimensionality");
  id_cmd->add_option("--input", ida.input, "Features tensor")->required();
  id_cmd->add_option("--k", ida.k, "Neighbors per point");
  id_cmd->add_option("--threshold", ida.threshold, "Relative eigenvalue threshold")
      ->check(CLI::Range(0.0, 1.0));
  id_cmd->add_option("--out", ida.out, "Output prefix")->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Entropy / cross entropy of oracle predictions");
  eval_cmd->add_option("--oracle", ev.oracle, "Oracle probability tensor (N x K)")->required();
  eval_cmd->add_option("--soft-labels", ev.soft_labels, "Soft label tensor (N x K)")->required();
  eval_cmd->add_option("--entropy-filter", ev.entropy_filter,
                       "Keep only rows with entropy below this value for the CE export");
  eval_cmd->add_option("--bins", ev.bins, "Histogram bins")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", ev.out, "Output prefix")->required();

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "Time zeta-mixup against mixup");
  bench_cmd->add_option("--batch", be.batch, "Batch size");
  bench_cmd->add_option("--dims", be.dims, "Per-sample dimensions, e.g. 3x224x224");
  bench_cmd->add_option("--iters", be.iters, "Timed iterations (>= 10)");
  bench_cmd->add_option("--warmup", be.warmup, "Untimed warmup iterations (>= 3)");
  bench_cmd->add_option("--seed", be.seed, "Random seed")->required();
  bench_cmd->add_option("--gamma", be.gamma, "zeta-mixup exponent");
  bench_cmd->add_option("--alpha", be.alpha, "mixup Beta parameter");
  bench_cmd->add_option("--classes", be.classes, "Label classes");
  bench_cmd->add_option("--out", be.out, "Output prefix");

  ValidateArgs va;
  auto* val_cmd = app.add_subcommand("validate", "Check augment outputs against mixing invariants");
  val_cmd->add_option("--features", va.features, "Augmented features tensor");
  val_cmd->add_option("--soft-labels", va.soft_labels, "Augmented soft labels tensor")->required();
  val_cmd->add_option("--weights", va.weights, "Weights tensor")->required();
  val_cmd->add_option("--input", va.input, "Original features (enables the product check)")
      ->needs(val_cmd->get_option("--features"));

  double tolerance = 1e-5;
  auto* gm_cmd = app.add_subcommand("gamma-min", "Solve zeta(gamma) = 2");
  gm_cmd->add_option("--tolerance", tolerance, "Bracket width at which bisection stops");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*aug_cmd) return cmd_augment(aug, out, err);
    if (*id_cmd) return cmd_id(ida, out);
    if (*eval_cmd) return cmd_eval(ev, out, err);
    if (*bench_cmd) return cmd_bench(be, out);
    if (*val_cmd) return cmd_validate(va, out);
    if (*gm_cmd) return cmd_gamma_min(tolerance, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  }
  return kUsage;
}

}  // namespace zmix::cli
