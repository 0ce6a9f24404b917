#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/pipeline.hpp"
#include "inkmetrics/synth.hpp"

namespace {

ink::PipelineConfig g_config;

void apply_seed_env() {
  if (const char* env = std::getenv("INKMETRICS_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') g_config.seed = v;
  }
}

ink::SimplifyMethod parse_simplify(const std::string& name) {
  if (name == "rdp") return ink::SimplifyMethod::rdp;
  if (name == "angle" || name == "angle_threshold") return ink::SimplifyMethod::angle_threshold;
  if (name == "raw") return ink::SimplifyMethod::raw;
  throw ink::ValidationError("unknown simplify method '" + name + "'");
}

ink::MetricMatrix load_matrix(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ink::ValidationError("cannot read " + path);
  std::string content(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>{});
  return ink::parse_metric_matrix_csv(content);
}

int cmd_metrics(const std::string& in_dir, const std::string& out_dir, bool use_archive) {
  std::vector<ink::DrawingSession> sessions =
      use_archive ? ink::ingest_recording_archive(in_dir) : ink::load_sessions(in_dir);
  ink::MetricComputation mc = ink::compute_metrics(sessions, g_config);

  std::filesystem::create_directories(out_dir);
  std::ofstream out(std::filesystem::path(out_dir) / "metrics.csv", std::ios::binary);
  out << ink::metric_matrix_csv(mc.matrix);

  std::cout << "wrote " << mc.matrix.n_rows() << " rows x " << mc.matrix.n_cols()
            << " metrics to " << out_dir << "/metrics.csv\n";
  for (const auto& [id, reason] : mc.excluded)
    std::cout << "excluded " << id << ": " << reason << "\n";
  for (const auto& note : mc.notes) std::cout << "note: " << note << "\n";
  return 0;
}

int cmd_analyze(const std::string& in_csv, const std::string& out_dir) {
  ink::MetricMatrix matrix = load_matrix(in_csv);
  ink::AnalysisResult res = ink::run_analysis(matrix, g_config);
  res.bundle.write_to(out_dir);

  double total4 = 0.0, total5 = 0.0;
  for (double e : res.initial.explained) total4 += e;
  for (double e : res.refit.explained) total5 += e;
  std::cout << "initial PCA explained " << 100.0 * total4 << "% of variance; refit on "
            << res.refit.variables.size() << " retained variables explained "
            << 100.0 * total5 << "%\n";
  for (const auto& [var, dim] : res.assignment)
    std::cout << var << " -> dimension " << dim << "\n";
  for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

int cmd_compare(const std::string& a_csv, const std::string& b_csv,
                const std::string& out_dir) {
  ink::MetricMatrix a = load_matrix(a_csv);
  ink::MetricMatrix b = load_matrix(b_csv);
  ink::CompareResult res = ink::run_compare(a, b, g_config);
  res.bundle.write_to(out_dir);

  std::cout << res.consensus.size() << " consensus variables:";
  for (const auto& v : res.consensus) std::cout << " " << v;
  std::cout << "\n";
  double total = 0.0;
  for (double e : res.joint_combined.explained) total += e;
  std::cout << "combined refit explained " << 100.0 * total << "% of variance\n";
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

struct SynthArgs {
  std::string kind = "levy";
  double mu = 2.0;
  double sigma = 20.0;
  double hurst = 0.8;
  int n = 5000;
  int count = 10;
  std::uint64_t seed = 7;
  std::string out;
};

int cmd_synth(const SynthArgs& args) {
  namespace fs = std::filesystem;
  if (args.kind == "fgn") {
    ink::BinarySeries bits =
        ink::gen_fgn_binary(args.hurst, static_cast<std::size_t>(args.n), args.seed);
    std::ofstream f(args.out, std::ios::binary);
    if (!f) throw ink::ValidationError("cannot write " + args.out);
    f << "bit\n";
    for (auto b : bits.bits) f << int(b) << "\n";
    std::cout << "wrote " << bits.bits.size() << " bits to " << args.out << "\n";
    return 0;
  }
  if (args.kind == "corpus") {
    auto sessions = ink::gen_corpus(args.count, args.seed);
    for (const auto& s : sessions) ink::write_session_files(s, args.out);
    std::cout << "wrote " << sessions.size() << " sessions to " << args.out << "\n";
    return 0;
  }

  ink::DrawingSession session;
  if (args.kind == "levy") {
    session = ink::gen_levy(args.mu, args.n, args.seed);
  } else if (args.kind == "brownian") {
    session = ink::gen_brownian(args.sigma, args.n, args.seed);
  } else {
    throw ink::ValidationError("unknown synth kind '" + args.kind + "'");
  }

  // 'session.csv' style argument: write the csv there and the sidecar next
  // to it; a directory argument uses the session id for both names.
  fs::path out(args.out);
  if (out.extension() == ".csv") {
    fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
    std::ofstream csv(out, std::ios::binary);
    csv << ink::serialize_session_csv(session);
    fs::path sidecar = out;
    sidecar.replace_extension(".json");
    std::ofstream js(sidecar, std::ios::binary);
    js << ink::serialize_sidecar_json(session);
    std::cout << "wrote " << out.string() << " and " << sidecar.string() << "\n";
  } else {
    ink::write_session_files(session, out);
    std::cout << "wrote session " << session.session_id << " to " << out.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drawing metrics and the three-step PCA workflow"};
  app.require_subcommand(1);

  std::string simplify = "rdp";
  app.add_option("--dt-ms", g_config.dt_ms, "binary sampling bin width (ms)");
  app.add_option("--epsilon", g_config.epsilon_px, "keypoint simplification epsilon (px)");
  app.add_option("--simplify", simplify, "keypoint method: rdp|angle|raw");
  app.add_option("--k", g_config.k_components, "PCA components");
  app.add_option("--threshold", g_config.loading_threshold, "loading retention threshold");
  app.add_option("--exclude", g_config.exclude, "variables to exclude before the PCA")
      ->delimiter(',');
  app.add_option("--group-by", g_config.group_by, "label key for group tests");
  app.add_option("--seed", g_config.seed, "run seed (INKMETRICS_SEED overrides)");
  app.add_flag("--unbiased-gini", g_config.unbiased_gini, "use the n/(n-1) Gini variant");
  app.add_flag("--cross-stroke-angles", g_config.cross_stroke_angles,
               "turning angles may span pen-up gaps");
  bool keep_proportion = false;
  app.add_flag("--keep-time-proportion", keep_proportion,
               "skip the fixed time-proportion removal step");
  std::string posthoc = "mann_whitney";
  app.add_option("--posthoc", posthoc, "posthoc method: mann_whitney|welch_t");

  auto* metrics = app.add_subcommand("metrics", "compute the 14 metrics for a session directory");
  std::string in_path, out_path;
  bool use_archive = false;
  metrics->fallthrough();
  metrics->add_option("--in", in_path, "directory of <id>.csv + <id>.json sessions")
      ->required();
  metrics->add_option("--out", out_path, "output directory")->required();
  metrics->add_flag("--archive", use_archive, "treat --in as the published archive layout");

  auto* analyze = app.add_subcommand("analyze", "run the three-step workflow on metrics.csv");
  std::string analyze_in;
  analyze->fallthrough();
  analyze->add_option("--in", analyze_in, "metrics.csv")->required();
  analyze->add_option("--out", out_path, "report directory")->required();

  auto* compare = app.add_subcommand("compare", "consensus analysis of two metric tables");
  std::string a_csv, b_csv;
  compare->fallthrough();
  compare->add_option("--a", a_csv, "first metrics.csv")->required();
  compare->add_option("--b", b_csv, "second metrics.csv")->required();
  compare->add_option("--out", out_path, "report directory")->required();

  auto* synth = app.add_subcommand("synth", "generate synthetic sessions and series");
  SynthArgs synth_args;
  synth->fallthrough();
  synth->add_option("--kind", synth_args.kind, "levy|brownian|fgn|corpus");
  synth->add_option("--mu", synth_args.mu, "power-law exponent (levy)");
  synth->add_option("--sigma", synth_args.sigma, "step sigma in px (brownian)");
  synth->add_option("--hurst", synth_args.hurst, "target H (fgn)");
  synth->add_option("--n", synth_args.n, "steps or series length");
  synth->add_option("--count", synth_args.count, "sessions in a corpus");
  synth->add_option("--out", synth_args.out, "output file or directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    g_config.simplify = parse_simplify(simplify);
    g_config.drop_time_proportion = !keep_proportion;
    if (posthoc == "welch_t")
      g_config.posthoc = ink::PosthocMethod::welch_t;
    else if (posthoc != "mann_whitney")
      throw ink::ValidationError("unknown posthoc method '" + posthoc + "'");
    apply_seed_env();
    synth_args.seed = g_config.seed ? g_config.seed : synth_args.seed;

    if (metrics->parsed()) return cmd_metrics(in_path, out_path, use_archive);
    if (analyze->parsed()) return cmd_analyze(analyze_in, out_path);
    if (compare->parsed()) return cmd_compare(a_csv, b_csv, out_path);
    if (synth->parsed()) return cmd_synth(synth_args);
  } catch (const ink::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ink::DegeneracyError& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
