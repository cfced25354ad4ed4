#include "pcep/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "pcep/errors.hpp"
#include "pcep/eval.hpp"
#include "pcep/inference.hpp"
#include "pcep/report.hpp"
#include "pcep/search.hpp"

namespace pcep::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// Options shared by the commands that load a dataset.
struct DataOptions {
  std::string source = "builtin:crime";
  std::string response = "y";
  std::vector<std::string> ignore;
  std::string transform;  // "log" or "none"; empty means the source's default
  std::vector<std::string> log_except;
  bool center = true;
  std::vector<std::string> center_except;
};

struct Options {
  std::string command;
  DataOptions data;
  std::vector<std::string> priors;
  std::string search = "enumerate";
  std::uint64_t iters = 50000;
  std::uint64_t seed = 0;
  std::string model_prior = "uniform";
  std::string estimator = "renormalized";
  double burn_in = 0.1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  bool quiet = false;
  // simulate
  int replicates = 100;
  bool random_design = false;
  // corr-study
  std::vector<double> rhos{0.2, 0.4, 0.6};
  std::vector<double> cors{0.0, 0.3, 0.5, 0.7, 0.9, 0.99};
  long n = 100;
  // rmse
  std::vector<std::string> models;
  int splits = 50;
  // contours
  double r = 0.5;
  double range = 3.0;
  int points = 101;
};

bool is_builtin(const std::string& source) { return source == "builtin:crime"; }

struct LoadedData {
  Dataset ds;
  json record;
};

LoadedData load(const DataOptions& o) {
  Dataset raw = [&] {
    if (is_builtin(o.source)) return crime_dataset();
    ColumnSchema schema;
    schema.response = o.response;
    schema.ignore.insert(o.ignore.begin(), o.ignore.end());
    return load_dataset(o.source, schema);
  }();

  std::string transform = o.transform;
  std::vector<std::string> log_except = o.log_except;
  if (transform.empty()) transform = is_builtin(o.source) ? "log" : "none";
  if (is_builtin(o.source) && o.log_except.empty()) log_except = {"X2"};

  std::set<std::string> except;
  if (transform == "log") {
    except.insert(log_except.begin(), log_except.end());
  } else {
    except.insert(raw.names().begin(), raw.names().end());
    except.insert(raw.response_name());
  }
  for (const auto& name : log_except)
    if (name != raw.response_name()) (void)raw.column(name);
  std::set<std::string> center_except(o.center_except.begin(), o.center_except.end());
  Dataset ds = preprocess(raw, except, o.center, center_except);

  json record{{"source", o.source},
              {"n", ds.n()},
              {"p", ds.p()},
              {"response", ds.response_name()},
              {"covariates", ds.names()},
              {"log_transformed", ds.preprocessing().log_transformed},
              {"response_logged", ds.preprocessing().response_logged},
              {"centered", ds.preprocessing().centered},
              {"not_centered", ds.preprocessing().not_centered}};
  if (is_builtin(o.source)) record["sha256"] = crime_csv_sha256();
  return {std::move(ds), std::move(record)};
}

ModelPrior parse_model_prior(const std::string& text) {
  if (text == "uniform") return ModelPrior::uniform();
  const std::string prefix = "beta-binomial";
  if (text.rfind(prefix, 0) == 0) {
    double a = 1.0, b = 1.0;
    if (text.size() > prefix.size()) {
      char sep = 0, comma = 0;
      std::istringstream in(text.substr(prefix.size()));
      if (!(in >> sep >> a >> comma >> b) || sep != ':' || comma != ',' || !in.eof())
        throw UsageError("model prior must be 'uniform' or 'beta-binomial[:a,b]'");
    }
    return ModelPrior::beta_binomial(a, b);
  }
  throw UsageError("model prior must be 'uniform' or 'beta-binomial[:a,b]'");
}

std::vector<PriorSpec> parse_priors(const std::vector<std::string>& texts,
                                    std::vector<std::string> fallback) {
  std::vector<PriorSpec> specs;
  for (const auto& t : texts.empty() ? fallback : texts) specs.push_back(parse_prior_spec(t));
  return specs;
}

std::filesystem::path output_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("PCEP_OUTPUT_DIR"); env && *env) return env;
  return "pcep-out";
}

ModelIndicator parse_model(const std::string& text, const Dataset& ds) {
  if (text == "full") return ModelIndicator::full_model(ds.p());
  if (text == "null") return ModelIndicator::null_model(ds.p());
  std::vector<std::string> names;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) names.push_back(item);
  for (const auto& name : names)
    if (std::find(ds.names().begin(), ds.names().end(), name) == ds.names().end())
      throw UsageError("unknown covariate '" + name + "' in --model");
  return ModelIndicator::from_names(names, ds.names());
}

json run_analyze(const Options& o, const std::filesystem::path& dir, std::ostream& out,
                 std::ostream& err, json& resolved) {
  const LoadedData data = load(o.data);
  const Dataset& ds = data.ds;
  const auto specs = parse_priors(o.priors, {"pcep"});
  const ModelPrior mprior = parse_model_prior(o.model_prior);
  if (o.search != "enumerate" && o.search != "mc3")
    throw UsageError("--search must be 'enumerate' or 'mc3'");
  if (o.estimator != "renormalized" && o.estimator != "frequency")
    throw UsageError("--estimator must be 'renormalized' or 'frequency'");
  const Estimator estimator =
      o.estimator == "frequency" ? Estimator::Frequency : Estimator::Renormalized;
  if (estimator == Estimator::Frequency && o.search != "mc3")
    throw UsageError("the frequency estimator needs --search mc3");

  resolved["dataset"] = data.record;
  resolved["priors"] = json::array();
  for (const auto& s : specs) resolved["priors"].push_back(to_string(s));

  auto space = std::make_shared<const ModelSpace>(ds.X());
  std::vector<ScoreTable> tables;
  json summaries = json::array();
  for (const PriorSpec& spec : specs) {
    const ModelScorer scorer(space, ds.y(), spec);
    ScoreTable table;
    if (o.search == "enumerate") {
      table = enumerate(scorer, {o.threads});
    } else {
      Mc3Options mo;
      if (!o.quiet) {
        mo.progress_every = std::max<std::uint64_t>(1, o.iters / 10);
        mo.progress = [&err, name = backend_name(spec)](const Progress& p) {
          err << name << ": " << p.iteration << '/' << p.total << " sweeps, cache hit rate "
              << csv_number(p.cache_hit_rate) << '\n';
        };
      }
      table = mc3(scorer, mprior, o.iters, o.seed, mo);
    }
    const PosteriorSummary summary = summarize(table, mprior, estimator, o.burn_in);
    json s = to_json(summary, ds.names());
    s["prior"] = to_string(spec);
    s["backend"] = backend_name(spec);
    s["models_scored"] = table.entries.size();
    s["singular_models"] = table.singular;
    s["exhaustive"] = table.exhaustive;
    summaries.push_back(std::move(s));
    tables.push_back(std::move(table));
  }

  std::vector<const ScoreTable*> ptrs;
  for (const auto& t : tables) ptrs.push_back(&t);
  write_scores_csv(dir / "scores.csv", ptrs, ds.names());

  // Inclusion table, one column per prior.
  out << "covariate";
  for (const auto& s : summaries) out << '\t' << s["backend"].get<std::string>();
  out << '\n';
  for (const auto& name : ds.names()) {
    out << name;
    for (const auto& s : summaries) out << '\t' << csv_number(s["inclusion"][name].get<double>());
    out << '\n';
  }
  return {{"command", o.command}, {"search", o.search}, {"results", summaries}};
}

json run_simulate(const Options& o, const std::filesystem::path& dir, std::ostream& out,
                  json& resolved) {
  const auto specs = parse_priors(o.priors, {"pcep", "gprior", "hyperg"});
  resolved["priors"] = json::array();
  for (const auto& s : specs) resolved["priors"].push_back(to_string(s));
  ReplicateOptions ro;
  ro.fixed_design = !o.random_design;
  ro.threads = o.threads;
  const ReplicateReport report = replicate_study(o.seed, o.replicates, specs, ro);
  write_replicates_csv(dir / "replicates.csv", report);
  out << "prior\tmean_rank\tsd_rank\tmedian_rank\trank1\n";
  for (const auto& b : report.backends)
    out << backend_name(b.spec) << '\t' << csv_number(b.rank_stats.mean) << '\t'
        << csv_number(b.rank_stats.sd) << '\t' << csv_number(b.rank_stats.median) << '\t'
        << std::count(b.true_model_rank.begin(), b.true_model_rank.end(), 1.0) << '\n';
  json j = to_json(report);
  j["command"] = o.command;
  return j;
}

json run_corr_study(const Options& o, const std::filesystem::path& dir, std::ostream& out) {
  std::ofstream csv;
  std::filesystem::create_directories(dir);
  csv.open(dir / "correlation.csv");
  if (!csv) throw Error("cannot write " + (dir / "correlation.csv").string());
  csv << "rho,cor,mean_pcep,mean_gprior,sd_pcep,sd_gprior\n";
  out << "rho\tcor\tmean_pcep\tmean_gprior\n";
  json cells = json::array();
  std::uint64_t cell_index = 0;
  for (double rho : o.rhos)
    for (double cor : o.cors) {
      const CorrelationCell c =
          correlation_cell(rho, cor, o.n, o.replicates, o.seed + 1000003 * cell_index++);
      csv << csv_number(rho) << ',' << csv_number(cor) << ',' << csv_number(c.mean_pcep) << ','
          << csv_number(c.mean_gprior) << ',' << csv_number(c.sd_pcep) << ','
          << csv_number(c.sd_gprior) << '\n';
      out << csv_number(rho) << '\t' << csv_number(cor) << '\t' << csv_number(c.mean_pcep) << '\t'
          << csv_number(c.mean_gprior) << '\n';
      cells.push_back({{"rho", rho},
                       {"cor", cor},
                       {"mean_pcep", c.mean_pcep},
                       {"mean_gprior", c.mean_gprior},
                       {"sd_pcep", c.sd_pcep},
                       {"sd_gprior", c.sd_gprior}});
    }
  return {{"command", o.command}, {"cells", cells}};
}

json run_rmse(const Options& o, const std::filesystem::path& dir, std::ostream& out,
              json& resolved) {
  const LoadedData data = load(o.data);
  const Dataset& ds = data.ds;
  const auto specs = parse_priors(o.priors, {"pcep", "gprior", "hyperg"});
  resolved["dataset"] = data.record;
  std::vector<ModelIndicator> models;
  for (const auto& m : o.models.empty() ? std::vector<std::string>{"full"} : o.models)
    models.push_back(parse_model(m, ds));

  std::vector<RmseReport> reports;
  json rows = json::array();
  out << "model\tdim\tprior\tmean\tsd\n";
  for (const auto& m : models)
    for (const auto& spec : specs) {
      RmseReport r = split_half_rmse(ds, m, spec, o.splits, o.seed);
      out << m.label(ds.names()) << '\t' << m.dim() << '\t' << r.backend << '\t'
          << csv_number(r.mean) << '\t' << csv_number(r.sd) << '\n';
      json row = to_json(r, ds.names());
      row["prior"] = to_string(spec);
      rows.push_back(std::move(row));
      reports.push_back(std::move(r));
    }
  write_rmse_csv(dir / "rmse.csv", reports, ds.names());
  return {{"command", o.command}, {"results", rows}};
}

json run_contours(const Options& o, const std::filesystem::path& dir, std::ostream& out) {
  if (o.points < 1) throw UsageError("--points must be positive");
  const Dataset ds = centered(generate_pairwise(0.0, o.r, o.n, o.seed));
  const Design dm = design(ds, ModelIndicator::full_model(2));
  const GridAxis axis{-o.range, o.range, o.points};
  const auto grid = prior_contour_grid(dm, PcepConfig::defaults(ds.n()), axis, axis);
  write_contour_csv(dir / "contours.csv", grid);
  const auto peak = std::max_element(grid.begin(), grid.end(), [](const auto& a, const auto& b) {
    return a.density_pcep < b.density_pcep;
  });
  out << "grid points: " << grid.size() << ", PCEP mode density " << csv_number(peak->density_pcep)
      << '\n';
  return {{"command", o.command}, {"n", o.n}, {"r", o.r}, {"points", grid.size()}};
}

void add_data_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data.source, "CSV path or builtin:crime")->capture_default_str();
  cmd->add_option("--response", o.data.response, "Response column name")->capture_default_str();
  cmd->add_option("--ignore", o.data.ignore, "Columns to drop (e.g. row labels)")->delimiter(',');
  cmd->add_option("--transform", o.data.transform, "log or none (default: log for builtin:crime)")
      ->check(CLI::IsMember({"log", "none"}));
  cmd->add_option("--log-except", o.data.log_except, "Columns left untransformed")->delimiter(',');
  cmd->add_flag("--center,!--no-center", o.data.center, "Mean-centre columns (default on)");
  cmd->add_option("--center-except", o.data.center_except, "Columns left uncentred")
      ->delimiter(',');
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory (default $PCEP_OUTPUT_DIR or pcep-out)");
  cmd->add_flag("--quiet", o.quiet, "Suppress progress output");
}

std::vector<std::string> manifest_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read manifest " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed manifest " + path + ": " + e.what());
  }
  if (!j.contains("args") || !j["args"].is_array()) throw UsageError("manifest has no 'args' array");
  return j["args"].get<std::vector<std::string>>();
}

int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // --from-manifest replays the recorded arguments; a later --out still wins.
  if (auto it = std::find(args.begin(), args.end(), "--from-manifest"); it != args.end()) {
    if (std::next(it) == args.end()) throw UsageError("--from-manifest needs a path");
    const std::string path = *std::next(it);
    std::vector<std::string> rest(args.begin(), it);
    rest.insert(rest.end(), std::next(it, 2), args.end());
    std::vector<std::string> replay = manifest_args(path);
    replay.insert(replay.end(), rest.begin(), rest.end());
    args = std::move(replay);
  }

  Options o;
  CLI::App app{"Bayesian variable selection with PCEP, g-prior, hyper-g and BIC scores",
               "pcep-select"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  auto* analyze = app.add_subcommand("analyze", "Score models on a dataset and summarise");
  auto* mc3_cmd = app.add_subcommand("mc3", "analyze with --search mc3");
  for (auto* cmd : {analyze, mc3_cmd}) {
    add_data_options(cmd, o);
    add_common(cmd, o);
    cmd->add_option("--prior", o.priors, "pcep[:g0=..,delta=..,a=..,b=..] | gprior[:g=..] | "
                                         "hyperg[:alpha=..] | bic (repeatable)");
    cmd->add_option("--iters", o.iters, "MC3 sweeps")->capture_default_str();
    cmd->add_option("--model-prior", o.model_prior, "uniform | beta-binomial[:a,b]")
        ->capture_default_str();
    cmd->add_option("--estimator", o.estimator, "renormalized | frequency")->capture_default_str();
    cmd->add_option("--burn-in", o.burn_in, "Burn-in fraction for the frequency estimator")
        ->capture_default_str();
  }
  analyze->add_option("--search", o.search, "enumerate | mc3")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Replicate study on the 15-covariate generator");
  add_common(simulate, o);
  simulate->add_option("--prior", o.priors, "Backends (default pcep, gprior, hyperg)");
  simulate->add_option("--replicates", o.replicates, "Replicates")->capture_default_str();
  simulate->add_flag("--random-design", o.random_design, "Redraw X for every replicate");

  auto* corr = app.add_subcommand("corr-study", "True-model probability under correlated pairs");
  add_common(corr, o);
  corr->add_option("--rho", o.rhos, "Effect sizes")->delimiter(',');
  corr->add_option("--cor", o.cors, "Covariate correlations")->delimiter(',');
  corr->add_option("--n", o.n, "Observations per replicate")->capture_default_str();
  corr->add_option("--replicates", o.replicates, "Replicates per cell")->capture_default_str();

  auto* rmse_cmd = app.add_subcommand("rmse", "Split-half predictive RMSE");
  add_data_options(rmse_cmd, o);
  add_common(rmse_cmd, o);
  rmse_cmd->add_option("--prior", o.priors, "Backends (default pcep, gprior, hyperg)");
  rmse_cmd->add_option("--model", o.models, "Comma-separated covariates, 'full' or 'null' "
                                            "(repeatable)");
  rmse_cmd->add_option("--splits", o.splits, "Number of random splits")->capture_default_str();

  auto* contours = app.add_subcommand("contours", "Prior density grid for two covariates");
  add_common(contours, o);
  contours->add_option("--n", o.n, "Observations")->capture_default_str();
  contours->add_option("--r", o.r, "Covariate correlation")->capture_default_str();
  contours->add_option("--range", o.range, "Grid half-width")->capture_default_str();
  contours->add_option("--points", o.points, "Points per axis")->capture_default_str();

  // Repeated scalar options (a replayed manifest followed by a new --out)
  // resolve to the last occurrence.
  for (CLI::App* sub : app.get_subcommands({}))
    for (CLI::Option* opt : sub->get_options())
      if (opt->get_expected_max() == 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  o.command = cmd->get_name();
  if (o.command == "mc3") o.search = "mc3";
  if (o.replicates < 1 && (o.command == "simulate" || o.command == "corr-study"))
    throw UsageError("--replicates must be positive");

  const std::filesystem::path dir = output_dir(o);
  std::filesystem::create_directories(dir);
  json resolved{{"command", o.command}, {"seed", o.seed}, {"threads", o.threads}};

  json summary;
  std::vector<std::string> outputs{"summary.json", "manifest.json"};
  if (o.command == "analyze" || o.command == "mc3") {
    resolved["search"] = o.search;
    resolved["model_prior"] = o.model_prior;
    resolved["estimator"] = o.estimator;
    if (o.search == "mc3") {
      resolved["iters"] = o.iters;
      resolved["burn_in"] = o.burn_in;
    }
    summary = run_analyze(o, dir, out, err, resolved);
    outputs.push_back("scores.csv");
  } else if (o.command == "simulate") {
    resolved["replicates"] = o.replicates;
    resolved["fixed_design"] = !o.random_design;
    summary = run_simulate(o, dir, out, resolved);
    outputs.push_back("replicates.csv");
  } else if (o.command == "corr-study") {
    resolved.update({{"rho", o.rhos}, {"cor", o.cors}, {"n", o.n}, {"replicates", o.replicates}});
    summary = run_corr_study(o, dir, out);
    outputs.push_back("correlation.csv");
  } else if (o.command == "rmse") {
    resolved["splits"] = o.splits;
    resolved["models"] = o.models;
    summary = run_rmse(o, dir, out, resolved);
    outputs.push_back("rmse.csv");
  } else {
    resolved.update({{"n", o.n}, {"r", o.r}, {"range", o.range}, {"points", o.points}});
    summary = run_contours(o, dir, out);
    outputs.push_back("contours.csv");
  }

  write_json(dir / "summary.json", summary);
  write_json(dir / "manifest.json", {{"tool", "pcep-select"},
                                     {"version", kVersion},
                                     {"args", args},
                                     {"resolved", resolved},
                                     {"outputs", outputs}});
  if (!o.quiet) err << "wrote " << dir.string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pcep::cli
