#include "pcep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "pcep/errors.hpp"

namespace pcep {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string csv_number(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

nlohmann::json to_json(const PosteriorSummary& summary, const std::vector<std::string>& names,
                       std::size_t top) {
  nlohmann::json j;
  nlohmann::json inclusion = nlohmann::json::object();
  for (int k = 0; k < summary.p; ++k) inclusion[names[k]] = summary.inclusion(k);
  j["inclusion"] = inclusion;
  j["map_model"] = {{"gamma", summary.map_model.bits()},
                    {"covariates", summary.map_model.names(names)}};
  j["mp_model"] = {{"gamma", summary.mp_model.bits()},
                   {"covariates", summary.mp_model.names(names)}};
  nlohmann::json ranking = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min(top, summary.ranking.size()); ++i) {
    const ModelIndicator m(summary.ranking[i].first, summary.p);
    ranking.push_back({{"rank", i + 1},
                       {"gamma", m.bits()},
                       {"covariates", m.names(names)},
                       {"probability", summary.ranking[i].second},
                       {"odds_vs_map", summary.ranking.front().second / summary.ranking[i].second}});
  }
  j["top_models"] = ranking;
  j["models_with_mass"] = summary.probs.size();
  return j;
}

nlohmann::json to_json(const SummaryStats& s) {
  return {{"min", s.min}, {"q1", s.q1},     {"median", s.median}, {"mean", s.mean},
          {"q3", s.q3},   {"max", s.max},   {"sd", s.sd}};
}

nlohmann::json to_json(const ReplicateReport& report) {
  nlohmann::json j;
  j["base_seed"] = report.base_seed;
  j["n_rep"] = report.n_rep;
  j["fixed_design"] = report.fixed_design;
  j["true_model"] = report.true_model.names(report.names);
  nlohmann::json backends = nlohmann::json::array();
  for (const BackendReplicates& b : report.backends) {
    nlohmann::json entry;
    entry["prior"] = to_string(b.spec);
    entry["rank_stats"] = to_json(b.rank_stats);
    entry["true_model_rank"] = b.true_model_rank;
    entry["rank1_count"] = std::count(b.true_model_rank.begin(), b.true_model_rank.end(), 1.0);
    entry["mean_nonzero_identified"] = b.mean_nonzero_identified;
    entry["mean_zero_identified"] = b.mean_zero_identified;
    nlohmann::json mean_incl = nlohmann::json::object();
    for (std::size_t k = 0; k < report.names.size(); ++k)
      mean_incl[report.names[k]] = b.inclusion.col(k).mean();
    entry["mean_inclusion"] = mean_incl;
    backends.push_back(std::move(entry));
  }
  j["backends"] = backends;
  return j;
}

nlohmann::json to_json(const RmseReport& report, const std::vector<std::string>& names) {
  return {{"model", report.gamma.names(names)},
          {"gamma", report.gamma.bits()},
          {"dim", report.gamma.dim()},
          {"prior", report.backend},
          {"mean", report.mean},
          {"sd", report.sd},
          {"rmse", report.rmse},
          {"split_streams", report.split_streams}};
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<const ScoreTable*>& tables,
                      const std::vector<std::string>& names) {
  if (tables.empty()) throw UsageError("no score tables to write");
  const int p = tables.front()->p;
  std::set<std::uint64_t> models;
  std::vector<std::string> headers;
  for (const ScoreTable* t : tables) {
    if (t->p != p) throw DimensionError("score tables disagree on p");
    for (const auto& [bits, entry] : t->entries) models.insert(bits);
    std::string h = "log_marginal_" + backend_name(t->spec);
    while (std::find(headers.begin(), headers.end(), h) != headers.end()) h += "_";
    headers.push_back(h);
  }
  std::ofstream out = open_output(path);
  out << "gamma,model,dim";
  for (const auto& h : headers) out << ',' << h;
  out << '\n';
  for (std::uint64_t bits : models) {
    const ModelIndicator m(bits, p);
    out << bits << ',' << m.label(names) << ',' << m.dim();
    for (const ScoreTable* t : tables) {
      out << ',';
      if (auto it = t->entries.find(bits); it != t->entries.end())
        out << csv_number(it->second.log_marginal);
    }
    out << '\n';
  }
}

void write_replicates_csv(const std::filesystem::path& path, const ReplicateReport& report) {
  std::ofstream out = open_output(path);
  out << "prior,replicate,true_model_rank";
  for (const auto& name : report.names) out << ",incl_" << name;
  out << '\n';
  for (const BackendReplicates& b : report.backends)
    for (int r = 0; r < report.n_rep; ++r) {
      out << backend_name(b.spec) << ',' << r << ',' << b.true_model_rank[r];
      for (Eigen::Index k = 0; k < b.inclusion.cols(); ++k) out << ',' << csv_number(b.inclusion(r, k));
      out << '\n';
    }
}

void write_rmse_csv(const std::filesystem::path& path, const std::vector<RmseReport>& reports,
                    const std::vector<std::string>& names) {
  std::ofstream out = open_output(path);
  out << "model,dim,prior,split,stream,rmse\n";
  for (const RmseReport& r : reports)
    for (std::size_t s = 0; s < r.rmse.size(); ++s)
      out << r.gamma.label(names) << ',' << r.gamma.dim() << ',' << r.backend << ',' << s << ','
          << r.split_streams[s] << ',' << csv_number(r.rmse[s]) << '\n';
}

void write_contour_csv(const std::filesystem::path& path, const std::vector<ContourPoint>& grid) {
  std::ofstream out = open_output(path);
  out << "beta1,beta2,density_pcep,density_gprior\n";
  for (const ContourPoint& c : grid)
    out << csv_number(c.beta1) << ',' << csv_number(c.beta2) << ',' << csv_number(c.density_pcep)
        << ',' << csv_number(c.density_gprior) << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out = open_output(path);
  out << value.dump(2) << '\n';
}

}  // namespace pcep
