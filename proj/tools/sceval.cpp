#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sceval/budget_select.hpp"
#include "sceval/report.hpp"
#include "sceval/sc_sim.hpp"
#include "sceval/scorers.hpp"
#include "sceval/stability.hpp"
#include "sceval/stream.hpp"

namespace {

using namespace sceval;

Hyperplane load_hyperplane(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("bias=", 0) != 0)
    throw InputError(path + ": expected first line 'bias=<b>'");
  Hyperplane h;
  h.bias = std::stod(line.substr(5));
  if (!std::getline(in, line)) throw InputError(path + ": missing weights line");
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) h.weights.push_back(std::stod(cell));
  if (h.weights.empty()) throw InputError(path + ": empty weight vector");
  return h;
}

const std::vector<double>& embedding_of(const EmbeddingTable& table,
                                        const SampleRecord& r) {
  const std::string& key = r.embedding_id ? *r.embedding_id : r.sample_id;
  auto it = table.rows.find(key);
  if (it == table.rows.end())
    throw InputError("no embedding for sample '" + r.sample_id + "' (key '" +
                     key + "')");
  return it->second;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  return file;
}

void apply_orientations(OrientationRegistry& reg,
                        const std::vector<std::string>& specs) {
  for (const auto& spec : specs) {
    auto pos = spec.rfind('=');
    if (pos == std::string::npos)
      throw InputError("bad --orient '" + spec + "', expected <name>=<up|down>");
    std::string name = spec.substr(0, pos), dir = spec.substr(pos + 1);
    if (dir != "up" && dir != "down")
      throw InputError("bad --orient direction '" + dir + "'");
    reg.register_score(name, dir == "up");
  }
}

RejectMethod parse_method(const std::string& m) {
  if (m == "cutoff") return RejectMethod::SingleCutoff;
  if (m == "band") return RejectMethod::Band;
  throw InputError("unknown method '" + m + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Selective-classification evaluation engine for temporal "
               "prediction streams"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::vector<std::string> orient_specs;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--format", format, "Report format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--orient", orient_specs,
                 "Score orientation override, <name>=<up|down> "
                 "(up = higher means more uncertain)");

  // score
  auto* sc = app.add_subcommand("score", "Compute a native confidence score "
                                         "and write it back into the stream");
  std::string sc_input, sc_output, sc_scorer, sc_embeddings, sc_hyperplane;
  int sc_train_months = 1;
  sc->add_option("--input", sc_input, "Stream file")->required();
  sc->add_option("--output", sc_output, "Output stream CSV (default stdout)");
  sc->add_option("--scorer", sc_scorer, "msp_u | margin | cade_ood")->required();
  sc->add_option("--embeddings", sc_embeddings, "Embedding CSV");
  sc->add_option("--hyperplane", sc_hyperplane, "Hyperplane file for margin");
  sc->add_option("--train-months", sc_train_months,
                 "Leading months used to fit CADE class stats");

  // rc-curve
  auto* rc = app.add_subcommand("rc-curve", "Risk-coverage curve and AURC");
  std::string rc_input, rc_output, rc_score, rc_svg;
  rc->add_option("--input", rc_input, "Stream file")->required();
  rc->add_option("--output", rc_output, "Output CSV (default stdout)");
  rc->add_option("--score", rc_score, "Score name")->required();
  rc->add_option("--svg", rc_svg, "Also render the curve as SVG");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Post-hoc rejection simulation");
  std::string sim_input, sim_output, sim_summary, sim_score, sim_method = "cutoff";
  int sim_rho = 0;
  std::size_t sim_window = 0;
  sim->add_option("--input", sim_input, "Stream file")->required();
  sim->add_option("--rho", sim_rho, "Monthly rejection quota")->required();
  sim->add_option("--method", sim_method, "cutoff | band")
      ->check(CLI::IsMember({"cutoff", "band"}));
  sim->add_option("--score", sim_score, "Score name")->required();
  sim->add_option("--window", sim_window,
                  "Rolling calibration window in months (0 = unbounded)");
  sim->add_option("--output", sim_output, "Per-month CSV (default stdout)");
  sim->add_option("--summary", sim_summary, "JSON summary path (default stdout)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Full pillar table for every "
                                            "(score, rho) combination");
  std::string ev_input, ev_method = "cutoff", ev_method_id = "default";
  std::vector<std::string> ev_scores;
  std::vector<int> ev_rhos;
  bool ev_no_svg = false;
  ev->add_option("--input", ev_input, "Stream file")->required();
  ev->add_option("--score", ev_scores, "Score name (repeatable)")->required();
  ev->add_option("--rho", ev_rhos, "Rejection quota (repeatable)")->required();
  ev->add_option("--method", ev_method, "cutoff | band")
      ->check(CLI::IsMember({"cutoff", "band"}));
  ev->add_option("--method-id", ev_method_id, "Identifier for the report rows");
  ev->add_flag("--no-svg", ev_no_svg, "Skip SVG rendering");

  // pareto
  auto* pa = app.add_subcommand("pareto", "Pareto front over aggregated pillars");
  std::string pa_input, pa_output;
  pa->add_option("--input", pa_input,
                 "CSV of method_id,dataset,f1,sigma_f1,aurc,tau")
      ->required();
  pa->add_option("--output", pa_output, "Output CSV (default stdout)");

  // sample
  auto* sa = app.add_subcommand("sample", "Label-budget sample selection");
  std::string sa_input, sa_output, sa_scheme, sa_score;
  std::size_t sa_budget = 0, sa_k = 6;
  int sa_month = -1;
  sa->add_option("--input", sa_input, "Stream file")->required();
  sa->add_option("--scheme", sa_scheme, "stratk | uncertainty-folds | top")
      ->required()
      ->check(CLI::IsMember({"stratk", "uncertainty-folds", "top"}));
  sa->add_option("--budget", sa_budget, "Selection budget")->required();
  sa->add_option("--k", sa_k, "Fold count for uncertainty-folds");
  sa->add_option("--score", sa_score, "Score name (top / uncertainty-folds)");
  sa->add_option("--month", sa_month,
                 "Month index for the top scheme (default: first month)");
  sa->add_option("--output", sa_output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  auto orientations = OrientationRegistry::with_defaults();
  apply_orientations(orientations, orient_specs);

  if (*sc) {
    auto stream = parse_stream_file(sc_input);
    if (sc_scorer == "msp_u") {
      for (auto& b : stream.batches)
        for (auto& r : b.records) {
          if (!r.prob_positive)
            throw InputError("sample '" + r.sample_id + "' lacks prob_positive");
          r.scores["msp_u"] = msp_uncertainty(*r.prob_positive);
        }
    } else if (sc_scorer == "margin") {
      if (sc_embeddings.empty() || sc_hyperplane.empty())
        throw InputError("margin scorer needs --embeddings and --hyperplane");
      auto table = parse_embeddings_file(sc_embeddings);
      auto h = load_hyperplane(sc_hyperplane);
      for (auto& b : stream.batches)
        for (auto& r : b.records)
          r.scores["margin"] = margin_confidence(h, embedding_of(table, r));
    } else if (sc_scorer == "cade_ood") {
      if (sc_embeddings.empty())
        throw InputError("cade_ood scorer needs --embeddings");
      auto table = parse_embeddings_file(sc_embeddings);
      std::vector<std::pair<std::string, int>> labeled;
      for (int m = 0; m < sc_train_months &&
                      m < static_cast<int>(stream.batches.size());
           ++m)
        for (const auto& r : stream.batches[m].records)
          labeled.emplace_back(r.embedding_id ? *r.embedding_id : r.sample_id,
                               r.y_true);
      auto stats = fit_cade_stats(table, labeled);
      for (auto& b : stream.batches)
        for (auto& r : b.records)
          r.scores["cade_ood"] = cade_ood_score(embedding_of(table, r), stats);
    } else {
      throw InputError("unknown scorer '" + sc_scorer + "'");
    }
    std::ofstream file;
    write_stream_csv(stream, open_output(file, sc_output));
    return 0;
  }

  if (*rc) {
    auto stream = parse_stream_file(rc_input);
    auto curve = rc_curve(uncertainty_correctness(stream, rc_score, orientations));
    std::ofstream file;
    auto& out = open_output(file, rc_output);
    out << "coverage,risk\n";
    for (const auto& [cov, risk] : curve.points)
      out << format_fixed(cov) << ',' << format_fixed(risk) << "\n";
    out << "aurc=" << format_fixed(curve.aurc) << "\n";
    if (!rc_svg.empty()) render_rc_svg(curve, rc_svg);
    return 0;
  }

  if (*sim) {
    auto stream = parse_stream_file(sim_input);
    RejectionConfig cfg;
    cfg.quota_rho = sim_rho;
    cfg.method = parse_method(sim_method);
    cfg.score_name = sim_score;
    if (sim_window > 0) cfg.window_months = sim_window;
    auto trace = run_posthoc_simulation(stream, cfg, orientations);

    std::ofstream file;
    auto& out = open_output(file, sim_output);
    out << "month,threshold_low,threshold_high,rejections,retained_f1,"
           "baseline_f1\n";
    for (const auto& m : trace.months) {
      out << m.month_index << ',' << format_fixed(m.threshold_low) << ',';
      if (m.threshold_high) out << format_fixed(*m.threshold_high);
      out << ',' << m.rejections << ',';
      if (m.retained_f1) out << format_fixed(*m.retained_f1);
      out << ',';
      if (m.baseline_f1) out << format_fixed(*m.baseline_f1);
      out << "\n";
    }

    nlohmann::ordered_json summary;
    summary["rho"] = sim_rho;
    summary["score"] = sim_score;
    summary["method"] = sim_method;
    bool any_pair = false;
    for (const auto& m : trace.months)
      any_pair |= (m.retained_f1.has_value() && m.baseline_f1.has_value());
    if (any_pair)
      summary["bf_star"] = format_fixed(benefit_fraction(trace));
    else
      summary["bf_star"] = nullptr;
    summary["delta_rej"] = format_fixed(rejection_bias(trace, sim_rho));
    summary["sigma_rej"] = format_fixed(rejection_volatility(trace));
    summary["aurc_f1_star"] = format_fixed(aurc_f1_star(stream, cfg, orientations));
    std::ofstream sfile;
    open_output(sfile, sim_summary) << summary.dump(2) << "\n";
    return 0;
  }

  if (*ev) {
    auto stream = parse_stream_file(ev_input);
    RunConfig cfg;
    cfg.stream_path = ev_input;
    cfg.method_id = ev_method_id;
    cfg.score_names = ev_scores;
    cfg.rho_list = ev_rhos;
    cfg.method = parse_method(ev_method);
    cfg.seed = seed;
    cfg.out_dir = out_dir;
    cfg.format = format;
    cfg.emit_svg = !ev_no_svg;
    auto reports = evaluate(cfg, stream, orientations);

    std::filesystem::create_directories(out_dir);
    auto path = [&](const std::string& name) {
      return (std::filesystem::path(out_dir) / name).string();
    };
    if (format == "json") {
      std::ofstream out(path("report.json"), std::ios::binary);
      out << render_table_json(reports);
    } else {
      std::ofstream out(path("report.csv"), std::ios::binary);
      out << render_table(reports);
    }
    if (cfg.emit_svg) {
      for (const auto& score : ev_scores) {
        auto curve =
            rc_curve(uncertainty_correctness(stream, score, orientations));
        render_rc_svg(curve, path("rc_" + score + ".svg"));
        for (int rho : ev_rhos) {
          RejectionConfig sim_cfg;
          sim_cfg.quota_rho = rho;
          sim_cfg.method = cfg.method;
          sim_cfg.score_name = score;
          auto trace = run_posthoc_simulation(stream, sim_cfg, orientations);
          render_temporal_svg(trace, rho,
                              path("temporal_" + score + "_rho" +
                                   std::to_string(rho) + ".svg"));
        }
      }
    }
    return 0;
  }

  if (*pa) {
    std::ifstream in(pa_input);
    if (!in) throw InputError("cannot open " + pa_input);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty pareto input");
    std::map<std::string, std::vector<std::array<double, 4>>> rows;
    std::map<std::string, std::set<std::string>> datasets;
    std::vector<std::string> order;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string method, dataset, cell;
      std::array<double, 4> pillars{};
      if (!std::getline(ss, method, ',') || !std::getline(ss, dataset, ','))
        throw ParseError(line_no, "expected method_id,dataset,...");
      for (auto& p : pillars) {
        if (!std::getline(ss, cell, ','))
          throw ParseError(line_no, "expected 6 columns");
        p = std::stod(cell);
      }
      if (!rows.count(method)) order.push_back(method);
      rows[method].push_back(pillars);
      datasets[method].insert(dataset);
    }
    const auto& ref = datasets.begin()->second;
    for (const auto& [m, ds] : datasets)
      if (ds != ref)
        throw InputError("method '" + m +
                         "' covers a different dataset set; cannot rank");
    std::vector<PillarVector> entries;
    for (const auto& m : order)
      entries.push_back(aggregate_pillars(rows[m], m));
    std::ofstream file;
    auto& out = open_output(file, pa_output);
    out << "method_id,non_dominated\n";
    for (const auto& [id, flag] : pareto_front(entries))
      out << id << ',' << (flag ? 1 : 0) << "\n";
    return 0;
  }

  if (*sa) {
    auto stream = parse_stream_file(sa_input);
    SelectionResult res;
    if (sa_scheme == "stratk") {
      std::vector<std::pair<std::string, int>> pool;
      for (const auto& b : stream.batches)
        for (const auto& r : b.records) pool.emplace_back(r.sample_id, r.y_true);
      res = stratk_sample(pool, sa_budget, seed);
    } else if (sa_scheme == "top") {
      if (sa_score.empty()) throw InputError("top scheme needs --score");
      const MonthBatch* batch = sa_month >= 0 ? stream.find_month(sa_month)
                                              : &stream.batches.front();
      if (!batch)
        throw InputError("no month " + std::to_string(sa_month) + " in stream");
      res = select_uncertain(*batch, sa_score, sa_budget, orientations);
    } else {
      if (sa_score.empty()) throw InputError("uncertainty-folds needs --score");
      std::vector<std::pair<std::string, double>> pool;
      for (const auto& b : stream.batches)
        for (const auto& r : b.records) {
          auto it = r.scores.find(sa_score);
          if (it == r.scores.end())
            throw InputError("sample '" + r.sample_id + "' lacks score '" +
                             sa_score + "'");
          pool.emplace_back(r.sample_id,
                            orientations.to_uncertainty(sa_score, it->second));
        }
      res = uncertainty_fold_sample(pool, sa_budget, sa_k,
                                    contiguous_folds(pool, sa_k));
    }
    std::ofstream file;
    auto& out = open_output(file, sa_output);
    for (const auto& id : res.selected_ids) out << id << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sceval::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
