#include "sceval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sceval {

namespace {

std::optional<double> series_mean(const MonthlySeries& s) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : s.values)
    if (v) {
      sum += *v;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::string cell(const std::optional<double>& v) {
  return v ? format_fixed(*v) : std::string{};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

}  // namespace

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<std::pair<double, bool>> uncertainty_correctness(
    const TemporalStream& stream, const std::string& score_name,
    const OrientationRegistry& orientations) {
  std::vector<std::pair<double, bool>> out;
  out.reserve(stream.total_records());
  for (const auto& b : stream.batches)
    for (const auto& r : b.records) {
      auto it = r.scores.find(score_name);
      if (it == r.scores.end())
        throw InputError("MissingScore: sample '" + r.sample_id +
                         "' lacks score '" + score_name + "'");
      out.emplace_back(orientations.to_uncertainty(score_name, it->second),
                       r.y_pred == r.y_true);
    }
  return out;
}

MonthlySeries baseline_f1_series(const TemporalStream& stream) {
  MonthlySeries s;
  s.label = "baseline_f1";
  for (const auto& b : stream.batches)
    s.values.push_back(monthly_f1(b, {}));
  return s;
}

MonthlySeries baseline_fnr_series(const TemporalStream& stream) {
  MonthlySeries s;
  s.label = "baseline_fnr";
  for (const auto& b : stream.batches) {
    std::size_t tp = 0, fn = 0;
    for (const auto& r : b.records) {
      if (r.y_true == 1 && r.y_pred == 1) ++tp;
      else if (r.y_true == 1 && r.y_pred == 0) ++fn;
    }
    if (tp + fn == 0)
      s.values.push_back(std::nullopt);
    else
      s.values.push_back(static_cast<double>(fn) / static_cast<double>(tp + fn));
  }
  return s;
}

MetricsReport evaluate_one(const TemporalStream& stream, const std::string& score_name,
                           int rho, const RunConfig& cfg,
                           const OrientationRegistry& orientations) {
  MetricsReport rep;
  rep.method_id = cfg.method_id;
  rep.dataset_name = stream.dataset_name;
  rep.score_name = score_name;
  rep.rho = rho;

  // Baseline pillar.
  auto f1s = baseline_f1_series(stream);
  auto fnrs = baseline_fnr_series(stream);
  if (auto m = series_mean(f1s)) rep.f1_mean = 100.0 * *m;
  if (auto m = series_mean(fnrs)) rep.fnr_mean = 100.0 * *m;
  {
    std::vector<std::pair<double, int>> scored;
    for (const auto& b : stream.batches)
      for (const auto& r : b.records)
        if (r.prob_positive) scored.emplace_back(*r.prob_positive, r.y_true);
    bool has_pos = false, has_neg = false;
    for (const auto& [s, y] : scored) (y ? has_pos : has_neg) = true;
    if (!scored.empty() && has_pos && has_neg) rep.auroc = auroc(scored);
  }

  // Reliability pillar.
  auto curve = rc_curve(uncertainty_correctness(stream, score_name, orientations));
  rep.aurc = curve.aurc;
  rep.aurc_x100 = 100.0 * curve.aurc;

  RejectionConfig sim_cfg;
  sim_cfg.quota_rho = rho;
  sim_cfg.method = cfg.method;
  sim_cfg.score_name = score_name;
  sim_cfg.coverage_grid = cfg.coverage_grid;
  sim_cfg.window_months = cfg.window_months;
  rep.aurc_f1_star = aurc_f1_star(stream, sim_cfg, orientations);

  // Stability pillar.
  bool any_defined = false;
  for (const auto& v : f1s.values) any_defined |= v.has_value();
  if (any_defined) rep.sigma_f1 = 100.0 * f1_volatility(f1s);
  std::size_t defined = 0;
  for (const auto& v : f1s.values) defined += v.has_value();
  if (defined >= 2) rep.tau = mann_kendall_tau(f1s);

  auto trace = run_posthoc_simulation(stream, sim_cfg, orientations);
  bool any_pair = false;
  for (const auto& m : trace.months)
    any_pair |= (m.retained_f1.has_value() && m.baseline_f1.has_value());
  if (any_pair) rep.bf_star = benefit_fraction(trace);
  rep.delta_rej = rejection_bias(trace, rho);
  rep.sigma_rej = rejection_volatility(trace);
  return rep;
}

std::vector<MetricsReport> evaluate(const RunConfig& cfg,
                                    const TemporalStream& stream,
                                    const OrientationRegistry& orientations) {
  if (cfg.score_names.empty()) throw InputError("no score names configured");
  if (cfg.rho_list.empty()) throw InputError("no rho values configured");
  std::vector<MetricsReport> reports;
  for (const auto& score : cfg.score_names)
    for (int rho : cfg.rho_list) {
      try {
        reports.push_back(evaluate_one(stream, score, rho, cfg, orientations));
      } catch (const InputError& e) {
        throw InputError("evaluate failed for stream '" + stream.dataset_name +
                         "', score '" + score + "', rho " + std::to_string(rho) +
                         ": " + e.what());
      }
    }
  return reports;
}

std::string render_table(const std::vector<MetricsReport>& reports) {
  std::ostringstream out;
  out << "method_id,dataset,score,rho,f1_mean,fnr_mean,auroc,"
         "aurc,aurc_x100,aurc_f1_star,sigma_f1,tau,bf_star,delta_rej,sigma_rej,"
         "pareto\n";
  for (const auto& r : reports) {
    out << r.method_id << ',' << r.dataset_name << ',' << r.score_name << ','
        << r.rho << ',' << cell(r.f1_mean) << ',' << cell(r.fnr_mean) << ','
        << cell(r.auroc) << ',' << format_fixed(r.aurc) << ','
        << format_fixed(r.aurc_x100) << ',' << format_fixed(r.aurc_f1_star) << ','
        << cell(r.sigma_f1) << ',' << cell(r.tau) << ',' << cell(r.bf_star) << ','
        << format_fixed(r.delta_rej) << ',' << format_fixed(r.sigma_rej) << ',';
    if (r.pareto_flag) out << (*r.pareto_flag ? "1" : "0");
    out << "\n";
  }
  return out.str();
}

std::string render_table_json(const std::vector<MetricsReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto put = [](nlohmann::ordered_json& j, const char* key,
                const std::optional<double>& v) {
    if (v)
      j[key] = format_fixed(*v);
    else
      j[key] = nullptr;
  };
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["method_id"] = r.method_id;
    j["dataset"] = r.dataset_name;
    j["score"] = r.score_name;
    j["rho"] = r.rho;
    put(j, "f1_mean", r.f1_mean);
    put(j, "fnr_mean", r.fnr_mean);
    put(j, "auroc", r.auroc);
    j["aurc"] = format_fixed(r.aurc);
    j["aurc_x100"] = format_fixed(r.aurc_x100);
    j["aurc_f1_star"] = format_fixed(r.aurc_f1_star);
    put(j, "sigma_f1", r.sigma_f1);
    put(j, "tau", r.tau);
    put(j, "bf_star", r.bf_star);
    j["delta_rej"] = format_fixed(r.delta_rej);
    j["sigma_rej"] = format_fixed(r.sigma_rej);
    if (r.pareto_flag)
      j["pareto"] = *r.pareto_flag;
    else
      j["pareto"] = nullptr;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

namespace {

// Plot geometry shared by both renderers.
constexpr double kPlotW = 480.0, kPlotH = 300.0, kMarginL = 60.0, kMarginT = 40.0;

std::string svg_header(double width, double height) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
     << "\">\n";
  return os.str();
}

void panel_frame(std::ostringstream& os, double top, const std::string& x_label,
                 const std::string& y_label) {
  os << "<rect x=\"" << kMarginL << "\" y=\"" << top << "\" width=\"" << kPlotW
     << "\" height=\"" << kPlotH
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << kMarginL + kPlotW / 2 << "\" y=\"" << top + kPlotH + 35
     << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
  os << "<text x=\"" << kMarginL - 40 << "\" y=\"" << top + kPlotH / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
     << kMarginL - 40 << " " << top + kPlotH / 2 << ")\">" << y_label
     << "</text>\n";
}

std::string polyline(const std::vector<std::pair<double, double>>& pts,
                     const std::string& color) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    os << format_fixed(pts[i].first) << ',' << format_fixed(pts[i].second);
  }
  os << "\"/>\n";
  return os.str();
}

}  // namespace

void render_rc_svg(const RCCurve& curve, const std::string& path) {
  std::ostringstream os;
  os << svg_header(600, 400);
  panel_frame(os, kMarginT, "coverage", "risk");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.points.size());
  for (const auto& [cov, risk] : curve.points)
    pts.emplace_back(kMarginL + cov * kPlotW, kMarginT + (1.0 - risk) * kPlotH);
  os << polyline(pts, "#1f77b4");
  os << "</svg>\n";
  write_file(path, os.str());
}

void render_temporal_svg(const SimulationTrace& trace, int rho,
                         const std::string& path) {
  if (trace.months.empty()) throw InputError("empty trace");
  const double panel_gap = 80.0;
  const double height = kMarginT + 3 * kPlotH + 3 * panel_gap;
  std::ostringstream os;
  os << svg_header(600, height);

  const std::size_t n = trace.months.size();
  auto x_of = [&](std::size_t i) {
    return n == 1 ? kMarginL + kPlotW / 2
                  : kMarginL + kPlotW * static_cast<double>(i) /
                                   static_cast<double>(n - 1);
  };

  // Panel 1: retained F1 in [0,1]; undefined months break the line.
  double top = kMarginT;
  panel_frame(os, top, "month", "post-rejection F1");
  std::vector<std::pair<double, double>> seg;
  auto flush = [&]() {
    if (seg.size() >= 1) os << polyline(seg, "#2ca02c");
    seg.clear();
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (trace.months[i].retained_f1)
      seg.emplace_back(x_of(i), top + (1.0 - *trace.months[i].retained_f1) * kPlotH);
    else
      flush();
  }
  flush();

  // Panel 2: realized rejections against the quota line.
  top += kPlotH + panel_gap;
  panel_frame(os, top, "month", "rejections");
  double max_rej = static_cast<double>(rho);
  for (const auto& m : trace.months)
    max_rej = std::max(max_rej, static_cast<double>(m.rejections));
  if (max_rej == 0.0) max_rej = 1.0;
  std::vector<std::pair<double, double>> rej_pts;
  for (std::size_t i = 0; i < n; ++i)
    rej_pts.emplace_back(
        x_of(i), top + (1.0 - static_cast<double>(trace.months[i].rejections) /
                                  max_rej) *
                           kPlotH);
  double quota_y = top + (1.0 - static_cast<double>(rho) / max_rej) * kPlotH;
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << format_fixed(quota_y)
     << "\" x2=\"" << kMarginL + kPlotW << "\" y2=\"" << format_fixed(quota_y)
     << "\" stroke=\"#7f7f7f\" stroke-dasharray=\"4 3\"/>\n";
  os << polyline(rej_pts, "#d62728");

  // Panel 3: delta F1 (retained - baseline), centered at zero.
  top += kPlotH + panel_gap;
  panel_frame(os, top, "month", "delta F1");
  double zero_y = top + kPlotH / 2;
  os << "<line x1=\"" << kMarginL << "\" y1=\"" << format_fixed(zero_y)
     << "\" x2=\"" << kMarginL + kPlotW << "\" y2=\"" << format_fixed(zero_y)
     << "\" stroke=\"#7f7f7f\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = trace.months[i];
    if (m.retained_f1 && m.baseline_f1)
      seg.emplace_back(x_of(i),
                       zero_y - (*m.retained_f1 - *m.baseline_f1) * kPlotH / 2);
    else
      flush();
  }
  flush();

  os << "</svg>\n";
  write_file(path, os.str());
}

}  // namespace sceval
