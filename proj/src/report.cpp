// Copyright 2026 The EnQode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "enqode/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

namespace enqode {

namespace {

std::string num(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::string escape_xml(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double safe_ratio(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json row_json(const ReportRow &r) {
  nlohmann::json j = {{"sample_id", r.sample_id},
                      {"method", r.method},
                      {"depth", r.depth},
                      {"one_qubit", r.one_qubit},
                      {"two_qubit", r.two_qubit},
                      {"total_physical", r.total_physical},
                      {"ideal_fidelity", r.ideal_fidelity},
                      {"noisy_fidelity", r.noisy_fidelity}};
  if (r.cluster_id) j["cluster_id"] = *r.cluster_id;
  if (r.iterations) j["iterations"] = *r.iterations;
  return j;
}

nlohmann::json stats_json(const MethodStats &s, bool with_timing) {
  nlohmann::json j = {
      {"count", s.count},
      {"depth", {{"mean", s.mean_depth}, {"std", s.std_depth}}},
      {"one_qubit", {{"mean", s.mean_one_qubit}, {"std", s.std_one_qubit}}},
      {"two_qubit", {{"mean", s.mean_two_qubit}, {"std", s.std_two_qubit}}},
      {"total_physical", {{"mean", s.mean_total}, {"std", s.std_total}}},
      {"ideal_fidelity",
       {{"mean", s.mean_ideal_fidelity}, {"std", s.std_ideal_fidelity}}},
      {"noisy_fidelity",
       {{"mean", s.mean_noisy_fidelity}, {"std", s.std_noisy_fidelity}}}};
  if (with_timing) {
    j = {{"compile_seconds",
          {{"mean", s.mean_compile_seconds},
           {"std", s.std_compile_seconds}}}};
  }
  return j;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};

struct Frame {
  double width = 640, height = 400;
  double left = 70, right = 20, top = 40, bottom = 60;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

std::string svg_open(const Frame &f, const std::string &title,
                     const std::string &y_label) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
    << "\" height=\"" << f.height << "\" font-family=\"sans-serif\" "
    << "font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
    << "font-size=\"15\">" << escape_xml(title) << "</text>\n"
    << "<text transform=\"translate(16," << f.top + f.plot_h() / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(y_label)
    << "</text>\n"
    << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left
    << "\" y2=\"" << f.top + f.plot_h() << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << f.left << "\" y1=\"" << f.top + f.plot_h()
    << "\" x2=\"" << f.left + f.plot_w() << "\" y2=\"" << f.top + f.plot_h()
    << "\" stroke=\"black\"/>\n";
  return s.str();
}

// Maps data values to pixel rows, linear or log10.
struct YAxis {
  double lo, hi;
  bool log;
  const Frame *f;
  double to_px(double v) const {
    double t;
    if (log) {
      v = std::max(v, lo);
      t = (std::log10(v) - std::log10(lo)) /
          (std::log10(hi) - std::log10(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    t = std::clamp(t, 0.0, 1.0);
    return f->top + f->plot_h() * (1.0 - t);
  }
  std::string ticks() const {
    std::ostringstream s;
    std::vector<double> marks;
    if (log) {
      for (double d = std::pow(10.0, std::floor(std::log10(lo))); d <= hi * 1.0001;
           d *= 10.0) {
        if (d >= lo * 0.9999) marks.push_back(d);
      }
    } else {
      for (int i = 0; i <= 5; ++i) marks.push_back(lo + (hi - lo) * i / 5.0);
    }
    for (double m : marks) {
      const double y = to_px(m);
      s << "<line x1=\"" << f->left - 4 << "\" y1=\"" << y << "\" x2=\""
        << f->left + f->plot_w() << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << f->left - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << num(m, 4) << "</text>\n";
    }
    return s.str();
  }
};

}  // namespace

std::pair<double, double> mean_std(const std::vector<double> &values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

ComparisonReport run_comparison(const Dataset &data,
                                const TrainedLibrary &library,
                                const CompareSettings &settings) {
  const std::size_t dim = std::size_t{1} << library.config.num_qubits;
  if (data.dims != dim) {
    throw DataError("dataset has " + std::to_string(data.dims) +
                    " features but the library expects " +
                    std::to_string(dim));
  }
  settings.noise.validate();
  const AnsatzBundle bundle = build_ansatz(library.config);
  const Circuit enqode_physical =
      lower_to_basis(bundle.logical_circuit, settings.basis);
  const GateCounts enqode_counts = metrics(enqode_physical);

  ComparisonReport report;
  report.samples_attempted = data.rows;
  std::vector<std::optional<ReportRow>> enq(data.rows), base(data.rows);
  std::mutex failure_mutex;
  auto fail = [&](std::size_t id, const char *method, const std::string &msg) {
    std::lock_guard lock(failure_mutex);
    report.failures.push_back({id, method, msg});
  };

  parallel_for(data.rows, settings.jobs, [&](std::size_t i) {
    const auto x = data.row(i);
    const StateVector target(x.begin(), x.end());
    try {
      const EmbeddingResult e =
          embed_online(x, library, bundle, settings.optimizer, i);
      ReportRow r;
      r.sample_id = i;
      r.method = "enqode";
      r.depth = enqode_counts.depth_physical;
      r.one_qubit = enqode_counts.one_qubit_physical;
      r.two_qubit = enqode_counts.two_qubit_physical;
      r.total_physical = enqode_counts.total_physical;
      r.ideal_fidelity =
          state_fidelity(simulate_ideal(enqode_physical, e.theta), target);
      if (settings.noisy) {
        r.noisy_fidelity = state_fidelity(
            simulate_noisy(enqode_physical, e.theta, settings.noise), target);
      }
      r.compile_seconds = e.compile_time;
      r.cluster_id = e.cluster_id;
      r.iterations = e.iterations;
      enq[i] = r;
    } catch (const std::exception &ex) {
      fail(i, "enqode", ex.what());
    }
    try {
      const SynthesisOutput s = compile_baseline(x, settings.basis);
      const StateVector routed = routed_target(x, s.final_layout);
      ReportRow r;
      r.sample_id = i;
      r.method = "baseline";
      r.depth = s.metrics.depth_physical;
      r.one_qubit = s.metrics.one_qubit_physical;
      r.two_qubit = s.metrics.two_qubit_physical;
      r.total_physical = s.metrics.total_physical;
      r.ideal_fidelity =
          state_fidelity(simulate_ideal(s.physical_circuit), routed);
      if (settings.noisy) {
        r.noisy_fidelity = state_fidelity(
            simulate_noisy(s.physical_circuit, {}, settings.noise), routed);
      }
      r.compile_seconds = s.synth_time;
      base[i] = r;
    } catch (const std::exception &ex) {
      fail(i, "baseline", ex.what());
    }
  });

  for (std::size_t i = 0; i < data.rows; ++i) {
    if (base[i]) report.rows.push_back(*base[i]);
    if (enq[i]) report.rows.push_back(*enq[i]);
  }
  std::sort(report.failures.begin(), report.failures.end(),
            [](const SampleFailure &a, const SampleFailure &b) {
              return std::tie(a.sample_id, a.method) <
                     std::tie(b.sample_id, b.method);
            });
  return report;
}

MethodStats method_stats(const ComparisonReport &report,
                         const std::string &method) {
  std::vector<double> depth, one, two, total, ideal, noisy, secs;
  for (const ReportRow &r : report.rows) {
    if (r.method != method) continue;
    depth.push_back(static_cast<double>(r.depth));
    one.push_back(static_cast<double>(r.one_qubit));
    two.push_back(static_cast<double>(r.two_qubit));
    total.push_back(static_cast<double>(r.total_physical));
    ideal.push_back(r.ideal_fidelity);
    noisy.push_back(r.noisy_fidelity);
    secs.push_back(r.compile_seconds);
  }
  MethodStats s;
  s.count = depth.size();
  std::tie(s.mean_depth, s.std_depth) = mean_std(depth);
  std::tie(s.mean_one_qubit, s.std_one_qubit) = mean_std(one);
  std::tie(s.mean_two_qubit, s.std_two_qubit) = mean_std(two);
  std::tie(s.mean_total, s.std_total) = mean_std(total);
  std::tie(s.mean_ideal_fidelity, s.std_ideal_fidelity) = mean_std(ideal);
  std::tie(s.mean_noisy_fidelity, s.std_noisy_fidelity) = mean_std(noisy);
  std::tie(s.mean_compile_seconds, s.std_compile_seconds) = mean_std(secs);
  return s;
}

nlohmann::json report_to_json(const ComparisonReport &report,
                              const nlohmann::json &config_echo,
                              const std::string &timestamp) {
  const MethodStats e = method_stats(report, "enqode");
  const MethodStats b = method_stats(report, "baseline");

  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow &r : report.rows) rows.push_back(row_json(r));
  nlohmann::json failures = nlohmann::json::array();
  for (const SampleFailure &f : report.failures) {
    failures.push_back({{"sample_id", f.sample_id},
                        {"method", f.method},
                        {"message", f.message}});
  }
  nlohmann::json seconds = {{"enqode", nlohmann::json::array()},
                            {"baseline", nlohmann::json::array()}};
  for (const ReportRow &r : report.rows) {
    seconds[r.method].push_back(
        {{"sample_id", r.sample_id}, {"seconds", r.compile_seconds}});
  }

  return {
      {"schema_version", kReportSchemaVersion},
      {"config", config_echo},
      {"samples_attempted", report.samples_attempted},
      {"rows", std::move(rows)},
      {"failures", std::move(failures)},
      {"aggregates",
       {{"enqode", stats_json(e, false)},
        {"baseline", stats_json(b, false)},
        {"ratios",
         {{"depth_ratio", finite_or_null(safe_ratio(b.mean_depth, e.mean_depth))},
          {"gate_ratio", finite_or_null(safe_ratio(b.mean_total, e.mean_total))},
          {"one_qubit_ratio",
           finite_or_null(safe_ratio(b.mean_one_qubit, e.mean_one_qubit))},
          {"two_qubit_ratio",
           finite_or_null(safe_ratio(b.mean_two_qubit, e.mean_two_qubit))},
          {"fidelity_ratio_noisy",
           finite_or_null(
               safe_ratio(e.mean_noisy_fidelity, b.mean_noisy_fidelity))}}},
        {"ratio_definitions",
         {{"depth_ratio", "baseline mean depth / enqode mean depth"},
          {"gate_ratio", "baseline mean total_physical / enqode mean"},
          {"one_qubit_ratio", "baseline mean one_qubit / enqode mean"},
          {"two_qubit_ratio", "baseline mean two_qubit / enqode mean"},
          {"fidelity_ratio_noisy",
           "enqode mean noisy_fidelity / baseline mean noisy_fidelity"}}}}},
      {"metadata",
       {{"timestamp", timestamp},
        {"compile_seconds", std::move(seconds)},
        {"compile_time_stats",
         {{"enqode", stats_json(e, true)},
          {"baseline", stats_json(b, true)},
          {"std_ratio_baseline_over_enqode",
           finite_or_null(
               safe_ratio(b.std_compile_seconds, e.std_compile_seconds))}}},
        {"compile_time_scope",
         "enqode: warm-started optimisation only; baseline: synthesis, "
         "lowering and routing; I/O excluded"},
        {"reference_ratios",
         {{"depth", 28.0},
          {"total_gates", 12.0},
          {"one_qubit", 11.0},
          {"two_qubit", 12.0},
          {"noisy_fidelity", 14.0}}},
        {"reference_note",
         "published 8-qubit figures for context only; the baseline here "
         "applies no optimisation passes and uses its own decomposition"}}}};
}

std::string report_csv(const ComparisonReport &report) {
  std::ostringstream out;
  out << "sample_id,method,depth,one_qubit,two_qubit,total_physical,"
         "ideal_fidelity,noisy_fidelity,compile_seconds,cluster_id,"
         "iterations\n";
  for (const ReportRow &r : report.rows) {
    out << r.sample_id << ',' << r.method << ',' << r.depth << ','
        << r.one_qubit << ',' << r.two_qubit << ',' << r.total_physical << ','
        << num(r.ideal_fidelity, 17) << ',' << num(r.noisy_fidelity, 17) << ','
        << num(r.compile_seconds, 9) << ',';
    if (r.cluster_id) out << *r.cluster_id;
    out << ',';
    if (r.iterations) out << *r.iterations;
    out << '\n';
  }
  return out.str();
}

std::string svg_bar_chart(const std::string &title,
                          const std::vector<std::string> &categories,
                          const std::vector<BarSeries> &series,
                          const std::string &y_label, bool log_scale) {
  Frame f;
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const BarSeries &s : series) {
    for (std::size_t i = 0; i < s.means.size(); ++i) {
      const double sd = i < s.stds.size() ? s.stds[i] : 0.0;
      hi = std::max(hi, s.means[i] + sd);
      if (s.means[i] > 0.0) lo = std::min(lo, s.means[i]);
    }
  }
  if (!(hi > 0.0)) hi = 1.0;
  YAxis axis{0.0, hi * 1.1, log_scale, &f};
  if (log_scale) {
    if (!std::isfinite(lo)) lo = 1.0;
    axis.lo = std::pow(10.0, std::floor(std::log10(lo)));
    axis.hi = std::pow(10.0, std::ceil(std::log10(hi * 1.0001)));
    if (axis.hi <= axis.lo) axis.hi = axis.lo * 10.0;
  }

  std::ostringstream s;
  s << svg_open(f, title, y_label) << axis.ticks();
  const double group_w = f.plot_w() / std::max<std::size_t>(1, categories.size());
  const double bar_w = group_w * 0.8 / std::max<std::size_t>(1, series.size());
  const double base_y = f.top + f.plot_h();
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = f.left + group_w * static_cast<double>(c);
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (c >= series[k].means.size()) continue;
      const double mean = series[k].means[c];
      const double sd = c < series[k].stds.size() ? series[k].stds[c] : 0.0;
      const double x = gx + group_w * 0.1 + bar_w * static_cast<double>(k);
      const double y = axis.to_px(mean);
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w * 0.9
        << "\" height=\"" << std::max(0.0, base_y - y) << "\" fill=\""
        << kPalette[k % 4] << "\"><title>" << escape_xml(series[k].name)
        << ": " << num(mean) << "</title></rect>\n";
      if (sd > 0.0) {
        const double cx = x + bar_w * 0.45;
        s << "<line x1=\"" << cx << "\" y1=\"" << axis.to_px(mean + sd)
          << "\" x2=\"" << cx << "\" y2=\"" << axis.to_px(mean - sd)
          << "\" stroke=\"black\"/>\n";
      }
      s << "<text x=\"" << x + bar_w * 0.45 << "\" y=\"" << y - 4
        << "\" text-anchor=\"middle\" font-size=\"10\">" << num(mean, 3)
        << "</text>\n";
    }
    s << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << base_y + 18
      << "\" text-anchor=\"middle\">" << escape_xml(categories[c])
      << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double lx = f.left + 10 + 120 * static_cast<double>(k);
    const double ly = f.height - 18;
    s << "<rect x=\"" << lx << "\" y=\"" << ly - 10
      << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[k % 4]
      << "\"/><text x=\"" << lx + 16 << "\" y=\"" << ly << "\">"
      << escape_xml(series[k].name) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_box_plot(const std::string &title,
                         const std::vector<std::string> &groups,
                         const std::vector<std::vector<double>> &values,
                         const std::string &y_label) {
  Frame f;
  double hi = 0.0;
  for (const auto &v : values) {
    for (double x : v) hi = std::max(hi, x);
  }
  if (!(hi > 0.0)) hi = 1.0;
  YAxis axis{0.0, hi * 1.1, false, &f};
  std::ostringstream s;
  s << svg_open(f, title, y_label) << axis.ticks();
  const double group_w = f.plot_w() / std::max<std::size_t>(1, groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double cx = f.left + group_w * (static_cast<double>(g) + 0.5);
    const double half = group_w * 0.2;
    const auto &v = g < values.size() ? values[g] : std::vector<double>{};
    if (!v.empty()) {
      const double q0 = quantile(v, 0.0), q1 = quantile(v, 0.25),
                   q2 = quantile(v, 0.5), q3 = quantile(v, 0.75),
                   q4 = quantile(v, 1.0);
      s << "<line x1=\"" << cx << "\" y1=\"" << axis.to_px(q0) << "\" x2=\""
        << cx << "\" y2=\"" << axis.to_px(q4) << "\" stroke=\"black\"/>\n"
        << "<rect x=\"" << cx - half << "\" y=\"" << axis.to_px(q3)
        << "\" width=\"" << 2 * half << "\" height=\""
        << std::max(0.0, axis.to_px(q1) - axis.to_px(q3)) << "\" fill=\""
        << kPalette[g % 4] << "\" fill-opacity=\"0.6\" stroke=\"black\"/>\n"
        << "<line x1=\"" << cx - half << "\" y1=\"" << axis.to_px(q2)
        << "\" x2=\"" << cx + half << "\" y2=\"" << axis.to_px(q2)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    s << "<text x=\"" << cx << "\" y=\"" << f.top + f.plot_h() + 18
      << "\" text-anchor=\"middle\">" << escape_xml(groups[g]) << " (n="
      << v.size() << ")</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_report_svgs(const ComparisonReport &report,
                       const std::filesystem::path &dir) {
  const MethodStats e = method_stats(report, "enqode");
  const MethodStats b = method_stats(report, "baseline");
  auto write = [&dir](const char *name, const std::string &body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    out << body;
  };
  write("depth.svg",
        svg_bar_chart("Circuit depth (physical gates)", {"depth"},
                      {{"baseline", {b.mean_depth}, {b.std_depth}},
                       {"enqode", {e.mean_depth}, {e.std_depth}}},
                      "depth (log scale)", true));
  write("gates.svg",
        svg_bar_chart(
            "Physical gate counts", {"one-qubit", "two-qubit", "total"},
            {{"baseline",
              {b.mean_one_qubit, b.mean_two_qubit, b.mean_total},
              {b.std_one_qubit, b.std_two_qubit, b.std_total}},
             {"enqode",
              {e.mean_one_qubit, e.mean_two_qubit, e.mean_total},
              {e.std_one_qubit, e.std_two_qubit, e.std_total}}},
            "gates (log scale)", true));
  write("fidelity.svg",
        svg_bar_chart(
            "State fidelity", {"ideal", "noisy"},
            {{"baseline",
              {b.mean_ideal_fidelity, b.mean_noisy_fidelity},
              {b.std_ideal_fidelity, b.std_noisy_fidelity}},
             {"enqode",
              {e.mean_ideal_fidelity, e.mean_noisy_fidelity},
              {e.std_ideal_fidelity, e.std_noisy_fidelity}}},
            "fidelity", false));
  std::vector<double> bt, et;
  for (const ReportRow &r : report.rows) {
    (r.method == "baseline" ? bt : et).push_back(r.compile_seconds);
  }
  write("compile_time.svg",
        svg_box_plot("Compile time per sample", {"baseline", "enqode"},
                     {bt, et}, "seconds"));
}

}  // namespace enqode
