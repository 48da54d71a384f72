// SPDX-License-Identifier: Apache-2.0
//
// Binary classification metrics. Class 1 is the positive class. Ratios whose
// denominator is zero are reported as 0.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "relaylearn/errors.hpp"
#include "relaylearn/format.hpp"

namespace relaylearn::metrics {

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw DataError("confusion: " + std::to_string(preds.size()) + " predictions vs " +
                    std::to_string(labels.size()) + " labels");
  }
  if (preds.empty()) throw DataError("confusion: nothing to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] == 1;
    const bool t = labels[i] == 1;
    if (p && t) ++cm.tp;
    else if (p) ++cm.fp;
    else if (t) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace detail {
inline double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace detail

inline double precision(const ConfusionMatrix& cm) { return detail::ratio(cm.tp, cm.tp + cm.fp); }
inline double recall(const ConfusionMatrix& cm) { return detail::ratio(cm.tp, cm.tp + cm.fn); }
inline double accuracy(const ConfusionMatrix& cm) {
  return detail::ratio(cm.tp + cm.tn, cm.total());
}

inline double f1_score(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }
inline double f1(const ConfusionMatrix& cm) { return f1_score(precision(cm), recall(cm)); }

// ---------------------------------------------------------------------------
// Curves

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

namespace detail {

struct Sweep {
  std::vector<std::int64_t> tp;  // cumulative, one entry per distinct score
  std::vector<std::int64_t> fp;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;
};

// Walks scores from high to low; samples sharing a score enter together.
inline Sweep sweep(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("curve: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  Sweep s;
  std::int64_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 1) ++tp;
    else ++fp;
    const bool group_ends = k + 1 == order.size() || scores[order[k + 1]] != scores[order[k]];
    if (group_ends) {
      s.tp.push_back(tp);
      s.fp.push_back(fp);
    }
  }
  s.positives = tp;
  s.negatives = fp;
  return s;
}

}  // namespace detail

// (FPR, TPR) from (0, 0) through one point per distinct score, ending at (1, 1).
inline std::vector<CurvePoint> roc_curve(std::span<const double> scores,
                                         std::span<const int> labels) {
  const auto s = detail::sweep(scores, labels);
  if (s.positives == 0 || s.negatives == 0) {
    throw DataError("roc_curve: labels must contain both classes");
  }
  std::vector<CurvePoint> pts{{0.0, 0.0}};
  for (std::size_t g = 0; g < s.tp.size(); ++g) {
    pts.push_back({detail::ratio(s.fp[g], s.negatives), detail::ratio(s.tp[g], s.positives)});
  }
  if (!(pts.back() == CurvePoint{1.0, 1.0})) pts.push_back({1.0, 1.0});
  return pts;
}

// Trapezoid rule over the points in order.
inline double auc(std::span<const CurvePoint> pts) {
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].x - pts[i - 1].x) * (pts[i].y + pts[i - 1].y) / 2.0;
  }
  return area;
}

inline double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const auto pts = roc_curve(scores, labels);
  return auc(pts);
}

// (recall, precision) after each distinct score, highest score first.
inline std::vector<CurvePoint> pr_curve(std::span<const double> scores,
                                        std::span<const int> labels) {
  const auto s = detail::sweep(scores, labels);
  if (s.positives == 0) throw DataError("pr_curve: labels contain no positives");
  std::vector<CurvePoint> pts;
  for (std::size_t g = 0; g < s.tp.size(); ++g) {
    pts.push_back({detail::ratio(s.tp[g], s.positives), detail::ratio(s.tp[g], s.tp[g] + s.fp[g])});
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Reports

struct EvalReport {
  std::string model_name;
  ConfusionMatrix confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double roc_auc = 0.0;
  std::vector<CurvePoint> roc_points;
  std::vector<CurvePoint> pr_points;
};

inline EvalReport report(std::string model_name, std::span<const double> scores,
                         std::span<const int> preds, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("report: scores and labels differ in length");
  EvalReport r;
  r.model_name = std::move(model_name);
  r.confusion = confusion(preds, labels);
  r.precision = precision(r.confusion);
  r.recall = recall(r.confusion);
  r.f1 = f1(r.confusion);
  r.accuracy = accuracy(r.confusion);
  r.roc_points = roc_curve(scores, labels);
  r.roc_auc = auc(r.roc_points);
  r.pr_points = pr_curve(scores, labels);
  return r;
}

// Accuracy descending, then ROC AUC descending, then name ascending.
inline std::vector<EvalReport> compare(std::vector<EvalReport> reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const EvalReport& a, const EvalReport& b) {
    return std::make_tuple(-a.accuracy, -a.roc_auc, a.model_name) <
           std::make_tuple(-b.accuracy, -b.roc_auc, b.model_name);
  });
  return reports;
}

inline void write_table_csv(std::span<const EvalReport> reports, std::ostream& os) {
  os << "model,precision,recall,f1,accuracy,roc_auc\n";
  for (const auto& r : reports) {
    os << r.model_name << ',' << text::number(r.precision) << ',' << text::number(r.recall) << ','
       << text::number(r.f1) << ',' << text::number(r.accuracy) << ','
       << text::number(r.roc_auc) << '\n';
  }
}

inline void write_curve_csv(std::span<const CurvePoint> pts, std::string_view x_name,
                            std::string_view y_name, std::ostream& os) {
  os << x_name << ',' << y_name << '\n';
  for (const auto& p : pts) os << text::number(p.x) << ',' << text::number(p.y) << '\n';
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  auto curve = [](const std::vector<CurvePoint>& pts) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y});
    return arr;
  };
  return {{"model", r.model_name},
          {"confusion",
           {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn},
            {"fn", r.confusion.fn}}},
          {"n", r.confusion.total()},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"accuracy", r.accuracy},
          {"roc_auc", r.roc_auc},
          {"roc_points", curve(r.roc_points)},
          {"pr_points", curve(r.pr_points)}};
}

}  // namespace relaylearn::metrics
