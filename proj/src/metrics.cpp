#include "dlms/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dlms {

double apriori_error(const CVector& truth, const CVector& omega_prev, const CVector& x) {
  if (truth.size() != omega_prev.size() || truth.size() != x.size()) {
    throw std::invalid_argument("apriori_error: dimension mismatch");
  }
  return std::norm((truth - omega_prev).dot(x));
}

double squared_deviation(const CVector& truth, const CVector& omega) {
  if (truth.size() != omega.size()) throw std::invalid_argument("squared_deviation: dimension mismatch");
  return (truth - omega).squaredNorm();
}

double to_db(double power) {
  if (!(power > 0.0)) return std::isnan(power) ? power : kDbFloor;
  return std::max(kDbFloor, 10.0 * std::log10(power));
}

CurveAccumulator::CurveAccumulator(std::string algorithm, std::size_t iterations,
                                   std::size_t nodes)
    : algorithm_(std::move(algorithm)),
      iterations_(iterations),
      nodes_(nodes),
      emse_sum_(iterations, 0.0),
      msd_sum_(iterations, 0.0) {}

void CurveAccumulator::add(const MetricsRecord& record) {
  if (record.algorithm != algorithm_) {
    throw std::invalid_argument("record for '" + record.algorithm + "' added to '" + algorithm_ +
                                "' curve");
  }
  if (record.iterations != iterations_ || record.nodes != nodes_ ||
      record.apriori_error_sq.size() != iterations_ * nodes_ ||
      record.msd.size() != iterations_ * nodes_) {
    throw std::invalid_argument("record of run " + std::to_string(record.run) +
                                " has missing cells");
  }
  for (std::size_t i = 0; i < iterations_; ++i) {
    double emse = 0.0;
    double msd = 0.0;
    for (std::size_t k = 0; k < nodes_; ++k) {
      emse += record.apriori_error_sq[i * nodes_ + k];
      msd += record.msd[i * nodes_ + k];
    }
    emse_sum_[i] += emse;
    msd_sum_[i] += msd;
  }
  ++runs_;
}

LearningCurve CurveAccumulator::finish() const {
  if (runs_ == 0) throw std::logic_error("no records accumulated for '" + algorithm_ + "'");
  const double count = static_cast<double>(runs_ * nodes_);
  LearningCurve curve{algorithm_, std::vector<double>(iterations_), std::vector<double>(iterations_)};
  for (std::size_t i = 0; i < iterations_; ++i) {
    curve.emse_db[i] = to_db(emse_sum_[i] / count);
    curve.msd_db[i] = to_db(msd_sum_[i] / count);
  }
  return curve;
}

LearningCurve aggregate(std::span<const MetricsRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  CurveAccumulator acc(records.front().algorithm, records.front().iterations,
                       records.front().nodes);
  for (const auto& r : records) acc.add(r);
  return acc.finish();
}

double tail_mean(std::span<const double> curve_db, double tail_fraction) {
  if (curve_db.empty()) throw std::invalid_argument("tail_mean: empty curve");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail fraction must lie in (0, 1]");
  }
  const auto n = curve_db.size();
  auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n) - 1e-9));
  tail = std::clamp<std::size_t>(tail, 1, n);
  double sum = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) sum += curve_db[i];
  return sum / static_cast<double>(tail);
}

double compare_curves(std::span<const double> a_db, std::span<const double> b_db,
                      double tail_fraction) {
  if (a_db.size() != b_db.size()) throw std::invalid_argument("compare_curves: length mismatch");
  return tail_mean(a_db, tail_fraction) - tail_mean(b_db, tail_fraction);
}

double compare_curves(const LearningCurve& a, const LearningCurve& b, double tail_fraction) {
  return compare_curves(a.emse_db, b.emse_db, tail_fraction);
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_curves_csv(std::ostream& out, const std::vector<LearningCurve>& curves) {
  out << "iteration,algorithm,emse_db,msd_db\n";
  if (curves.empty()) return;
  const std::size_t n = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != n || c.msd_db.size() != n) {
      throw std::invalid_argument("write_curves_csv: curves differ in length");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : curves) {
      out << i << ',' << c.algorithm << ',' << format_double(c.emse_db[i]) << ','
          << format_double(c.msd_db[i]) << '\n';
    }
  }
}

std::vector<LearningCurve> read_curves_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "iteration,algorithm,emse_db,msd_db") {
    throw std::runtime_error("learning-curve CSV: missing or unexpected header");
  }
  std::vector<LearningCurve> curves;
  std::map<std::string, std::size_t> index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string iteration, algorithm, emse, msd;
    if (!std::getline(fields, iteration, ',') || !std::getline(fields, algorithm, ',') ||
        !std::getline(fields, emse, ',') || !std::getline(fields, msd)) {
      throw std::runtime_error("learning-curve CSV line " + std::to_string(line_no) +
                               ": expected 4 fields");
    }
    auto [it, inserted] = index.try_emplace(algorithm, curves.size());
    if (inserted) curves.push_back(LearningCurve{algorithm, {}, {}});
    LearningCurve& c = curves[it->second];
    try {
      if (std::stoull(iteration) != c.size()) {
        throw std::runtime_error("learning-curve CSV line " + std::to_string(line_no) +
                                 ": iterations out of order");
      }
      c.emse_db.push_back(std::stod(emse));
      c.msd_db.push_back(std::stod(msd));
    } catch (const std::logic_error&) {
      throw std::runtime_error("learning-curve CSV line " + std::to_string(line_no) +
                               ": malformed number");
    }
  }
  return curves;
}

}  // namespace dlms
