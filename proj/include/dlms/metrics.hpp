#pragma once

#include "dlms/signal.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dlms {

inline constexpr double kDbFloor = -200.0;

/// |(omega_0 - omega_prev)^H x|^2, the noise-free a-priori error power.
double apriori_error(const CVector& truth, const CVector& omega_prev, const CVector& x);

/// ||omega_0 - omega||^2.
double squared_deviation(const CVector& truth, const CVector& omega);

/// 10 log10(power), floored at kDbFloor.
double to_db(double power);

/// Samples of one (algorithm, run): iterations x nodes, row-major.
struct MetricsRecord {
  std::string algorithm;
  std::size_t run = 0;
  std::size_t iterations = 0;
  std::size_t nodes = 0;
  std::vector<double> apriori_error_sq;
  std::vector<double> msd;

  MetricsRecord() = default;
  MetricsRecord(std::string algorithm, std::size_t run, std::size_t iterations, std::size_t nodes)
      : algorithm(std::move(algorithm)),
        run(run),
        iterations(iterations),
        nodes(nodes),
        apriori_error_sq(iterations * nodes, 0.0),
        msd(iterations * nodes, 0.0) {}

  void set(std::size_t i, std::size_t k, double emse_sample, double msd_sample) {
    apriori_error_sq[i * nodes + k] = emse_sample;
    msd[i * nodes + k] = msd_sample;
  }
};

struct LearningCurve {
  std::string algorithm;
  std::vector<double> emse_db;
  std::vector<double> msd_db;

  std::size_t size() const noexcept { return emse_db.size(); }
};

/// Folds records of one algorithm into network-average sums. Records must
/// be added in a fixed order for bit-reproducible output.
class CurveAccumulator {
 public:
  CurveAccumulator(std::string algorithm, std::size_t iterations, std::size_t nodes);

  void add(const MetricsRecord& record);
  std::size_t runs() const noexcept { return runs_; }
  LearningCurve finish() const;

 private:
  std::string algorithm_;
  std::size_t iterations_;
  std::size_t nodes_;
  std::size_t runs_ = 0;
  std::vector<double> emse_sum_;
  std::vector<double> msd_sum_;
};

/// Mean over runs and nodes at each iteration, in dB.
LearningCurve aggregate(std::span<const MetricsRecord> records);

/// Mean of the last `tail_fraction` of a curve (at least one point).
double tail_mean(std::span<const double> curve_db, double tail_fraction = 0.2);

/// Steady-state gain of curve b over curve a: mean(a) - mean(b) over the
/// last `tail_fraction` of the EMSE curve, in dB. Positive means b is lower.
double compare_curves(const LearningCurve& a, const LearningCurve& b, double tail_fraction = 0.2);
double compare_curves(std::span<const double> a_db, std::span<const double> b_db,
                      double tail_fraction = 0.2);

/// Header `iteration,algorithm,emse_db,msd_db`; one row per (iteration,
/// algorithm), iterations 0-based, 17 significant digits, LF endings.
void write_curves_csv(std::ostream& out, const std::vector<LearningCurve>& curves);
std::vector<LearningCurve> read_curves_csv(std::istream& in);

/// %.17g formatting.
std::string format_double(double value);

}  // namespace dlms
