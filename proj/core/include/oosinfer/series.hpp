#pragma once

#include <string>
#include <vector>

namespace oosinfer {

enum class Transform { None, Increments, LogReturns };

Transform transform_from_name(const std::string& name);
std::string to_string(Transform t);

/// Provenance carried along with an ingested series. The date column is
/// never used in computations, only recorded here.
struct SeriesMeta {
  std::string source_path;
  std::string column;
  Transform transform = Transform::None;
  std::string date_column;
  std::string first_date;
  std::string last_date;
  std::vector<std::string> warnings;
};

/// Ordered univariate series. Immutable after construction; construction
/// rejects non-finite values and series shorter than 2.
class Series {
 public:
  Series(std::vector<double> values, std::string name = "",
         std::string frequency = "", SeriesMeta meta = {});

  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t t) const { return values_[t]; }
  int size() const { return static_cast<int>(values_.size()); }
  const std::string& name() const { return name_; }
  const std::string& frequency() const { return frequency_; }
  const SeriesMeta& meta() const { return meta_; }

 private:
  std::vector<double> values_;
  std::string name_;
  std::string frequency_;
  SeriesMeta meta_;
};

/// In-sample/out-of-sample partition under the fixed forecasting scheme:
/// estimation uses observations 1..R, evaluation uses R+1..T.
struct SplitPlan {
  int R = 0;
  int P = 0;
  double pi = 0.0;  // P/R, exact

  int T() const { return R + P; }
};

/// Split by target out/in ratio. R = round(T/(1+pi)) with ties rounded
/// down; P = T - R.
SplitPlan split_by_ratio(int T, double pi);

/// Split by explicit in-sample size.
SplitPlan split_by_insample(int T, int R);

inline SplitPlan split_by_ratio(const Series& s, double pi) {
  return split_by_ratio(s.size(), pi);
}
inline SplitPlan split_by_insample(const Series& s, int R) {
  return split_by_insample(s.size(), R);
}

/// Read one numeric column from a comma-separated file (first row header)
/// and apply the requested transform. `column` selects by header name, or
/// by 0-based index if it is all digits. Differencing transforms shorten
/// the series by one. A constant transformed series is recorded as a
/// degenerate-series warning in the metadata, not an error.
Series ingest_csv(const std::string& path, const std::string& column,
                  Transform transform);

}  // namespace oosinfer
