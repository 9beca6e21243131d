#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddp::cli {

/// Observations grouped by series t = 1..T (stored zero-based). A series may be empty.
struct Dataset {
  std::vector<std::vector<double>> series;

  int T() const { return static_cast<int>(series.size()); }
  std::vector<int> sizes() const;
  std::vector<double> pooled() const;
  double min() const;
  double max() const;
};

/// Long format: header then `t,value` rows. Wide format: one row of
/// comma-separated values per series, ragged rows allowed, blank row = empty series.
/// Throws DataError naming the offending line.
Dataset ingest(std::istream& in, const std::string& format);
Dataset ingest_file(const std::string& path, const std::string& format);

}  // namespace ddp::cli
