#pragma once
#include <string>
#include <vector>

#include "greendyn/greens.hpp"
#include "greendyn/indeterminacy.hpp"
#include "greendyn/map.hpp"
#include "greendyn/regularity.hpp"

namespace greendyn {

// Shortest round-trip decimal for a double ("nan"/"inf" spelled literally).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV with a header row; every cell already formatted.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

// Heatmap as row-major x,y,value CSV ("nan" for poles).
void write_heatmap_csv(const std::string& path, const GridSpec& spec,
                       const std::vector<double>& values);

// 16-bit big-endian P5 with the affine rescale recorded in a sidecar text
// file (min, max, NaN count); NaN pixels render as 0.
void write_heatmap_pgm(const std::string& path, const std::string& sidecar_path, int nx, int ny,
                       const std::vector<double>& values);

void write_orbit_csv(const std::string& path, const OrbitTable& table);
void write_recurrence_csv(const std::string& path, const RecurrenceSum& sum);
void write_pairs_csv(const std::string& path, const PairSampleSet& set);

// Map-definition JSON.  Exact coefficients serialize componentwise as
// two-integer arrays [p,q] meaning p/q (re and im separately); float
// coefficients as shortest round-trip doubles.  A file either carries
// explicit components or names a scenario with params.
struct MapFile {
  bool exact = false;
  FloatMap fmap;
  ExactMap emap;          // valid when exact
  bool has_inverse = false;
  FloatMap finv;
  ExactMap einv;
  std::string scenario;   // nonempty when the file delegates to a scenario
  std::string params;
};

std::string map_to_json(const MapFile& m);
MapFile map_from_json(const std::string& text);

}  // namespace greendyn
