#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastesc/entire_function.hpp"
#include "fastesc/escape.hpp"
#include "fastesc/growth.hpp"

namespace fastesc {

class RasterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxResolution = 16384;

struct BBox {
  double center_re = 0.0;
  double center_im = 0.0;
  double half_width = 1.0;
  double half_height = 1.0;
};

struct GridOptions {
  int width = 512;
  int height = 512;
  int depth = 12;
  int L_min = kDefaultLevelMin;
  int L_max = kDefaultLevelMax;
  bool supersample = false;  // max level over a 2x2 sub-lattice per cell
  int threads = 0;           // 0: hardware concurrency
};

struct GridCell {
  std::optional<int> level;
  bool indeterminate = false;
};

/// Cell (i, j) has centre (cx + (i - W/2) dx, cy + (H/2 - j) dy) with integer
/// division, so the bbox centre is itself a cell centre; row 0 is the top.
struct LevelGrid {
  BBox bbox;
  int width = 0;
  int height = 0;
  int depth = 0;
  int L_min = 0;
  int L_max = 0;
  double R = 0.0;
  std::string function;
  std::vector<GridCell> cells;

  double dx() const { return 2.0 * bbox.half_width / width; }
  double dy() const { return 2.0 * bbox.half_height / height; }
  Complex center(int i, int j) const;
  const GridCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i]; }
};

LevelGrid classify_grid(const EntireFunction& f, const ThresholdLadder& ladder, const BBox& bbox,
                        const GridOptions& options);

struct HoleMask {
  int width = 0;
  int height = 0;
  int level = 0;
  std::vector<std::uint8_t> mask;  // 1 inside
  bool bounded_in_window = false;
  int origin_i = 0;
  int origin_j = 0;
  BBox bbox;

  bool at(int i, int j) const {
    return i >= 0 && j >= 0 && i < width && j < height && mask[static_cast<std::size_t>(j) * width + i] != 0;
  }
  std::size_t count() const;
};

/// 4-connected fill of {level < n} from the cell nearest the origin.
HoleMask extract_hole(const LevelGrid& grid, int n);

struct LoopPolyline {
  std::vector<Complex> vertices;  // closed, counterclockwise; last joins first
  double length() const;
  double signed_area() const;
};

/// Marching-squares boundary of the mask through cell centres.
LoopPolyline extract_loop(const HoleMask& mask);
/// Same, in cell units with the cell (i, j) at (i, -j).
LoopPolyline extract_loop_cells(const HoleMask& mask);

struct LevelComponents {
  int level = 0;
  int components = 0;
  int touching_edge = 0;
  double fraction_touching_edge() const {
    return components == 0 ? 0.0 : static_cast<double>(touching_edge) / components;
  }
};

/// 8-connected components of {level >= L} for each L in the grid's range.
std::vector<LevelComponents> component_diagnostics(const LevelGrid& grid);

/// P6 with none -> white and level L -> grey round(200 (L_max - L)/(L_max - L_min)).
std::vector<std::uint8_t> encode_ppm(const LevelGrid& grid);
/// P5 with mask cells 255, others 0.
std::vector<std::uint8_t> encode_pgm(const HoleMask& mask);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_image(const LevelGrid& grid, const std::string& path);
void write_image(const HoleMask& mask, const std::string& path);

}  // namespace fastesc
