#include "fastesc/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

namespace fastesc {

namespace {

bool at_edge(int i, int j, int w, int h) { return i == 0 || j == 0 || i == w - 1 || j == h - 1; }

GridCell classify_point(const EntireFunction& f, const ThresholdLadder& ladder, Complex z, const GridOptions& o) {
  const LevelVerdict v = max_level(f, ladder, z, o.depth, o.L_min, o.L_max);
  return {v.level, v.indeterminate};
}

bool higher(const GridCell& a, const GridCell& b) {
  if (!a.level) return false;
  if (!b.level) return true;
  return *a.level > *b.level;
}

}  // namespace

Complex LevelGrid::center(int i, int j) const {
  return {bbox.center_re + (i - width / 2) * dx(), bbox.center_im + (height / 2 - j) * dy()};
}

LevelGrid classify_grid(const EntireFunction& f, const ThresholdLadder& ladder, const BBox& bbox,
                        const GridOptions& o) {
  if (o.width < 1 || o.height < 1 || o.width > kMaxResolution || o.height > kMaxResolution) {
    throw RasterError("resolution must lie in [1, 16384] per side");
  }
  if (!(bbox.half_width > 0.0) || !(bbox.half_height > 0.0) || !std::isfinite(bbox.half_width) ||
      !std::isfinite(bbox.half_height) || !std::isfinite(bbox.center_re) || !std::isfinite(bbox.center_im)) {
    throw RasterError("bbox must have positive finite extent");
  }
  if (o.L_min > o.L_max) throw RasterError("level range is empty");
  if (o.depth < 1) throw RasterError("depth must be >= 1");
  if (ladder.size() < o.depth + o.L_max + 1 && !ladder.truncated_at) {
    throw RasterError("ladder does not cover depth + L_max");
  }

  LevelGrid g;
  g.bbox = bbox;
  g.width = o.width;
  g.height = o.height;
  g.depth = o.depth;
  g.L_min = o.L_min;
  g.L_max = o.L_max;
  g.R = ladder.R;
  g.function = f.describe();
  g.cells.resize(static_cast<std::size_t>(o.width) * o.height);

  const double qx = g.dx() / 4.0, qy = g.dy() / 4.0;
  auto run_row = [&](int j) {
    for (int i = 0; i < g.width; ++i) {
      const Complex c = g.center(i, j);
      GridCell cell;
      if (o.supersample) {
        bool first = true;
        for (double sx : {-qx, qx}) {
          for (double sy : {-qy, qy}) {
            const GridCell s = classify_point(f, ladder, c + Complex{sx, sy}, o);
            if (first || higher(s, cell)) cell = s;
            first = false;
          }
        }
      } else {
        cell = classify_point(f, ladder, c, o);
      }
      g.cells[static_cast<std::size_t>(j) * g.width + i] = cell;
    }
  };

  unsigned threads = o.threads > 0 ? static_cast<unsigned>(o.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(g.height));
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int j = static_cast<int>(t); j < g.height; j += static_cast<int>(threads)) run_row(j);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return g;
}

std::size_t HoleMask::count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)); }

HoleMask extract_hole(const LevelGrid& grid, int n) {
  if (n < grid.L_min || n > grid.L_max) throw RasterError("hole level outside the grid's level range");
  HoleMask h;
  h.width = grid.width;
  h.height = grid.height;
  h.level = n;
  h.bbox = grid.bbox;
  h.mask.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);

  h.origin_i = std::clamp(static_cast<int>(std::lround(-grid.bbox.center_re / grid.dx())) + grid.width / 2, 0,
                          grid.width - 1);
  h.origin_j = std::clamp(grid.height / 2 - static_cast<int>(std::lround(-grid.bbox.center_im / grid.dy())), 0,
                          grid.height - 1);
  auto below = [&](int i, int j) {
    const GridCell& c = grid.at(i, j);
    return !c.level || *c.level < n;
  };
  if (!below(h.origin_i, h.origin_j)) throw RasterError("origin cell classified at level >= n");

  bool touches = false;
  std::deque<std::pair<int, int>> queue{{h.origin_i, h.origin_j}};
  h.mask[static_cast<std::size_t>(h.origin_j) * h.width + h.origin_i] = 1;
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    touches = touches || at_edge(i, j, h.width, h.height);
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int a = i + di[k], b = j + dj[k];
      if (a < 0 || b < 0 || a >= h.width || b >= h.height) continue;
      std::uint8_t& m = h.mask[static_cast<std::size_t>(b) * h.width + a];
      if (m || !below(a, b)) continue;
      m = 1;
      queue.emplace_back(a, b);
    }
  }
  h.bounded_in_window = !touches;
  return h;
}

double LoopPolyline::length() const {
  double s = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) s += std::abs(vertices[(k + 1) % vertices.size()] - vertices[k]);
  return s;
}

double LoopPolyline::signed_area() const {
  double s = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Complex a = vertices[k], b = vertices[(k + 1) % vertices.size()];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * s;
}

namespace {

using Point2 = std::pair<int, int>;  // doubled cell coordinates (2i, 2j)

/// All boundary loops in doubled cell coordinates, inside on the left in the
/// y-up frame.
std::vector<std::vector<Point2>> trace_loops(const HoleMask& m) {
  std::map<Point2, Point2> next;
  for (int j = -1; j < m.height; ++j) {
    for (int i = -1; i < m.width; ++i) {
      // Corners counterclockwise in the y-up frame: BL, BR, TR, TL.
      const Point2 c[4] = {{i, j + 1}, {i + 1, j + 1}, {i + 1, j}, {i, j}};
      bool in[4];
      int count = 0;
      for (int k = 0; k < 4; ++k) {
        in[k] = m.at(c[k].first, c[k].second);
        count += in[k];
      }
      if (count == 0 || count == 4) continue;
      auto mid = [&](int k) {
        const Point2& a = c[k];
        const Point2& b = c[(k + 1) % 4];
        return Point2{a.first + b.first, a.second + b.second};
      };
      for (int k = 0; k < 4; ++k) {
        if (!in[k] || in[(k + 3) % 4]) continue;  // k starts a run
        int e = k;
        while (in[(e + 1) % 4]) e = (e + 1) % 4;
        next[mid(e)] = mid((k + 3) % 4);
      }
    }
  }
  std::vector<std::vector<Point2>> loops;
  while (!next.empty()) {
    std::vector<Point2> loop;
    Point2 p = next.begin()->first;
    while (true) {
      auto it = next.find(p);
      if (it == next.end()) break;
      loop.push_back(p);
      p = it->second;
      next.erase(it);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

LoopPolyline outer_loop(const HoleMask& mask, bool plane) {
  if (!mask.bounded_in_window) throw RasterError("hole is unbounded in the window");
  const auto loops = trace_loops(mask);
  const double dx = 2.0 * mask.bbox.half_width / mask.width;
  const double dy = 2.0 * mask.bbox.half_height / mask.height;
  LoopPolyline best;
  double best_area = 0.0;
  for (const auto& loop : loops) {
    LoopPolyline p;
    for (const auto& [u, v] : loop) {
      if (plane) {
        p.vertices.emplace_back(mask.bbox.center_re + (u / 2.0 - mask.width / 2) * dx,
                                mask.bbox.center_im + (mask.height / 2 - v / 2.0) * dy);
      } else {
        p.vertices.emplace_back(u / 2.0, -v / 2.0);
      }
    }
    const double a = p.signed_area();
    if (a > best_area) {
      best_area = a;
      best = std::move(p);
    }
  }
  if (best.vertices.empty()) throw RasterError("mask has no boundary");
  return best;
}

}  // namespace

LoopPolyline extract_loop(const HoleMask& mask) { return outer_loop(mask, true); }
LoopPolyline extract_loop_cells(const HoleMask& mask) { return outer_loop(mask, false); }

std::vector<LevelComponents> component_diagnostics(const LevelGrid& grid) {
  std::vector<LevelComponents> out;
  std::vector<int> label(grid.cells.size());
  for (int L = grid.L_min; L <= grid.L_max; ++L) {
    LevelComponents rep;
    rep.level = L;
    std::fill(label.begin(), label.end(), 0);
    auto in = [&](int i, int j) {
      const GridCell& c = grid.at(i, j);
      return c.level && *c.level >= L;
    };
    for (int j = 0; j < grid.height; ++j) {
      for (int i = 0; i < grid.width; ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * grid.width + i;
        if (label[idx] || !in(i, j)) continue;
        ++rep.components;
        bool edge = false;
        std::deque<std::pair<int, int>> queue{{i, j}};
        label[idx] = rep.components;
        while (!queue.empty()) {
          const auto [a, b] = queue.front();
          queue.pop_front();
          edge = edge || at_edge(a, b, grid.width, grid.height);
          for (int db = -1; db <= 1; ++db) {
            for (int da = -1; da <= 1; ++da) {
              const int x = a + da, y = b + db;
              if ((da == 0 && db == 0) || x < 0 || y < 0 || x >= grid.width || y >= grid.height) continue;
              const std::size_t k = static_cast<std::size_t>(y) * grid.width + x;
              if (label[k] || !in(x, y)) continue;
              label[k] = rep.components;
              queue.emplace_back(x, y);
            }
          }
        }
        if (edge) ++rep.touching_edge;
      }
    }
    out.push_back(rep);
  }
  return out;
}

namespace {

std::vector<std::uint8_t> header(const char* magic, int w, int h) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%s\n%d %d\n255\n", magic, w, h);
  return std::vector<std::uint8_t>(buf, buf + n);
}

}  // namespace

std::vector<std::uint8_t> encode_ppm(const LevelGrid& grid) {
  auto out = header("P6", grid.width, grid.height);
  const int span = grid.L_max - grid.L_min;
  for (const GridCell& c : grid.cells) {
    std::uint8_t g = 255;
    if (c.level) {
      g = span == 0 ? 0 : static_cast<std::uint8_t>(std::lround(200.0 * (grid.L_max - *c.level) / span));
    }
    out.insert(out.end(), {g, g, g});
  }
  return out;
}

std::vector<std::uint8_t> encode_pgm(const HoleMask& mask) {
  auto out = header("P5", mask.width, mask.height);
  for (std::uint8_t m : mask.mask) out.push_back(m ? 255 : 0);
  return out;
}

void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RasterError("unwritable path: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw RasterError("unwritable path: " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw RasterError("unwritable path: " + path);
  }
}

void write_image(const LevelGrid& grid, const std::string& path) { write_file_atomic(path, encode_ppm(grid)); }
void write_image(const HoleMask& mask, const std::string& path) { write_file_atomic(path, encode_pgm(mask)); }

}  // namespace fastesc
