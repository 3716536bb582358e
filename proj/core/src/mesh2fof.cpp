#include "fofx/mesh2fof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fofx/errors.hpp"
#include "fofx/raster.hpp"

namespace fofx {

IntervalBuffer::IntervalBuffer(int height, int width)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) throw ShapeError("IntervalBuffer dimensions must be >= 1");
  offsets_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) + 1, 0);
}

IntervalBuffer::IntervalBuffer(int height, int width, std::vector<std::size_t> offsets,
                               std::vector<RasterEvent> events)
    : height_(height), width_(width), offsets_(std::move(offsets)), events_(std::move(events)) {
  if (height < 1 || width < 1) throw ShapeError("IntervalBuffer dimensions must be >= 1");
  const std::size_t pixels = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (offsets_.size() != pixels + 1 || offsets_.front() != 0 ||
      offsets_.back() != events_.size() || !std::is_sorted(offsets_.begin(), offsets_.end())) {
    throw ShapeError("IntervalBuffer offsets are inconsistent");
  }
}

IntervalBuffer IntervalBuffer::from_lists(int height, int width,
                                          const std::vector<std::vector<RasterEvent>>& lists) {
  const std::size_t pixels = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (lists.size() != pixels) throw ShapeError("one event list per pixel required");
  std::vector<std::size_t> offsets(pixels + 1, 0);
  std::vector<RasterEvent> events;
  for (std::size_t p = 0; p < pixels; ++p) {
    events.insert(events.end(), lists[p].begin(), lists[p].end());
    offsets[p + 1] = events.size();
  }
  return IntervalBuffer(height, width, std::move(offsets), std::move(events));
}

bool IntervalBuffer::sorted() const {
  for (std::size_t p = 0; p < pixel_count(); ++p) {
    const auto ev = events(p);
    if (!std::is_sorted(ev.begin(), ev.end(), event_less)) return false;
  }
  return true;
}

namespace {
bool alternates(std::span<const RasterEvent> ev) {
  if (ev.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto expected = i % 2 == 0 ? Orientation::kEnter : Orientation::kExit;
    if (ev[i].orientation != expected) return false;
    if (i > 0 && ev[i].depth < ev[i - 1].depth) return false;
  }
  return true;
}
}  // namespace

bool IntervalBuffer::matched() const {
  for (std::size_t p = 0; p < pixel_count(); ++p) {
    if (!alternates(events(p))) return false;
  }
  return true;
}

IntervalBuffer rasterize_events(const TriangleMesh& mesh, int height, int width,
                                RasterStats* stats) {
  if (height < 1 || width < 1) throw ShapeError("raster dimensions must be >= 1");
  mesh.validate();

  struct Hit {
    std::uint32_t pixel;
    RasterEvent event;
  };
  RasterStats local;
  local.triangles = mesh.triangles.size();
  std::vector<Hit> hits;
  hits.reserve(mesh.triangles.size() * 4);

  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    int area_sign = 0;
    // n_z < 0 faces the camera (view direction +z): the ray enters.
    const auto coverage = raster::rasterize_triangle(
        a, b, c, height, width, area_sign, [&](int x, int y, double wa, double wb, double wc) {
          double z = wa * a.z() + wb * b.z() + wc * c.z();
          if (z < -1.0 || z > 1.0) {
            z = std::clamp(z, -1.0, 1.0);
            ++local.events_clamped;
          }
          hits.push_back({static_cast<std::uint32_t>(y * width + x),
                          {z + 0.0, area_sign < 0 ? Orientation::kEnter : Orientation::kExit}});
        });
    if (coverage != raster::Coverage::kRasterized) ++local.triangles_skipped;
  }
  local.events = hits.size();

  const std::size_t pixels = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  std::vector<std::size_t> offsets(pixels + 1, 0);
  for (const auto& h : hits) ++offsets[h.pixel + 1];
  for (std::size_t p = 0; p < pixels; ++p) offsets[p + 1] += offsets[p];
  std::vector<RasterEvent> events(hits.size());
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& h : hits) events[cursor[h.pixel]++] = h.event;
  }
  hits.clear();
  hits.shrink_to_fit();

  const auto count = static_cast<std::ptrdiff_t>(pixels);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t p = 0; p < count; ++p) {
    auto first = events.begin() + static_cast<std::ptrdiff_t>(offsets[static_cast<std::size_t>(p)]);
    auto last = events.begin() + static_cast<std::ptrdiff_t>(offsets[static_cast<std::size_t>(p) + 1]);
    if (last - first > 1) std::sort(first, last, event_less);
  }

  if (stats != nullptr) *stats = local;
  return IntervalBuffer(height, width, std::move(offsets), std::move(events));
}

const MatcherTransition& matcher_step(MatcherState state, MatcherSymbol symbol) {
  for (const auto& t : kMatcherTable) {
    if (t.from == state && t.symbol == symbol) return t;
  }
  throw PreconditionError("matcher table is incomplete");  // unreachable
}

std::vector<RasterEvent> match_sequence(std::span<const RasterEvent> events) {
  std::vector<RasterEvent> out;
  out.reserve(events.size());
  MatcherState state = MatcherState::kOutside;
  RasterEvent held{};
  const auto feed = [&](MatcherSymbol symbol, const RasterEvent* ev) {
    const auto& t = matcher_step(state, symbol);
    switch (t.action) {
      case MatcherAction::kHold:
        held = *ev;
        break;
      case MatcherAction::kEmitPair:
        out.push_back(held);
        out.push_back(*ev);
        break;
      case MatcherAction::kDrop:
      case MatcherAction::kDiscardHeld:
      case MatcherAction::kAccept:
        break;
    }
    state = t.to;
  };
  for (const auto& ev : events) {
    feed(ev.orientation == Orientation::kEnter ? MatcherSymbol::kEnter : MatcherSymbol::kExit, &ev);
  }
  feed(MatcherSymbol::kStop, nullptr);
  return out;
}

MatchResult match_discontinuities(const IntervalBuffer& buffer) {
  const std::size_t pixels = buffer.pixel_count();
  MatchReport report;
  report.pixels_total = pixels;

  std::vector<std::size_t> offsets(pixels + 1, 0);
  std::vector<RasterEvent> events;
  events.reserve(buffer.event_count());
  for (std::size_t p = 0; p < pixels; ++p) {
    const auto in = buffer.events(p);
    if (!std::is_sorted(in.begin(), in.end(), event_less)) {
      throw PreconditionError("pixel " + std::to_string(p) + " events are not depth-sorted");
    }
    const auto out = match_sequence(in);
    if (out.size() != in.size()) {
      ++report.pixels_modified;
      report.events_dropped += in.size() - out.size();
    }
    events.insert(events.end(), out.begin(), out.end());
    offsets[p + 1] = events.size();
  }
  return {IntervalBuffer(buffer.height(), buffer.width(), std::move(offsets), std::move(events)),
          report};
}

IntervalBuffer pair_without_matcher(const IntervalBuffer& buffer) {
  const std::size_t pixels = buffer.pixel_count();
  std::vector<std::size_t> offsets(pixels + 1, 0);
  std::vector<RasterEvent> events;
  events.reserve(buffer.event_count() + pixels);
  for (std::size_t p = 0; p < pixels; ++p) {
    const auto in = buffer.events(p);
    for (std::size_t i = 0; i < in.size(); ++i) {
      events.push_back({in[i].depth, i % 2 == 0 ? Orientation::kEnter : Orientation::kExit});
    }
    if (in.size() % 2 == 1) events.push_back({1.0, Orientation::kExit});
    offsets[p + 1] = events.size();
  }
  return IntervalBuffer(buffer.height(), buffer.width(), std::move(offsets), std::move(events));
}

void integrate_pixel(std::span<const RasterEvent> matched, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t terms = out.size();
  if (terms == 0) return;
  constexpr double kHalfPi = 0.5 * std::numbers::pi;

  for (std::size_t i = 0; i + 1 < matched.size(); i += 2) {
    const double z_in = matched[i].depth;
    const double z_out = matched[i + 1].depth;
    out[0] += z_out - z_in;

    // sin(n*phi) by repeated rotation; error grows linearly in n.
    const double phi_in = kHalfPi * (z_in + 1.0);
    const double phi_out = kHalfPi * (z_out + 1.0);
    const double c1_in = std::cos(phi_in), s1_in = std::sin(phi_in);
    const double c1_out = std::cos(phi_out), s1_out = std::sin(phi_out);
    double c_in = c1_in, s_in = s1_in;
    double c_out = c1_out, s_out = s1_out;
    for (std::size_t n = 1; n < terms; ++n) {
      out[n] += (s_out - s_in) / (kHalfPi * static_cast<double>(n));
      const double cn_in = c_in * c1_in - s_in * s1_in;
      s_in = s_in * c1_in + c_in * s1_in;
      c_in = cn_in;
      const double cn_out = c_out * c1_out - s_out * s1_out;
      s_out = s_out * c1_out + c_out * s1_out;
      c_out = cn_out;
    }
  }
}

FofGrid integrate_intervals(const IntervalBuffer& matched, int terms) {
  if (!matched.matched()) {
    throw PreconditionError("integration requires alternating Enter/Exit events");
  }
  FofGrid fof(matched.height(), matched.width(), terms);
  const auto pixels = static_cast<std::ptrdiff_t>(matched.pixel_count());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t p = 0; p < pixels; ++p) {
    const auto idx = static_cast<std::size_t>(p);
    const auto ev = matched.events(idx);
    if (ev.empty()) continue;
    integrate_pixel(ev, fof.pixel(idx));
  }
  return fof;
}

FofConversion mesh_to_fof(const TriangleMesh& mesh, int height, int width, int terms,
                          MatchPolicy policy) {
  if (terms < 1) throw ShapeError("FOF needs at least one term");
  RasterStats stats;
  const IntervalBuffer raw = rasterize_events(mesh, height, width, &stats);
  if (policy == MatchPolicy::kDisabled) {
    MatchReport report;
    report.pixels_total = raw.pixel_count();
    report.raster = stats;
    return {integrate_intervals(pair_without_matcher(raw), terms), report};
  }
  MatchResult matched = match_discontinuities(raw);
  matched.report.raster = stats;
  return {integrate_intervals(matched.buffer, terms), matched.report};
}

}  // namespace fofx
