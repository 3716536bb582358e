#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fofx/field.hpp"
#include "fofx/geometry.hpp"

namespace fofx {

/// Orientation of a surface crossing along +z. Enter is written "0" and Exit
/// "1" in event strings.
enum class Orientation : std::uint8_t { kEnter = 0, kExit = 1 };

struct RasterEvent {
  double depth = 0.0;
  Orientation orientation = Orientation::kEnter;

  friend bool operator==(const RasterEvent&, const RasterEvent&) = default;
};

/// Depth ascending; at equal depth Enter sorts before Exit.
inline bool event_less(const RasterEvent& a, const RasterEvent& b) {
  if (a.depth != b.depth) return a.depth < b.depth;
  return a.orientation < b.orientation;
}

/// Per-pixel event lists in compressed-row form.
class IntervalBuffer {
 public:
  IntervalBuffer(int height, int width);
  IntervalBuffer(int height, int width, std::vector<std::size_t> offsets,
                 std::vector<RasterEvent> events);
  static IntervalBuffer from_lists(int height, int width,
                                   const std::vector<std::vector<RasterEvent>>& lists);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept { return offsets_.size() - 1; }
  std::size_t event_count() const noexcept { return events_.size(); }

  std::span<const RasterEvent> events(std::size_t pixel) const {
    return {events_.data() + offsets_[pixel], offsets_[pixel + 1] - offsets_[pixel]};
  }
  std::span<const RasterEvent> events(int x, int y) const {
    return events(static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(x));
  }

  /// Every pixel sorted by event_less.
  bool sorted() const;
  /// Every pixel alternates Enter/Exit starting with Enter, ending with Exit,
  /// depths non-decreasing.
  bool matched() const;

 private:
  int height_;
  int width_;
  std::vector<std::size_t> offsets_;
  std::vector<RasterEvent> events_;
};

struct RasterStats {
  std::size_t triangles = 0;
  std::size_t triangles_skipped = 0;  // zero projected area or out of range
  std::size_t events = 0;
  std::size_t events_clamped = 0;  // |depth| > 1
};

struct MatchReport {
  std::size_t pixels_total = 0;
  std::size_t pixels_modified = 0;
  std::size_t events_dropped = 0;
  RasterStats raster;
};

/// Rasterizes the mesh orthographically along +z at pixel centers and returns
/// per-pixel crossing events sorted by depth.
IntervalBuffer rasterize_events(const TriangleMesh& mesh, int height, int width,
                                RasterStats* stats = nullptr);

// ---- discontinuity matcher ------------------------------------------------

enum class MatcherState : std::uint8_t { kOutside, kInside };
enum class MatcherSymbol : std::uint8_t { kEnter, kExit, kStop };
enum class MatcherAction : std::uint8_t {
  kHold,            // remember the Enter until its Exit arrives
  kDrop,            // discard the incoming event
  kEmitPair,        // emit the held Enter and this Exit
  kDiscardHeld,     // stop letter: the held Enter never closed
  kAccept,          // stop letter in a clean state
};

struct MatcherTransition {
  MatcherState from;
  MatcherSymbol symbol;
  MatcherState to;
  MatcherAction action;
};

/// The complete transition table. Runs of equal symbols keep their first event.
inline constexpr std::array<MatcherTransition, 6> kMatcherTable{{
    {MatcherState::kOutside, MatcherSymbol::kEnter, MatcherState::kInside, MatcherAction::kHold},
    {MatcherState::kOutside, MatcherSymbol::kExit, MatcherState::kOutside, MatcherAction::kDrop},
    {MatcherState::kOutside, MatcherSymbol::kStop, MatcherState::kOutside, MatcherAction::kAccept},
    {MatcherState::kInside, MatcherSymbol::kEnter, MatcherState::kInside, MatcherAction::kDrop},
    {MatcherState::kInside, MatcherSymbol::kExit, MatcherState::kOutside, MatcherAction::kEmitPair},
    {MatcherState::kInside, MatcherSymbol::kStop, MatcherState::kOutside, MatcherAction::kDiscardHeld},
}};

const MatcherTransition& matcher_step(MatcherState state, MatcherSymbol symbol);

/// Runs the matcher over one depth-sorted event sequence.
std::vector<RasterEvent> match_sequence(std::span<const RasterEvent> events);

struct MatchResult {
  IntervalBuffer buffer;
  MatchReport report;
};

/// Applies the matcher to every pixel. Throws PreconditionError when a pixel
/// is not depth-sorted.
MatchResult match_discontinuities(const IntervalBuffer& buffer);

/// Relabels each pixel's sorted events as consecutive Enter/Exit pairs
/// regardless of orientation, closing a dangling event at z = 1. This is the
/// matcher-free baseline kept for comparison.
IntervalBuffer pair_without_matcher(const IntervalBuffer& buffer);

// ---- analytic integration -------------------------------------------------

/// Cosine coefficients of one pixel's matched intervals: a_0 is the total
/// inside length, a_n = (1/t_n) sum_i [sin(t_n(z_i'+1)) - sin(t_n(z_i+1))]
/// with t_n = n*pi/2.
void integrate_pixel(std::span<const RasterEvent> matched, std::span<double> out);

/// Throws PreconditionError when the buffer is not matched.
FofGrid integrate_intervals(const IntervalBuffer& matched, int terms);

enum class MatchPolicy { kAutomaton, kDisabled };

struct FofConversion {
  FofGrid fof;
  MatchReport report;
};

/// rasterize -> match -> integrate. `kDisabled` substitutes
/// pair_without_matcher for the automaton.
FofConversion mesh_to_fof(const TriangleMesh& mesh, int height, int width, int terms,
                          MatchPolicy policy = MatchPolicy::kAutomaton);

}  // namespace fofx
