// Copyright 2026 The rrgivens Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RRGIVENS_SCHEDULE_HPP_
#define RRGIVENS_SCHEDULE_HPP_

// Round-robin coordinate-pair schedules.
//
// A schedule partitions every pair (i, j), i < j, of an even number of
// coordinates into n_effective - 1 blocks of n_effective / 2 pairs, with no
// coordinate repeated inside a block. Rotations inside one block commute, so
// a block is one parallel step. Blocks come from the circle method: pair the
// entries of a coordinate sequence at equal distance from both ends, then
// hold the first entry fixed and shift the remaining ones right by one.
//
// Odd n is handled by a phantom coordinate n; restricted parametrizations
// (only pairs with i < m_active carry an angle) reuse the full schedule.
// Pairs outside the parametrization stay in the blocks but are marked
// inactive.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rrgivens {

struct CoordinatePair {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const CoordinatePair&, const CoordinatePair&) = default;
  friend auto operator<=>(const CoordinatePair&, const CoordinatePair&) = default;
};

// Position of an active pair inside a schedule.
struct PairLocation {
  std::size_t block = 0;
  std::size_t slot = 0;
  std::size_t flat = 0;
};

// An active pair of one block together with its slot and flat parameter
// index. Kernels iterate these directly.
struct ActiveSlot {
  CoordinatePair pair;
  std::size_t slot = 0;
  std::size_t flat = 0;
};

// Bijection between active pairs and flat parameter indices. Flat order is
// block-major: block 0 slot 0 first, inactive pairs skipped.
class PairIndexMap {
 public:
  PairIndexMap() = default;

  std::size_t size() const { return flat_pairs_.size(); }
  std::optional<PairLocation> lookup(CoordinatePair p) const;
  std::optional<std::size_t> flat_index(CoordinatePair p) const;
  const CoordinatePair& pair_at(std::size_t flat) const { return flat_pairs_.at(flat); }
  std::span<const CoordinatePair> pairs() const { return flat_pairs_; }

 private:
  friend class RotationSchedule;

  std::size_t n_effective_ = 0;
  // Indexed by i * n_effective + j; holds flat + 1, or 0 when inactive/absent.
  std::vector<std::size_t> flat_plus_one_;
  std::vector<PairLocation> locations_;
  std::vector<CoordinatePair> flat_pairs_;
};

class RotationSchedule {
 public:
  // Wraps an explicit block list. Only checks that each pair is ordered and
  // in range; use validate_schedule for the round-robin properties.
  RotationSchedule(std::size_t n, std::vector<std::vector<CoordinatePair>> blocks,
                   std::size_t m_active, std::vector<std::size_t> initial_permutation = {});

  std::size_t n() const { return n_; }
  std::size_t n_effective() const { return n_effective_; }
  std::size_t m_active() const { return m_active_; }
  bool is_restricted() const { return m_active_ < n_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<std::vector<CoordinatePair>>& blocks() const { return blocks_; }
  std::span<const CoordinatePair> block(std::size_t b) const { return blocks_.at(b); }
  std::span<const std::size_t> initial_permutation() const { return initial_permutation_; }

  // Active iff i < m_active and j < n (excludes phantom and restricted pairs).
  bool is_active(CoordinatePair p) const { return p.i < m_active_ && p.j < n_; }
  std::size_t active_count() const { return index_.size(); }
  std::span<const ActiveSlot> active_slots(std::size_t b) const { return active_.at(b); }
  const PairIndexMap& index_map() const { return index_; }

  // Active pairs in flat order: the sequence E of the sequential algorithm.
  std::vector<CoordinatePair> flattened_active_pairs() const;

  friend bool operator==(const RotationSchedule& a, const RotationSchedule& b) {
    return a.n_ == b.n_ && a.n_effective_ == b.n_effective_ && a.m_active_ == b.m_active_ &&
           a.blocks_ == b.blocks_ && a.initial_permutation_ == b.initial_permutation_;
  }

 private:
  std::size_t n_;
  std::size_t n_effective_;
  std::size_t m_active_;
  std::vector<std::vector<CoordinatePair>> blocks_;
  std::vector<std::size_t> initial_permutation_;
  std::vector<std::vector<ActiveSlot>> active_;
  PairIndexMap index_;
};

// Number of free angles when only pairs with i < m carry a parameter.
constexpr std::size_t restricted_parameter_count(std::size_t n, std::size_t m) {
  return m * n - m * (m + 1) / 2;
}

// Circle-method schedule. initial_permutation must be a permutation of
// 0..n_effective-1 (identity when omitted); m_active defaults to n.
// Throws ParameterError for n < 2, a bad permutation or m_active outside [1, n].
RotationSchedule build_circle_schedule(std::size_t n,
                                       std::optional<std::vector<std::size_t>> initial_permutation = {},
                                       std::optional<std::size_t> m_active = {});

// Pair at (block, slot) of the circle schedule seeded by `permutation`,
// computed directly from the step index without materializing the blocks.
CoordinatePair circle_pair(std::span<const std::size_t> permutation, std::size_t block,
                           std::size_t slot);

struct ScheduleCheck {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
};

struct ValidationReport {
  std::vector<ScheduleCheck> checks;

  bool ok() const;
  const ScheduleCheck* find(std::string_view name) const;
  std::string summary() const;
};

// Checks block count, block sizes, within-block disjointness and exact cover.
ValidationReport validate_schedule(const RotationSchedule& s);

PairIndexMap pair_index_map(const RotationSchedule& s);

// One line per block, pairs as "i-j" separated by spaces; inactive pairs get a
// trailing '*'.
std::string format_schedule(const RotationSchedule& s);

}  // namespace rrgivens

#endif  // RRGIVENS_SCHEDULE_HPP_
