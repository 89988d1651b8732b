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

#include "rrgivens/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rrgivens/errors.hpp"

namespace rrgivens {

namespace {

std::size_t round_up_even(std::size_t n) { return n + (n % 2); }

std::string pair_str(CoordinatePair p) {
  return std::to_string(p.i) + "-" + std::to_string(p.j);
}

CoordinatePair ordered(std::size_t a, std::size_t b) {
  return a < b ? CoordinatePair{a, b} : CoordinatePair{b, a};
}

}  // namespace

std::optional<PairLocation> PairIndexMap::lookup(CoordinatePair p) const {
  if (p.i >= n_effective_ || p.j >= n_effective_) return std::nullopt;
  const std::size_t v = flat_plus_one_[p.i * n_effective_ + p.j];
  if (v == 0) return std::nullopt;
  return locations_[v - 1];
}

std::optional<std::size_t> PairIndexMap::flat_index(CoordinatePair p) const {
  auto loc = lookup(p);
  if (!loc) return std::nullopt;
  return loc->flat;
}

RotationSchedule::RotationSchedule(std::size_t n, std::vector<std::vector<CoordinatePair>> blocks,
                                   std::size_t m_active,
                                   std::vector<std::size_t> initial_permutation)
    : n_(n),
      n_effective_(round_up_even(n)),
      m_active_(m_active),
      blocks_(std::move(blocks)),
      initial_permutation_(std::move(initial_permutation)) {
  if (n_ < 2) throw ParameterError("schedule dimension must be >= 2, got " + std::to_string(n_));
  if (m_active_ < 1 || m_active_ > n_) {
    throw ParameterError("m_active must lie in [1, " + std::to_string(n_) + "], got " +
                         std::to_string(m_active_));
  }
  for (const auto& blk : blocks_) {
    for (const auto& p : blk) {
      if (!(p.i < p.j) || p.j >= n_effective_) {
        throw ParameterError("pair " + pair_str(p) + " is not ordered or exceeds n_effective " +
                             std::to_string(n_effective_));
      }
    }
  }

  index_.n_effective_ = n_effective_;
  index_.flat_plus_one_.assign(n_effective_ * n_effective_, 0);
  active_.resize(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t slot = 0; slot < blocks_[b].size(); ++slot) {
      const CoordinatePair p = blocks_[b][slot];
      std::size_t& entry = index_.flat_plus_one_[p.i * n_effective_ + p.j];
      if (!is_active(p) || entry != 0) continue;
      const std::size_t flat = index_.flat_pairs_.size();
      entry = flat + 1;
      index_.flat_pairs_.push_back(p);
      index_.locations_.push_back({b, slot, flat});
      active_[b].push_back({p, slot, flat});
    }
  }
}

std::vector<CoordinatePair> RotationSchedule::flattened_active_pairs() const {
  const auto pairs = index_.pairs();
  return {pairs.begin(), pairs.end()};
}

CoordinatePair circle_pair(std::span<const std::size_t> permutation, std::size_t block,
                           std::size_t slot) {
  const std::size_t len = permutation.size();
  if (len < 2 || len % 2 != 0 || block + 1 >= len || slot >= len / 2) {
    throw ParameterError("circle_pair: (block " + std::to_string(block) + ", slot " +
                         std::to_string(slot) + ") out of range for sequence length " +
                         std::to_string(len));
  }
  const std::size_t ring = len - 1;
  // Entry at position t >= 1 after `block` right shifts of the ring.
  auto at = [&](std::size_t t) {
    if (t == 0) return permutation[0];
    return permutation[1 + (t - 1 + ring - block % ring) % ring];
  };
  return ordered(at(slot), at(len - 1 - slot));
}

RotationSchedule build_circle_schedule(std::size_t n,
                                       std::optional<std::vector<std::size_t>> initial_permutation,
                                       std::optional<std::size_t> m_active) {
  if (n < 2) throw ParameterError("schedule dimension must be >= 2, got " + std::to_string(n));
  const std::size_t n_eff = round_up_even(n);

  std::vector<std::size_t> seq(n_eff);
  if (initial_permutation) {
    if (initial_permutation->size() != n_eff) {
      throw ParameterError("initial permutation has length " +
                           std::to_string(initial_permutation->size()) + ", expected " +
                           std::to_string(n_eff));
    }
    std::vector<bool> seen(n_eff, false);
    for (std::size_t v : *initial_permutation) {
      if (v >= n_eff || seen[v]) {
        throw ParameterError("initial permutation entry " + std::to_string(v) +
                             " is out of range or repeated");
      }
      seen[v] = true;
    }
    seq = *initial_permutation;
  } else {
    std::iota(seq.begin(), seq.end(), std::size_t{0});
  }
  const std::vector<std::size_t> perm = seq;

  std::vector<std::vector<CoordinatePair>> blocks;
  blocks.reserve(n_eff - 1);
  for (std::size_t b = 0; b + 1 < n_eff; ++b) {
    std::vector<CoordinatePair> blk;
    blk.reserve(n_eff / 2);
    for (std::size_t t = 0; t < n_eff / 2; ++t) blk.push_back(ordered(seq[t], seq[n_eff - 1 - t]));
    blocks.push_back(std::move(blk));
    // Hold seq[0]; the last entry moves to position 1.
    std::rotate(seq.begin() + 1, seq.end() - 1, seq.end());
  }
  return RotationSchedule(n, std::move(blocks), m_active.value_or(n), perm);
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ScheduleCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << ": " << (c.passed ? "pass" : "FAIL");
    for (const auto& f : c.failures) os << "\n  " << f;
    os << '\n';
  }
  return os.str();
}

ValidationReport validate_schedule(const RotationSchedule& s) {
  const std::size_t n_eff = s.n_effective();
  ValidationReport report;

  ScheduleCheck count{"block_count", true, {}};
  if (s.num_blocks() != n_eff - 1) {
    count.passed = false;
    count.failures.push_back("expected " + std::to_string(n_eff - 1) + " blocks, found " +
                             std::to_string(s.num_blocks()));
  }

  ScheduleCheck sizes{"block_size", true, {}};
  ScheduleCheck disjoint{"disjointness", true, {}};
  std::vector<std::size_t> times_seen(n_eff * n_eff, 0);
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    const auto blk = s.block(b);
    if (blk.size() != n_eff / 2) {
      sizes.passed = false;
      sizes.failures.push_back("block " + std::to_string(b) + " has " +
                               std::to_string(blk.size()) + " pairs, expected " +
                               std::to_string(n_eff / 2));
    }
    std::vector<bool> used(n_eff, false);
    for (const auto& p : blk) {
      for (std::size_t c : {p.i, p.j}) {
        if (used[c]) {
          disjoint.passed = false;
          disjoint.failures.push_back("block " + std::to_string(b) + " reuses coordinate " +
                                      std::to_string(c) + " (pair " + pair_str(p) + ")");
        }
        used[c] = true;
      }
      ++times_seen[p.i * n_eff + p.j];
    }
  }

  ScheduleCheck cover{"exact_cover", true, {}};
  for (std::size_t i = 0; i < n_eff; ++i) {
    for (std::size_t j = i + 1; j < n_eff; ++j) {
      const std::size_t seen = times_seen[i * n_eff + j];
      if (seen == 1) continue;
      cover.passed = false;
      cover.failures.push_back(seen == 0 ? "missing pair " + pair_str({i, j})
                                         : "pair " + pair_str({i, j}) + " appears " +
                                               std::to_string(seen) + " times");
    }
  }

  report.checks = {std::move(count), std::move(sizes), std::move(disjoint), std::move(cover)};
  return report;
}

PairIndexMap pair_index_map(const RotationSchedule& s) { return s.index_map(); }

std::string format_schedule(const RotationSchedule& s) {
  std::ostringstream os;
  for (const auto& blk : s.blocks()) {
    for (std::size_t k = 0; k < blk.size(); ++k) {
      if (k) os << ' ';
      os << pair_str(blk[k]);
      if (!s.is_active(blk[k])) os << '*';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace rrgivens
