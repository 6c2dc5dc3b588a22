// Copyright 2026 The Authors.
//
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

#include "crs/schemes.h"

#include <fmt/format.h>

#include <algorithm>

#include "crs/errors.h"

namespace crs {

void CoinConfig::validate() const {
  for (double p : {pick_probability, sample_rate, prior_pick_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw CrsError(ErrorCode::kInvalidArgument,
                     fmt::format("coin probability {} outside [0, 1]", p));
    }
  }
}

EdgeStream::EdgeStream(const Instance& instance, std::span<const EdgeId> arrival,
                       std::span<const std::uint8_t> activity)
    : instance_(&instance) {
  reset(arrival, activity);
}

void EdgeStream::reset(std::span<const EdgeId> arrival, std::span<const std::uint8_t> activity) {
  if (activity.size() != static_cast<std::size_t>(instance_->edge_count())) {
    throw CrsError(ErrorCode::kInvalidArgument, "activity vector length differs from edge count");
  }
  arrival_.assign(arrival.begin(), arrival.end());
  activity_.assign(activity.begin(), activity.end());
  cursor_ = 0;
  marginal_reveals_ = 0;
}

const EdgeRecord& EdgeStream::advance() {
  if (cursor_ >= arrival_.size()) {
    throw CrsError(ErrorCode::kStreamTooShort, "edge stream exhausted");
  }
  return instance_->edge(arrival_[cursor_++]);
}

ArrivalEvent EdgeStream::next_observed() {
  const EdgeRecord& e = advance();
  ++marginal_reveals_;
  return {e.id, e.u, e.v, activity_[static_cast<std::size_t>(e.id)] != 0, e.x};
}

ArrivalEvent EdgeStream::next_online() {
  const EdgeRecord& e = advance();
  return {e.id, e.u, e.v, activity_[static_cast<std::size_t>(e.id)] != 0, std::nullopt};
}

Ordering Selection::ordering() const {
  return Ordering::from_parts(std::span<const VertexId>(order).first(core_begin),
                              std::span<const VertexId>(order).subspan(core_begin));
}

EdgeFlags realize_activity(const Instance& instance, const TrialCoins& coins) {
  EdgeFlags active(static_cast<std::size_t>(instance.edge_count()));
  for (const EdgeRecord& e : instance.edges()) {
    active[static_cast<std::size_t>(e.id)] = coins.flip(e.id, CoinTag::kActivity, e.x.value());
  }
  return active;
}

EdgeFlags draw_exclusions(int edge_count, const TrialCoins& coins, double pick_probability) {
  EdgeFlags excluded(static_cast<std::size_t>(edge_count));
  for (EdgeId id = 0; id < edge_count; ++id) {
    excluded[static_cast<std::size_t>(id)] = !coins.flip(id, CoinTag::kPick, pick_probability);
  }
  return excluded;
}

std::vector<EdgeId> draw_sample(int edge_count, const TrialCoins& coins, double rate) {
  std::vector<EdgeId> sample;
  for (EdgeId id = 0; id < edge_count; ++id) {
    if (coins.flip(id, CoinTag::kSample, rate)) sample.push_back(id);
  }
  return sample;
}

std::vector<EdgeId> random_arrival(int edge_count, Rng& rng) {
  std::vector<EdgeId> order(static_cast<std::size_t>(edge_count));
  for (EdgeId i = 0; i < edge_count; ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

namespace {

// Scratch for the sample-then-online engine. One per thread; nothing in here
// survives a call.
struct Engine {
  TopologicalOrderer orderer;
  Labeling online;
  std::vector<WeightedEdge> sampled;
  std::vector<EdgeId> sampled_ids;
  std::vector<VertexId> core;
  std::vector<VertexId> removal;
  std::vector<VertexId> unseen;
  std::vector<std::int32_t> core_pos;
  std::vector<std::uint8_t> seen;
  std::vector<std::uint8_t> bucket_used;

  void grow(VertexId v) {
    const auto need = static_cast<std::size_t>(v) + 1;
    if (need > seen.size()) {
      seen.resize(need, 0);
      core_pos.resize(need, -1);
      bucket_used.resize(need, 0);
    }
  }
};

thread_local Engine engine;

void prepare(Selection& out, std::size_t m) {
  out.picked.clear();
  out.audit.assign(m, EdgeAudit{});
  out.order.clear();
  out.core_begin = 0;
  out.sample_size = 0;
  out.marginal_reads = 0;
  out.knows_marginals = false;
}

// First s arrivals form the sample; the rest are decided online.
void run_sample_then_online(EdgeStream& stream, std::size_t s, std::size_t m,
                            std::span<const std::uint8_t> excluded, Rng* rng,
                            const Labeling* fixed, Selection& out) {
  Engine& eng = engine;
  prepare(out, m);
  eng.sampled.clear();
  eng.sampled_ids.clear();
  eng.core.clear();
  eng.unseen.clear();
  if (!fixed) eng.online.clear();
  const Labeling& labels = fixed ? *fixed : eng.online;
  const int reveals_before = stream.marginal_reveals();

  auto label = [&](VertexId w) {
    if (fixed) {
      if (!fixed->contains(w)) {
        throw CrsError(ErrorCode::kIncompleteLabeling,
                       fmt::format("vertex {} is missing from the labeling", w));
      }
    } else {
      eng.online.insert_random(w, *rng);
    }
  };

  for (std::size_t i = 0; i < s; ++i) {
    const ArrivalEvent ev = stream.next_observed();
    EdgeAudit& a = out.audit[static_cast<std::size_t>(ev.edge)];
    a.sampled = true;
    a.active = ev.active;
    a.marginal_seen = true;
    eng.sampled.push_back({ev.u, ev.v, *ev.x});
    eng.sampled_ids.push_back(ev.edge);
    for (VertexId w : {ev.u, ev.v}) {
      eng.grow(w);
      if (!eng.seen[static_cast<std::size_t>(w)]) {
        eng.seen[static_cast<std::size_t>(w)] = 1;
        eng.core.push_back(w);
        label(w);
      }
    }
  }
  eng.orderer.order(eng.sampled, eng.core, labels, eng.removal);
  for (std::size_t i = 0; i < eng.removal.size(); ++i) {
    eng.core_pos[static_cast<std::size_t>(eng.removal[i])] = static_cast<std::int32_t>(i);
  }

  auto before = [&](VertexId a, VertexId b) {
    const auto pa = eng.core_pos[static_cast<std::size_t>(a)];
    const auto pb = eng.core_pos[static_cast<std::size_t>(b)];
    if (pa >= 0 && pb >= 0) return pa < pb;
    if (pa >= 0 || pb >= 0) return pa < 0;  // unseen vertices precede T
    return labels.rank_unchecked(a) < labels.rank_unchecked(b);
  };

  for (std::size_t i = s; i < m; ++i) {
    const ArrivalEvent ev = stream.next_online();
    for (VertexId w : {ev.u, ev.v}) {
      eng.grow(w);
      if (!eng.seen[static_cast<std::size_t>(w)]) {
        eng.seen[static_cast<std::size_t>(w)] = 1;
        label(w);
        const int r = labels.rank_unchecked(w);
        auto it = std::find_if(eng.unseen.begin(), eng.unseen.end(),
                               [&](VertexId t) { return labels.rank_unchecked(t) > r; });
        eng.unseen.insert(it, w);
      }
    }
    const VertexId owner = before(ev.u, ev.v) ? ev.u : ev.v;
    EdgeAudit& a = out.audit[static_cast<std::size_t>(ev.edge)];
    a.active = ev.active;
    a.excluded = excluded[static_cast<std::size_t>(ev.edge)] != 0;
    a.owner = owner;
    if (!ev.active) continue;
    if (eng.bucket_used[static_cast<std::size_t>(owner)]) {
      a.blocked = true;
    } else if (!a.excluded) {
      a.picked = true;
      eng.bucket_used[static_cast<std::size_t>(owner)] = 1;
      out.picked.push_back(ev.edge);
    }
  }

  out.order.assign(eng.unseen.begin(), eng.unseen.end());
  out.order.insert(out.order.end(), eng.removal.begin(), eng.removal.end());
  out.core_begin = eng.unseen.size();
  out.sample_size = s;
  out.marginal_reads = stream.marginal_reveals() - reveals_before;

  // Sampled edges get owners too, for audits; positions are final now.
  std::vector<std::int32_t>& pos = eng.core_pos;
  for (std::size_t i = 0; i < out.order.size(); ++i) {
    pos[static_cast<std::size_t>(out.order[i])] = static_cast<std::int32_t>(i);
  }
  for (std::size_t i = 0; i < eng.sampled.size(); ++i) {
    const WeightedEdge& e = eng.sampled[i];
    out.audit[static_cast<std::size_t>(eng.sampled_ids[i])].owner =
        pos[static_cast<std::size_t>(e.u)] < pos[static_cast<std::size_t>(e.v)] ? e.u : e.v;
  }
  for (VertexId w : out.order) {
    eng.seen[static_cast<std::size_t>(w)] = 0;
    eng.core_pos[static_cast<std::size_t>(w)] = -1;
    eng.bucket_used[static_cast<std::size_t>(w)] = 0;
  }
}

}  // namespace

void run_rocrs(EdgeStream& stream, std::size_t m, std::span<const std::uint8_t> excluded,
               Rng& rng, const CoinConfig& config, Selection& out, const Labeling* injected) {
  if (stream.remaining() < m) {
    throw CrsError(ErrorCode::kStreamTooShort,
                   fmt::format("stream has {} edges, expected {}", stream.remaining(), m));
  }
  if (excluded.size() < m) {
    throw CrsError(ErrorCode::kInvalidArgument, "exclusion marks shorter than the edge count");
  }
  std::size_t s = 0;
  for (std::size_t i = 0; i < m; ++i) s += rng.uniform() < config.sample_rate ? 1 : 0;
  run_sample_then_online(stream, s, m, excluded, &rng, injected, out);
}

Selection run_rocrs(EdgeStream& stream, std::size_t m, std::span<const std::uint8_t> excluded,
                    Rng& rng, const CoinConfig& config, const Labeling* injected) {
  Selection out;
  run_rocrs(stream, m, excluded, rng, config, out, injected);
  return out;
}

void run_sample_ocrs(const Instance& instance, std::span<const std::uint8_t> activity,
                     std::span<const EdgeId> adversary_order, std::span<const EdgeId> sample,
                     std::span<const std::uint8_t> excluded, const Labeling& labeling,
                     Selection& out) {
  const auto m = static_cast<std::size_t>(instance.edge_count());
  std::vector<std::uint8_t> seen(m, 0);
  for (EdgeId id : sample) {
    instance.edge(id);
    if (seen[static_cast<std::size_t>(id)]++) {
      throw CrsError(ErrorCode::kInvalidArgument, fmt::format("edge {} sampled twice", id));
    }
  }
  for (EdgeId id : adversary_order) {
    if (id < 0 || static_cast<std::size_t>(id) >= m || seen[static_cast<std::size_t>(id)]++) {
      throw CrsError(ErrorCode::kNotAPermutation,
                     fmt::format("adversary order repeats or misplaces edge {}", id));
    }
  }
  if (sample.size() + adversary_order.size() != m) {
    throw CrsError(ErrorCode::kNotAPermutation, "adversary order omits non-sampled edges");
  }
  if (excluded.size() < m) {
    throw CrsError(ErrorCode::kInvalidArgument, "exclusion marks shorter than the edge count");
  }
  std::vector<EdgeId> arrival(sample.begin(), sample.end());
  arrival.insert(arrival.end(), adversary_order.begin(), adversary_order.end());
  EdgeStream stream(instance, arrival, activity);
  run_sample_then_online(stream, sample.size(), m, excluded, nullptr, &labeling, out);
}

Selection run_sample_ocrs(const Instance& instance, std::span<const std::uint8_t> activity,
                          std::span<const EdgeId> adversary_order, std::span<const EdgeId> sample,
                          std::span<const std::uint8_t> excluded, const Labeling& labeling) {
  Selection out;
  run_sample_ocrs(instance, activity, adversary_order, sample, excluded, labeling, out);
  return out;
}

Selection run_prior_knowledge(const Instance& instance, std::span<const std::uint8_t> activity,
                              std::span<const EdgeId> arrival,
                              std::span<const std::uint8_t> excluded, const Labeling& labeling,
                              bool check_polytope) {
  if (check_polytope && !in_forest_polytope(instance)) {
    throw CrsError(ErrorCode::kPolytopeViolation, "x is not in the forest polytope");
  }
  const auto m = static_cast<std::size_t>(instance.edge_count());
  if (activity.size() != m || excluded.size() < m) {
    throw CrsError(ErrorCode::kInvalidArgument, "per-edge flags do not match the edge count");
  }
  std::vector<std::uint8_t> seen(m, 0);
  for (EdgeId id : arrival) {
    if (id < 0 || static_cast<std::size_t>(id) >= m || seen[static_cast<std::size_t>(id)]++) {
      throw CrsError(ErrorCode::kNotAPermutation, "arrival is not a permutation of the edges");
    }
  }
  if (arrival.size() != m) {
    throw CrsError(ErrorCode::kNotAPermutation, "arrival is not a permutation of the edges");
  }

  const Ordering order = offline_order(instance, std::nullopt, labeling);
  Selection out;
  prepare(out, m);
  out.knows_marginals = true;
  out.marginal_reads = static_cast<int>(m);
  out.order.assign(order.vertices().begin(), order.vertices().end());
  std::vector<std::uint8_t> used(static_cast<std::size_t>(instance.vertex_count()), 0);
  for (EdgeId id : arrival) {
    const EdgeRecord& e = instance.edge(id);
    EdgeAudit& a = out.audit[static_cast<std::size_t>(id)];
    a.marginal_seen = true;
    a.owner = bucket_owner(order, e);
    a.active = activity[static_cast<std::size_t>(id)] != 0;
    a.excluded = excluded[static_cast<std::size_t>(id)] != 0;
    if (!a.active) continue;
    if (used[static_cast<std::size_t>(a.owner)]) {
      a.blocked = true;
    } else if (!a.excluded) {
      a.picked = true;
      used[static_cast<std::size_t>(a.owner)] = 1;
      out.picked.push_back(id);
    }
  }
  return out;
}

InvariantReport check_selection(const Instance& instance, const Selection& selection) {
  InvariantReport report;
  const auto n = static_cast<std::size_t>(instance.vertex_count());
  thread_local ForestChecker forest;
  thread_local std::vector<std::uint8_t> picks_at;
  thread_local std::vector<std::int32_t> good_at;
  forest.reset(instance.vertex_count());
  picks_at.assign(n, 0);
  good_at.assign(n, 0);

  for (EdgeId id : selection.picked) {
    const EdgeRecord& e = instance.edge(id);
    const EdgeAudit& a = selection.audit[static_cast<std::size_t>(id)];
    if (!forest.add(e.u, e.v)) report.forest = false;
    if (a.owner < 0 || picks_at[static_cast<std::size_t>(a.owner)]++) {
      report.one_pick_per_bucket = false;
    }
    if (a.sampled) report.sampled_never_picked = false;
  }

  if (!selection.knows_marginals) {
    if (static_cast<std::size_t>(selection.marginal_reads) != selection.sample_size) {
      report.information_model = false;
    }
    for (const EdgeAudit& a : selection.audit) {
      if (a.marginal_seen && !a.sampled) report.information_model = false;
    }
  }

  // A: active and non-excluded; B: nothing else in either endpoint's bucket
  // outside S is; C: not sampled.
  auto good = [](const EdgeAudit& a) { return !a.sampled && a.active && !a.excluded; };
  for (const EdgeAudit& a : selection.audit) {
    if (good(a)) ++good_at[static_cast<std::size_t>(a.owner)];
  }
  for (const EdgeRecord& e : instance.edges()) {
    const EdgeAudit& a = selection.audit[static_cast<std::size_t>(e.id)];
    if (!good(a)) continue;
    const auto others_at = [&](VertexId w) {
      return good_at[static_cast<std::size_t>(w)] - (a.owner == w ? 1 : 0);
    };
    if (others_at(e.u) == 0 && others_at(e.v) == 0 && !a.picked) report.abc_implies_pick = false;
  }
  return report;
}

}  // namespace crs
