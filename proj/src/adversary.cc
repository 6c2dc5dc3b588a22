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

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

#include "crs/errors.h"
#include "crs/harness.h"
#include "crs/rng.h"

namespace crs {
namespace {

bool parse_u64(std::string_view text, std::uint64_t& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<EdgeId> complement(const Instance& instance, std::span<const EdgeId> sample) {
  std::vector<std::uint8_t> in_sample(static_cast<std::size_t>(instance.edge_count()), 0);
  for (EdgeId id : sample) {
    instance.edge(id);
    in_sample[static_cast<std::size_t>(id)] = 1;
  }
  std::vector<EdgeId> rest;
  for (EdgeId id = 0; id < instance.edge_count(); ++id) {
    if (!in_sample[static_cast<std::size_t>(id)]) rest.push_back(id);
  }
  return rest;
}

}  // namespace

AdversaryStrategy parse_adversary(std::string_view name) {
  AdversaryStrategy s;
  const auto colon = name.find(':');
  const std::string_view head = name.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? "" : name.substr(colon + 1);
  auto fail = [&]() -> AdversaryStrategy {
    throw CrsError(ErrorCode::kUnknownStrategy, fmt::format("unknown adversary '{}'", name));
  };
  if (head == "identity") {
    s.kind = AdversaryKind::kIdentity;
  } else if (head == "reverse") {
    s.kind = AdversaryKind::kReverse;
  } else if (head == "heavy-bucket-first") {
    s.kind = AdversaryKind::kHeavyBucketFirst;
  } else if (head == "light-bucket-first") {
    s.kind = AdversaryKind::kLightBucketFirst;
  } else if (head == "random-fixed") {
    s.kind = AdversaryKind::kRandomFixed;
    if (!arg.empty() && !parse_u64(arg, s.seed)) return fail();
    return s;
  } else if (head == "labeling-attack") {
    s.kind = AdversaryKind::kLabelingAttack;
  } else if (head == "target-last") {
    s.kind = AdversaryKind::kTargetLast;
    std::uint64_t target = 0;
    if (!parse_u64(arg, target)) return fail();
    s.target = static_cast<EdgeId>(target);
    return s;
  } else {
    return fail();
  }
  if (!arg.empty()) return fail();
  return s;
}

std::string adversary_name(const AdversaryStrategy& strategy) {
  switch (strategy.kind) {
    case AdversaryKind::kIdentity: return "identity";
    case AdversaryKind::kReverse: return "reverse";
    case AdversaryKind::kHeavyBucketFirst: return "heavy-bucket-first";
    case AdversaryKind::kLightBucketFirst: return "light-bucket-first";
    case AdversaryKind::kRandomFixed: return fmt::format("random-fixed:{}", strategy.seed);
    case AdversaryKind::kLabelingAttack: return "labeling-attack";
    case AdversaryKind::kTargetLast: return fmt::format("target-last:{}", strategy.target);
  }
  return "unknown";
}

std::vector<AdversaryStrategy> standard_adversaries() {
  return {
      {AdversaryKind::kIdentity},
      {AdversaryKind::kReverse},
      {AdversaryKind::kHeavyBucketFirst},
      {AdversaryKind::kLightBucketFirst},
      {AdversaryKind::kRandomFixed, 17},
      {AdversaryKind::kLabelingAttack},
  };
}

std::vector<EdgeId> adversary_order(const AdversaryStrategy& strategy, const Instance& instance,
                                    std::span<const EdgeId> sample, const Labeling& labeling) {
  std::vector<EdgeId> rest = complement(instance, sample);
  switch (strategy.kind) {
    case AdversaryKind::kIdentity:
      return rest;
    case AdversaryKind::kReverse:
      std::reverse(rest.begin(), rest.end());
      return rest;
    case AdversaryKind::kTargetLast: {
      auto it = std::find(rest.begin(), rest.end(), strategy.target);
      if (it != rest.end()) std::rotate(it, it + 1, rest.end());
      return rest;
    }
    case AdversaryKind::kRandomFixed: {
      Rng rng(combine_seed(strategy.seed, static_cast<std::uint64_t>(CoinTag::kAdversary)));
      const std::vector<EdgeId> perm = random_arrival(instance.edge_count(), rng);
      std::vector<std::int32_t> slot(perm.size());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        slot[static_cast<std::size_t>(perm[i])] = static_cast<std::int32_t>(i);
      }
      std::sort(rest.begin(), rest.end(), [&](EdgeId a, EdgeId b) {
        return slot[static_cast<std::size_t>(a)] < slot[static_cast<std::size_t>(b)];
      });
      return rest;
    }
    case AdversaryKind::kHeavyBucketFirst:
    case AdversaryKind::kLightBucketFirst:
    case AdversaryKind::kLabelingAttack:
      break;
  }

  const Ordering order = sample_order(instance, sample, labeling);
  std::vector<std::int64_t> sampled_load(static_cast<std::size_t>(instance.vertex_count()), 0);
  for (EdgeId id : sample) {
    const EdgeRecord& e = instance.edge(id);
    sampled_load[static_cast<std::size_t>(e.u)] += e.x.units();
    sampled_load[static_cast<std::size_t>(e.v)] += e.x.units();
  }
  auto owner = [&](EdgeId id) { return bucket_owner(order, instance.edge(id)); };

  if (strategy.kind == AdversaryKind::kLabelingAttack) {
    std::vector<std::int64_t> bucket_load(static_cast<std::size_t>(instance.vertex_count()), 0);
    for (EdgeId id : rest) bucket_load[static_cast<std::size_t>(owner(id))] += instance.x(id).units();
    std::stable_sort(rest.begin(), rest.end(), [&](EdgeId a, EdgeId b) {
      const VertexId oa = owner(a);
      const VertexId ob = owner(b);
      const auto la = bucket_load[static_cast<std::size_t>(oa)];
      const auto lb = bucket_load[static_cast<std::size_t>(ob)];
      if (la != lb) return la > lb;
      if (oa != ob) return order.position(oa) < order.position(ob);
      // Light edges last; among equals the lowest id arrives last.
      if (instance.x(a) != instance.x(b)) return instance.x(a) > instance.x(b);
      return a > b;
    });
    return rest;
  }

  // Only the order inside a bucket changes which edge wins it, so each
  // strategy also fixes its own in-bucket order: heavy edges first (ties by
  // id) or light edges first (ties by reverse id).
  const bool heavy = strategy.kind == AdversaryKind::kHeavyBucketFirst;
  std::stable_sort(rest.begin(), rest.end(), [&](EdgeId a, EdgeId b) {
    const VertexId oa = owner(a);
    const VertexId ob = owner(b);
    const auto la = sampled_load[static_cast<std::size_t>(oa)];
    const auto lb = sampled_load[static_cast<std::size_t>(ob)];
    if (la != lb) return heavy ? la > lb : la < lb;
    if (oa != ob) return order.position(oa) < order.position(ob);
    if (instance.x(a) != instance.x(b)) {
      return heavy ? instance.x(a) > instance.x(b) : instance.x(a) < instance.x(b);
    }
    return heavy ? a < b : a > b;
  });
  return rest;
}

}  // namespace crs
