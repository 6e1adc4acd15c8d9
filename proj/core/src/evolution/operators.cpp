#include "redahd/evolution/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "redahd/error.hpp"

namespace redahd::evolution {

std::vector<double> ration_probabilities(const std::vector<std::optional<double>>& scores,
                                         cop::Sense sense) {
  if (scores.empty()) throw ContractError("no active language reductions");
  const auto m = scores.size();
  std::vector<double> w(m, 0.0);
  std::size_t zero_cost = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!scores[j] || !std::isfinite(*scores[j])) continue;
    const double s = *scores[j];
    if (sense == cop::Sense::Minimize) {
      if (s == 0.0) {
        ++zero_cost;
        w[j] = -1.0;  // marker
      } else {
        w[j] = 1.0 / std::abs(s);
      }
    } else {
      w[j] = std::max(s, 0.0);
    }
  }
  if (zero_cost > 0) {
    for (auto& x : w) x = x < 0.0 ? 1.0 / static_cast<double>(zero_cost) : 0.0;
    return w;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) return std::vector<double>(m, 1.0 / static_cast<double>(m));
  for (auto& x : w) x /= total;
  return w;
}

namespace {

std::size_t draw(const std::vector<double>& weights, double total, util::Rng& rng) {
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    acc += weights[j];
    last = j;
    if (u < acc) return j;
  }
  return last;  // rounding at the top end
}

}  // namespace

std::vector<int> allocate_ration(const std::vector<std::optional<double>>& scores, int n,
                                 cop::Sense sense, util::Rng& rng) {
  if (n < 0) throw ContractError("negative population size");
  const auto p = ration_probabilities(scores, sense);
  std::vector<int> counts(p.size(), 0);
  for (int i = 0; i < n; ++i) ++counts[draw(p, 1.0, rng)];
  return counts;
}

std::vector<std::size_t> select_parents(const std::vector<Heuristic>& population, std::size_t count,
                                        util::Rng& rng) {
  if (population.empty()) throw ContractError("cannot select parents from an empty population");
  std::vector<std::size_t> ranked(population.size());
  std::iota(ranked.begin(), ranked.end(), 0);
  for (auto i : ranked)
    if (!population[i].ok() || !population[i].fitness)
      throw ContractError("parent pool contains unevaluated heuristic " + population[i].id);
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (*population[a].fitness != *population[b].fitness)
      return *population[a].fitness > *population[b].fitness;
    return population[a].seq < population[b].seq;
  });
  const double size = static_cast<double>(population.size());
  std::vector<double> weight(ranked.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) weight[r] = 1.0 / (static_cast<double>(r + 1) + size);

  std::vector<std::size_t> out;
  std::vector<double> remaining = weight;
  double remaining_total = std::accumulate(remaining.begin(), remaining.end(), 0.0);
  const double full_total = remaining_total;
  for (std::size_t k = 0; k < count; ++k) {
    if (k < ranked.size()) {
      const auto r = draw(remaining, remaining_total, rng);
      out.push_back(ranked[r]);
      remaining_total -= remaining[r];
      remaining[r] = 0.0;
    } else {
      out.push_back(ranked[draw(weight, full_total, rng)]);
    }
  }
  return out;
}

namespace {

bool better(const Heuristic& a, const Heuristic& b) {
  if (*a.fitness != *b.fitness) return *a.fitness > *b.fitness;
  return a.seq < b.seq;
}

bool same_fitness(const Heuristic& a, const Heuristic& b) {
  return std::abs(*a.fitness - *b.fitness) <= kDuplicateTolerance;
}

// Walks in creation order and drops any heuristic equal to an earlier kept
// one; within_lr restricts the comparison to the same LR.
std::vector<Heuristic> dedupe(std::vector<Heuristic> hs, bool within_lr) {
  std::stable_sort(hs.begin(), hs.end(),
                   [](const Heuristic& a, const Heuristic& b) { return a.seq < b.seq; });
  std::vector<Heuristic> kept;
  for (auto& h : hs) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Heuristic& k) {
      return (!within_lr || k.lr_id == h.lr_id) && same_fitness(k, h);
    });
    if (!dup) kept.push_back(std::move(h));
  }
  return kept;
}

}  // namespace

std::vector<Heuristic> manage_population(std::vector<Heuristic> candidates,
                                         const ManagementSettings& s) {
  std::erase_if(candidates, [](const Heuristic& h) { return !h.ok() || !h.fitness; });
  auto pool = dedupe(std::move(candidates), /*within_lr=*/true);
  std::sort(pool.begin(), pool.end(), better);

  if (s.generation >= s.stagnation_threshold) {
    auto distinct = dedupe(std::move(pool), /*within_lr=*/false);
    std::sort(distinct.begin(), distinct.end(), better);
    if (distinct.size() > s.capacity) distinct.resize(s.capacity);
    return distinct;
  }

  // Early stage: runs of cross-LR ties form one slot each.
  std::vector<bool> keep(pool.size(), false);
  std::size_t slots = 0;
  for (std::size_t i = 0; i < pool.size();) {
    std::size_t j = i + 1;
    while (j < pool.size() && same_fitness(pool[i], pool[j])) ++j;
    if (slots < s.capacity)
      for (std::size_t k = i; k < j; ++k) keep[k] = true;
    ++slots;
    i = j;
  }
  for (const auto& lr : s.active_lrs) {
    int have = 0;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (keep[i] && pool[i].lr_id == lr) ++have;
    for (std::size_t i = 0; i < pool.size() && have < s.l; ++i)
      if (!keep[i] && pool[i].lr_id == lr) {
        keep[i] = true;
        ++have;
      }
  }
  std::vector<Heuristic> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (keep[i]) out.push_back(std::move(pool[i]));
  return out;
}

}  // namespace redahd::evolution
