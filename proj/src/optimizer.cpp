#include "mmaprel/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mmaprel {

SystemModel instantiate(const SystemModel& tmpl, const PolicyParams& pp) {
  if (pp.V1 <= 0 || pp.V3 <= 0 || pp.V5 <= 0)
    throw std::invalid_argument("instantiate: diagonal rates must be positive");
  if (pp.V2 < 0 || pp.V2 > pp.V1 || pp.V4 < 0 || pp.V4 > pp.V3)
    throw std::invalid_argument("instantiate: off-diagonals must lie in [0, diagonal]");
  if (Eigen::Index(pp.p.size()) != Eigen::Index(tmpl.levels.size()) - 1)
    throw std::invalid_argument("instantiate: wrong number of stay probabilities");
  for (double pk : pp.p)
    if (pk < 0 || pk > 1) throw std::invalid_argument("instantiate: p outside [0,1]");

  SystemModel mo = tmpl;
  mo.nu = RowVector(3);
  mo.nu << 1, 0, 0;
  mo.V = Matrix(3, 3);
  mo.V << -pp.V1, pp.V2, 0, 0, -pp.V3, pp.V4, 0, 0, -pp.V5;
  mo.p = pp.p;
  return mo;
}

ParetoPoint evaluate(const SystemModel& tmpl, const EconomicParameters& econ,
                     const PolicyParams& pp) {
  SystemModel mo = instantiate(tmpl, pp);
  MarkedProcess proc = build_blocks(mo);
  MacroDistribution pi = stationary(proc, false);
  Vector c = cost_vector(mo, econ);
  ParetoPoint pt;
  pt.params = pp;
  pt.profit_rate = total_profit_rate(proc, pi, c, econ);
  pt.availability = availability(pi);
  return pt;
}

namespace {

// genome: log10 V1, V2/V1, log10 V3, V4/V3, log10 V5, p_1..p_{K-1}
struct Individual {
  std::vector<double> genes;
  double f1 = 0, f2 = 0;
  int rank = 0;
  double crowding = 0;
};

PolicyParams decode(const std::vector<double>& g, int np) {
  PolicyParams pp;
  pp.V1 = std::pow(10.0, g[0]);
  pp.V2 = g[1] * pp.V1;
  pp.V3 = std::pow(10.0, g[2]);
  pp.V4 = g[3] * pp.V3;
  pp.V5 = std::pow(10.0, g[4]);
  pp.p.assign(g.begin() + 5, g.begin() + 5 + np);
  return pp;
}

bool dominates(const Individual& a, const Individual& b) {
  return a.f1 >= b.f1 && a.f2 >= b.f2 && (a.f1 > b.f1 || a.f2 > b.f2);
}

void nondominated_sort(std::vector<Individual>& pop) {
  const int n = int(pop.size());
  std::vector<std::vector<int>> dominated(n);
  std::vector<int> count(n, 0);
  std::vector<std::vector<int>> fronts(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dominates(pop[i], pop[j]))
        dominated[i].push_back(j);
      else if (dominates(pop[j], pop[i]))
        ++count[i];
    }
    if (count[i] == 0) {
      pop[i].rank = 0;
      fronts[0].push_back(i);
    }
  }
  for (int f = 0; !fronts[f].empty(); ++f) {
    fronts.emplace_back();
    for (int i : fronts[f])
      for (int j : dominated[i])
        if (--count[j] == 0) {
          pop[j].rank = f + 1;
          fronts[f + 1].push_back(j);
        }
  }
}

void crowding_distance(std::vector<Individual>& pop) {
  const int n = int(pop.size());
  for (auto& ind : pop) ind.crowding = 0;
  std::vector<int> idx(n);
  int max_rank = 0;
  for (auto& ind : pop) max_rank = std::max(max_rank, ind.rank);
  for (int r = 0; r <= max_rank; ++r) {
    idx.clear();
    for (int i = 0; i < n; ++i)
      if (pop[i].rank == r) idx.push_back(i);
    if (idx.empty()) continue;
    for (int obj = 0; obj < 2; ++obj) {
      auto key = [&](int i) { return obj == 0 ? pop[i].f1 : pop[i].f2; };
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int a, int b) { return key(a) < key(b); });
      double span = key(idx.back()) - key(idx.front());
      pop[idx.front()].crowding = pop[idx.back()].crowding =
          std::numeric_limits<double>::infinity();
      if (span <= 0) continue;
      for (size_t k = 1; k + 1 < idx.size(); ++k)
        pop[idx[k]].crowding += (key(idx[k + 1]) - key(idx[k - 1])) / span;
    }
  }
}

bool crowded_less(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

}  // namespace

std::vector<ParetoPoint> pareto_front(const SystemModel& tmpl,
                                      const EconomicParameters& econ,
                                      const GAConfig& cfg) {
  const int np = int(tmpl.levels.size()) - 1;
  const int ngenes = 5 + np;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto lower = [&](int g) { return (g == 0 || g == 2 || g == 4) ? cfg.rate_log_min : 0.0; };
  auto upper = [&](int g) { return (g == 0 || g == 2 || g == 4) ? cfg.rate_log_max : 1.0; };
  auto clamp_gene = [&](int g, double x) { return std::clamp(x, lower(g), upper(g)); };

  auto try_eval = [&](Individual& ind) -> bool {
    try {
      ParetoPoint pt = evaluate(tmpl, econ, decode(ind.genes, np));
      if (!std::isfinite(pt.profit_rate) || !std::isfinite(pt.availability)) return false;
      ind.f1 = pt.profit_rate;
      ind.f2 = pt.availability;
      return true;
    } catch (const std::exception&) {
      return false;
    }
  };

  auto random_individual = [&]() {
    Individual ind;
    ind.genes.resize(ngenes);
    do {
      for (int g = 0; g < ngenes; ++g)
        ind.genes[g] = lower(g) + unit(rng) * (upper(g) - lower(g));
    } while (!try_eval(ind));
    return ind;
  };

  std::vector<Individual> pop;
  pop.reserve(cfg.population);
  for (int i = 0; i < cfg.population; ++i) pop.push_back(random_individual());
  nondominated_sort(pop);
  crowding_distance(pop);

  const double eta_c = 15.0, eta_m = 20.0;
  auto tournament = [&](const std::vector<Individual>& parents) -> const Individual& {
    std::uniform_int_distribution<int> pick(0, int(parents.size()) - 1);
    const Individual& a = parents[pick(rng)];
    const Individual& b = parents[pick(rng)];
    return crowded_less(a, b) ? a : b;
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<Individual> offspring;
    offspring.reserve(cfg.population);
    while (int(offspring.size()) < cfg.population) {
      Individual c1 = tournament(pop), c2 = tournament(pop);
      // simulated binary crossover
      if (unit(rng) < 0.9) {
        for (int g = 0; g < ngenes; ++g) {
          if (unit(rng) > 0.5) continue;
          double u = unit(rng);
          double beta = u <= 0.5 ? std::pow(2 * u, 1.0 / (eta_c + 1))
                                 : std::pow(1.0 / (2 * (1 - u)), 1.0 / (eta_c + 1));
          double x1 = c1.genes[g], x2 = c2.genes[g];
          c1.genes[g] = clamp_gene(g, 0.5 * ((1 + beta) * x1 + (1 - beta) * x2));
          c2.genes[g] = clamp_gene(g, 0.5 * ((1 - beta) * x1 + (1 + beta) * x2));
        }
      }
      // polynomial mutation
      for (Individual* child : {&c1, &c2}) {
        for (int g = 0; g < ngenes; ++g) {
          if (unit(rng) >= 1.0 / ngenes) continue;
          double u = unit(rng);
          double delta = u < 0.5 ? std::pow(2 * u, 1.0 / (eta_m + 1)) - 1
                                 : 1 - std::pow(2 * (1 - u), 1.0 / (eta_m + 1));
          child->genes[g] =
              clamp_gene(g, child->genes[g] + delta * (upper(g) - lower(g)));
        }
      }
      for (Individual* child : {&c1, &c2}) {
        if (int(offspring.size()) >= cfg.population) break;
        if (try_eval(*child))
          offspring.push_back(*child);
        else
          offspring.push_back(random_individual());
      }
    }
    pop.insert(pop.end(), offspring.begin(), offspring.end());
    nondominated_sort(pop);
    crowding_distance(pop);
    std::stable_sort(pop.begin(), pop.end(), crowded_less);
    pop.resize(cfg.population);
    nondominated_sort(pop);
    crowding_distance(pop);
  }

  std::vector<ParetoPoint> front;
  for (const auto& ind : pop)
    if (ind.rank == 0) {
      ParetoPoint pt;
      pt.params = decode(ind.genes, np);
      pt.profit_rate = ind.f1;
      pt.availability = ind.f2;
      front.push_back(pt);
    }
  // drop duplicates in objective space, keep deterministic order by f1
  std::stable_sort(front.begin(), front.end(), [](const auto& a, const auto& b) {
    return a.profit_rate > b.profit_rate;
  });
  std::vector<ParetoPoint> out;
  for (const auto& pt : front) {
    bool dup = false;
    for (const auto& q : out)
      if (std::abs(q.profit_rate - pt.profit_rate) < 1e-12 &&
          std::abs(q.availability - pt.availability) < 1e-12)
        dup = true;
    if (!dup) out.push_back(pt);
  }
  return out;
}

std::pair<double, double> ideal_point(const std::vector<ParetoPoint>& front) {
  if (front.empty()) throw std::invalid_argument("ideal_point: empty front");
  double f1 = front[0].profit_rate, f2 = front[0].availability;
  for (const auto& pt : front) {
    f1 = std::max(f1, pt.profit_rate);
    f2 = std::max(f2, pt.availability);
  }
  return {f1, f2};
}

ParetoPoint select_closest(const std::vector<ParetoPoint>& front) {
  if (front.empty()) throw std::invalid_argument("select_closest: empty front");
  double f1min = front[0].profit_rate, f1max = f1min;
  double f2min = front[0].availability, f2max = f2min;
  for (const auto& pt : front) {
    f1min = std::min(f1min, pt.profit_rate);
    f1max = std::max(f1max, pt.profit_rate);
    f2min = std::min(f2min, pt.availability);
    f2max = std::max(f2max, pt.availability);
  }
  double s1 = f1max > f1min ? f1max - f1min : 1.0;
  double s2 = f2max > f2min ? f2max - f2min : 1.0;
  const ParetoPoint* best = &front[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& pt : front) {
    double d1 = (f1max - pt.profit_rate) / s1;
    double d2 = (f2max - pt.availability) / s2;
    double d = std::hypot(d1, d2);
    bool better = d < best_d - 1e-15;
    bool tie = std::abs(d - best_d) <= 1e-15 &&
               (pt.profit_rate > best->profit_rate ||
                (pt.profit_rate == best->profit_rate &&
                 pt.availability > best->availability));
    if (better || tie) {
      best = &pt;
      best_d = d;
    }
  }
  return *best;
}

ParetoPoint select_max_profit(const std::vector<ParetoPoint>& front) {
  if (front.empty()) throw std::invalid_argument("select_max_profit: empty front");
  const ParetoPoint* best = &front[0];
  for (const auto& pt : front)
    if (pt.profit_rate > best->profit_rate) best = &pt;
  return *best;
}

ParetoPoint select_max_availability(const std::vector<ParetoPoint>& front) {
  if (front.empty()) throw std::invalid_argument("select_max_availability: empty front");
  const ParetoPoint* best = &front[0];
  for (const auto& pt : front)
    if (pt.availability > best->availability) best = &pt;
  return *best;
}

}  // namespace mmaprel
