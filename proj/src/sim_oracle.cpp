#include "mmaprel/sim_oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace mmaprel {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum MacroState { OV = 0, ONV = 1, MRF = 2, MNRF = 3, MCR = 4, MPM = 5 };

struct Counters {
  std::array<double, 6> occ{};
  double rf = 0, nrf = 0, cr = 0, pm = 0, r = 0, nu = 0, nvp = 0;
  double reward = 0;  // accumulated net reward incl. fixed event costs
  double span = 0;    // measured time / periods
};

struct RepResult {
  std::array<double, 6> occ{};
  double availability = 0;
  EventRates rates;
  double profit_rate = 0;
};

class Sim {
 public:
  Sim(const SystemModel& mo, const EconomicParameters& econ)
      : mo_(mo), econ_(econ), m_(mo.m()), t_(mo.t()), d_(mo.d()), v_(mo.v()) {
    level_of_.resize(m_);
    int phase = 0;
    for (size_t k = 0; k < mo.levels.size(); ++k)
      for (int i = 0; i < mo.levels[k]; ++i) level_of_[phase++] = int(k) + 1;
  }

  RepResult run(std::uint64_t seed, int rep, double horizon, double warmup) const {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(0x5151ULL + rep)));
    Counters c;
    if (mo_.time_mode == TimeMode::Continuous) {
      run_continuous(rng, horizon, warmup, c);
    } else {
      // horizon/warmup are time; one period covers `step` time units
      double h = mo_.step > 0 ? mo_.step : 1.0;
      run_discrete(rng, llround(horizon / h), llround(warmup / h), c);
    }

    RepResult out;
    for (int s = 0; s < 6; ++s) out.occ[s] = c.occ[s] / c.span;
    out.availability = out.occ[OV] + out.occ[ONV];
    out.rates.rf = c.rf / c.span;
    out.rates.nrf = c.nrf / c.span;
    out.rates.cr = c.cr / c.span;
    out.rates.pm = c.pm / c.span;
    out.rates.r = c.r / c.span;
    out.rates.nu = c.nu / c.span;
    out.rates.nvp = c.nvp / c.span;
    out.profit_rate = c.reward / c.span;
    return out;
  }

 private:
  struct State {
    int macro = OV;
    int i = 0;       // internal phase (OV/ONV)
    int j = 0;       // shock clock phase
    int u = 0;       // damage state (OV/ONV)
    int s = 0;       // vacation phase (OV/MRF/MNRF)
    int rph = 0;     // repair phase (MCR/MPM)
  };

  const SystemModel& mo_;
  const EconomicParameters& econ_;
  Eigen::Index m_, t_, d_, v_;
  std::vector<int> level_of_;

  template <typename Rng>
  static int pick_row(const RowVector& probs, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double x = unit(rng), acc = 0;
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
      acc += probs(k);
      if (x < acc) return int(k);
    }
    return int(probs.size()) - 1;
  }

  template <typename Rng>
  int sample_init(const RowVector& init, Rng& rng) const {
    return pick_row(init, rng);
  }

  double cost_rate(const State& st) const {
    switch (st.macro) {
      case OV:
        return econ_.gross_benefit - econ_.vacation_cost -
               econ_.level_costs[st.i] - econ_.damage_costs[st.u];
      case ONV:
        return econ_.gross_benefit - econ_.presence_cost -
               econ_.level_costs[st.i] - econ_.damage_costs[st.u];
      case MRF:
      case MNRF:
        return -(econ_.downtime_cost + econ_.vacation_cost);
      case MCR:
        return -(econ_.downtime_cost + econ_.presence_cost) -
               econ_.repair_phase_costs[st.rph];
      default:
        return -(econ_.downtime_cost + econ_.presence_cost) -
               econ_.pm_phase_costs[st.rph];
    }
  }

  template <typename Rng>
  void renew_unit(State& st, Rng& rng) const {
    st.i = sample_init(mo_.alpha, rng);
    st.u = sample_init(mo_.omega, rng);
  }

  template <typename Rng>
  void new_vacation(State& st, Rng& rng) const {
    st.s = sample_init(mo_.nu, rng);
  }

  // --- continuous-time engine: competing exponential clocks -------------

  template <typename Rng>
  void run_continuous(Rng& rng, double horizon, double warmup, Counters& c) const {
    State st;
    st.i = sample_init(mo_.alpha, rng);
    st.j = sample_init(embedded_stationary(mo_.shock_clock_cont()), rng);
    st.u = sample_init(mo_.omega, rng);
    st.s = sample_init(mo_.nu, rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    const Vector Tr0 = mo_.T_r0, Tnr0 = mo_.T_nr0, L0 = mo_.L0(), V0 = mo_.V0();
    const Vector S10 = mo_.S1_0(), S20 = mo_.S2_0(), C0 = mo_.C0();

    double now = 0;
    c.span = horizon - warmup;
    auto credit = [&](double from, double to, const State& s2) {
      double a = std::max(from, warmup), b = to;
      if (b <= a) return;
      c.occ[s2.macro] += b - a;
      c.reward += (b - a) * cost_rate(s2);
    };
    while (now < horizon) {
      // collect active clocks: (rate, tag, index)
      struct Clock {
        double rate;
        int tag;  // 0 internal move, 1 T_r0, 2 T_nr0, 3 shock, 4 vac move,
                  // 5 vac end, 6 repair move, 7 repair end
        int to;
      };
      std::vector<Clock> clocks;
      clocks.reserve(16);
      double total = 0;
      auto add = [&](double rate, int tag, int to) {
        if (rate > 0) {
          clocks.push_back({rate, tag, to});
          total += rate;
        }
      };
      const bool op = st.macro == OV || st.macro == ONV;
      if (op) {
        for (Eigen::Index k = 0; k < m_; ++k)
          if (k != st.i) add(mo_.T(st.i, k), 0, int(k));
        add(Tr0(st.i), 1, 0);
        add(Tnr0(st.i), 2, 0);
      }
      for (Eigen::Index k = 0; k < t_; ++k)
        if (k != st.j) add(mo_.L(st.j, k), 8, int(k));
      add(L0(st.j), 3, 0);
      if (st.macro == OV || st.macro == MRF || st.macro == MNRF) {
        for (Eigen::Index k = 0; k < v_; ++k)
          if (k != st.s) add(mo_.V(st.s, k), 4, int(k));
        add(V0(st.s), 5, 0);
      }
      if (st.macro == MCR) {
        for (Eigen::Index k = 0; k < mo_.m1(); ++k)
          if (k != st.rph) add(mo_.S1(st.rph, k), 6, int(k));
        add(S10(st.rph), 7, 0);
      }
      if (st.macro == MPM) {
        for (Eigen::Index k = 0; k < mo_.m2(); ++k)
          if (k != st.rph) add(mo_.S2(st.rph, k), 6, int(k));
        add(S20(st.rph), 7, 0);
      }

      double dt = expo(rng) / total;
      double next = now + dt;
      if (next >= horizon) {
        credit(now, horizon, st);
        break;
      }
      credit(now, next, st);
      now = next;

      double x = unit(rng) * total;
      Clock chosen = clocks.back();
      for (const auto& ck : clocks) {
        if (x < ck.rate) {
          chosen = ck;
          break;
        }
        x -= ck.rate;
      }

      switch (chosen.tag) {
        case 0:  // internal move
          st.i = chosen.to;
          if (st.macro == ONV && level_of_[st.i] == mo_.K()) start_pm(st, rng, c, now, warmup);
          break;
        case 1:  // repairable internal failure
          on_rf(st, rng, c, now, warmup);
          break;
        case 2:  // non-repairable internal failure
          on_nrf(st, rng, c, now, warmup);
          break;
        case 8:  // shock clock move
          st.j = chosen.to;
          break;
        case 3: {  // shock fires
          st.j = sample_init(mo_.gamma, rng);
          if (!op) break;
          if (unit(rng) < mo_.omega0) {
            on_nrf(st, rng, c, now, warmup);
            break;
          }
          RowVector drow(d_ + 1);
          drow.head(d_) = mo_.C.row(st.u);
          drow(d_) = C0(st.u);
          int dn = pick_row(drow, rng);
          if (dn == d_) {
            on_nrf(st, rng, c, now, warmup);
            break;
          }
          st.u = dn;
          RowVector wrow(m_ + 2);
          wrow.head(m_) = mo_.W.row(st.i);
          wrow(m_) = mo_.W_r0(st.i);
          wrow(m_ + 1) = mo_.W_nr0(st.i);
          int wn = pick_row(wrow, rng);
          if (wn == m_)
            on_rf(st, rng, c, now, warmup);
          else if (wn == m_ + 1)
            on_nrf(st, rng, c, now, warmup);
          else {
            st.i = wn;
            if (st.macro == ONV && level_of_[st.i] == mo_.K())
              start_pm(st, rng, c, now, warmup);
          }
          break;
        }
        case 4:
          st.s = chosen.to;
          break;
        case 5: {  // repairperson returns
          count_at(&c.r, econ_.return_cost, c, now, warmup);
          if (st.macro == MRF) {
            count_at(&c.cr, econ_.fixed_cr, c, now, warmup);
            st.macro = MCR;
            st.rph = sample_init(mo_.beta1, rng);
          } else if (st.macro == MNRF) {
            count_at(&c.nu, econ_.unit_cost, c, now, warmup);
            renew_unit(st, rng);
            st.macro = OV;
            new_vacation(st, rng);
          } else {  // OV
            if (level_of_[st.i] == mo_.K()) {
              count_at(&c.pm, econ_.fixed_pm, c, now, warmup);
              st.macro = MPM;
              st.rph = sample_init(mo_.beta2, rng);
            } else {
              double pk = mo_.p[level_of_[st.i] - 1];
              if (unit(rng) < pk) {
                count_at(&c.nvp, 0.0, c, now, warmup);
                new_vacation(st, rng);
              } else {
                st.macro = ONV;
              }
            }
          }
          break;
        }
        case 6:
          st.rph = chosen.to;
          break;
        case 7:  // repair / maintenance complete
          renew_unit(st, rng);
          st.macro = OV;
          new_vacation(st, rng);
          break;
      }
    }
  }

  void count_at(double* ctr, double fixed, Counters& c, double now, double warmup) const {
    if (now >= warmup) {
      *ctr += 1;
      c.reward -= fixed;
    }
  }

  template <typename Rng>
  void on_rf(State& st, Rng& rng, Counters& c, double now, double warmup) const {
    count_at(&c.rf, 0.0, c, now, warmup);
    if (st.macro == ONV) {
      count_at(&c.cr, econ_.fixed_cr, c, now, warmup);
      st.macro = MCR;
      st.rph = sample_init(mo_.beta1, rng);
    } else {
      st.macro = MRF;  // wait for the repairperson
    }
  }

  template <typename Rng>
  void on_nrf(State& st, Rng& rng, Counters& c, double now, double warmup) const {
    count_at(&c.nrf, 0.0, c, now, warmup);
    if (st.macro == ONV) {
      count_at(&c.nu, econ_.unit_cost, c, now, warmup);
      renew_unit(st, rng);
      st.macro = OV;
      new_vacation(st, rng);
    } else {
      st.macro = MNRF;
    }
  }

  template <typename Rng>
  void start_pm(State& st, Rng& rng, Counters& c, double now, double warmup) const {
    count_at(&c.pm, econ_.fixed_pm, c, now, warmup);
    st.macro = MPM;
    st.rph = sample_init(mo_.beta2, rng);
  }

  // --- discrete-time engine: period-by-period outcome tree --------------

  template <typename Rng>
  void run_discrete(Rng& rng, long long horizon, long long warmup, Counters& c) const {
    State st;
    st.i = sample_init(mo_.alpha, rng);
    st.j = sample_init(embedded_stationary(mo_.shock_clock_disc()), rng);
    st.u = sample_init(mo_.omega, rng);
    st.s = sample_init(mo_.nu, rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vector Tr0 = mo_.T_r0, Tnr0 = mo_.T_nr0, L0 = mo_.L0(), V0 = mo_.V0();
    const Vector S10 = mo_.S1_0(), S20 = mo_.S2_0(), C0 = mo_.C0();
    c.span = double(horizon - warmup);

    // flattened cumulative-probability rows so the hot loop never allocates
    auto build = [](const Matrix& a, std::initializer_list<const Vector*> exits) {
      const int cols = int(a.cols()) + int(exits.size());
      std::vector<double> cum(size_t(a.rows()) * cols);
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        double acc = 0;
        double* row = cum.data() + size_t(r) * cols;
        int k = 0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) row[k++] = (acc += a(r, j));
        for (const Vector* e : exits) row[k++] = (acc += (*e)(r));
      }
      return cum;
    };
    auto draw = [](const std::vector<double>& cum, int cols, int r, double x) {
      const double* row = cum.data() + size_t(r) * cols;
      int k = 0;
      while (k + 1 < cols && x >= row[k]) ++k;
      return k;
    };
    const int lc = int(t_) + 1, mc = int(m_) + 2, vc = int(v_) + 1,
              dc = int(d_) + 1, s1c = int(mo_.S1.cols()) + 1,
              s2c = int(mo_.S2.cols()) + 1;
    const std::vector<double> lcum = build(mo_.L, {&L0});
    const std::vector<double> tcum = build(mo_.T, {&Tr0, &Tnr0});
    const std::vector<double> wcum = build(mo_.W, {&mo_.W_r0, &mo_.W_nr0});
    const std::vector<double> vcum = build(mo_.V, {&V0});
    const std::vector<double> ccum = build(mo_.C, {&C0});
    const std::vector<double> s1cum = build(mo_.S1, {&S10});
    const std::vector<double> s2cum = build(mo_.S2, {&S20});

    for (long long period = 0; period < horizon; ++period) {
      const bool counted = period >= warmup;
      if (counted) {
        c.occ[st.macro] += 1;
        c.reward += cost_rate(st);
      }
      auto count = [&](double* ctr, double fixed) {
        if (counted) {
          *ctr += 1;
          c.reward -= fixed;
        }
      };

      // shock clock always advances
      int ln = draw(lcum, lc, st.j, unit(rng));
      bool shock = ln == t_;
      st.j = shock ? sample_init(mo_.gamma, rng) : ln;

      if (st.macro == MCR || st.macro == MPM) {
        const bool corr = st.macro == MCR;
        int cols = corr ? s1c : s2c;
        int k = draw(corr ? s1cum : s2cum, cols, st.rph, unit(rng));
        if (k == cols - 1) {
          renew_unit(st, rng);
          st.macro = OV;
          new_vacation(st, rng);
        } else {
          st.rph = k;
        }
        continue;
      }

      if (st.macro == MRF || st.macro == MNRF) {
        int k = draw(vcum, vc, st.s, unit(rng));
        if (k == v_) {
          count(&c.r, econ_.return_cost);
          if (st.macro == MRF) {
            count(&c.cr, econ_.fixed_cr);
            st.macro = MCR;
            st.rph = sample_init(mo_.beta1, rng);
          } else {
            count(&c.nu, econ_.unit_cost);
            renew_unit(st, rng);
            st.macro = OV;
            new_vacation(st, rng);
          }
        } else {
          st.s = k;
        }
        continue;
      }

      // operational period: internal draw, then shock consequence
      int tn = draw(tcum, mc, st.i, unit(rng));

      int outcome = 0;  // 0 keep running, 1 repairable failure, 2 non-repairable
      int next_i = st.i;
      bool killed = false, absorbed = false;
      if (shock) {
        killed = unit(rng) < mo_.omega0;
        if (!killed) {
          int dn = draw(ccum, dc, st.u, unit(rng));
          absorbed = dn == d_;
          if (!absorbed) st.u = dn;
        }
      }
      if (killed || absorbed || tn == m_ + 1) {
        outcome = 2;
      } else if (tn == m_) {
        outcome = 1;
      } else {
        next_i = tn;
        if (shock) {  // surviving shock modifies the internal phase
          int wn = draw(wcum, mc, next_i, unit(rng));
          if (wn == m_)
            outcome = 1;
          else if (wn == m_ + 1)
            outcome = 2;
          else
            next_i = wn;
        }
      }

      bool returned = false;
      if (st.macro == OV) {
        int k = draw(vcum, vc, st.s, unit(rng));
        returned = k == v_;
        if (!returned) st.s = k;
      }

      if (outcome == 1) count(&c.rf, 0.0);
      if (outcome == 2) count(&c.nrf, 0.0);
      if (returned) count(&c.r, econ_.return_cost);

      const bool present = st.macro == ONV || returned;
      if (outcome == 2) {
        if (present) {
          count(&c.nu, econ_.unit_cost);
          renew_unit(st, rng);
          st.macro = OV;
          new_vacation(st, rng);
        } else {
          st.macro = MNRF;
        }
      } else if (outcome == 1) {
        if (present) {
          count(&c.cr, econ_.fixed_cr);
          st.macro = MCR;
          st.rph = sample_init(mo_.beta1, rng);
        } else {
          st.macro = MRF;
        }
      } else {
        st.i = next_i;
        if (present && level_of_[st.i] == mo_.K()) {
          count(&c.pm, econ_.fixed_pm);
          st.macro = MPM;
          st.rph = sample_init(mo_.beta2, rng);
        } else if (returned) {
          double pk = mo_.p[level_of_[st.i] - 1];
          if (unit(rng) < pk) {
            count(&c.nvp, 0.0);
            new_vacation(st, rng);
            st.macro = OV;
          } else {
            st.macro = ONV;
          }
        }
        // st.macro unchanged otherwise
      }
    }
  }
};

int worker_threads(int reps) {
  int threads = int(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MMAP_REL_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) threads = cap;
  }
  return std::max(1, std::min(threads, reps));
}

}  // namespace

SimEstimates simulate(const SystemModel& mo, const EconomicParameters& econ,
                      const SimConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("simulate: need replications >= 1");
  if (cfg.warmup < 0 || cfg.warmup >= cfg.horizon)
    throw std::invalid_argument("simulate: need 0 <= warmup < horizon");

  Sim sim(mo, econ);
  std::vector<RepResult> results(cfg.replications);
  const int nthreads = worker_threads(cfg.replications);
  std::vector<std::thread> pool;
  for (int w = 0; w < nthreads; ++w)
    pool.emplace_back([&, w] {
      for (int rep = w; rep < cfg.replications; rep += nthreads)
        results[rep] = sim.run(cfg.seed, rep, cfg.horizon, cfg.warmup);
    });
  for (auto& th : pool) th.join();

  SimEstimates est;
  est.replications = cfg.replications;
  auto reduce = [&](auto getter, double& mean, double& sd) {
    double acc = 0;
    for (const auto& r : results) acc += getter(r);
    mean = acc / cfg.replications;
    double var = 0;
    for (const auto& r : results) {
      double diff = getter(r) - mean;
      var += diff * diff;
    }
    sd = cfg.replications > 1 ? std::sqrt(var / (cfg.replications - 1)) : 0.0;
  };
  for (int s = 0; s < 6; ++s)
    reduce([s](const RepResult& r) { return r.occ[s]; }, est.occupancy[s],
           est.occupancy_sd[s]);
  reduce([](const RepResult& r) { return r.availability; }, est.availability,
         est.availability_sd);
  reduce([](const RepResult& r) { return r.rates.rf; }, est.rates.rf, est.rates_sd.rf);
  reduce([](const RepResult& r) { return r.rates.nrf; }, est.rates.nrf, est.rates_sd.nrf);
  reduce([](const RepResult& r) { return r.rates.cr; }, est.rates.cr, est.rates_sd.cr);
  reduce([](const RepResult& r) { return r.rates.pm; }, est.rates.pm, est.rates_sd.pm);
  reduce([](const RepResult& r) { return r.rates.r; }, est.rates.r, est.rates_sd.r);
  reduce([](const RepResult& r) { return r.rates.nu; }, est.rates.nu, est.rates_sd.nu);
  reduce([](const RepResult& r) { return r.rates.nvp; }, est.rates.nvp, est.rates_sd.nvp);
  reduce([](const RepResult& r) { return r.profit_rate; }, est.profit_rate,
         est.profit_rate_sd);
  return est;
}

CompareReport compare(const AnalyticSummary& analytic, const SimEstimates& sim,
                      double alpha) {
  if (sim.replications < 2)
    throw std::invalid_argument("compare: need at least 2 replications");

  CompareReport rep;
  auto push = [&](const std::string& name, double a, double mean, double sd) {
    CompareLine line;
    line.name = name;
    line.analytic = a;
    line.simulated = mean;
    line.stderr_ = sd / std::sqrt(double(sim.replications));
    if (line.stderr_ > 0) {
      line.z = (mean - a) / line.stderr_;
    } else {
      // zero spread across replications: the quantity is below the
      // simulator's resolution, so only flag a macroscopic disagreement
      line.z = std::abs(mean - a) < 1e-8 ? 0 : std::numeric_limits<double>::infinity();
    }
    rep.lines.push_back(line);
  };

  static const char* occ_names[6] = {"occ_Ov", "occ_Onv", "occ_RF",
                                     "occ_NRF", "occ_CR", "occ_PM"};
  for (int s = 0; s < 6; ++s)
    push(occ_names[s], analytic.occupancy[s], sim.occupancy[s], sim.occupancy_sd[s]);
  push("availability", analytic.availability, sim.availability, sim.availability_sd);
  push("psi_RF", analytic.rates.rf, sim.rates.rf, sim.rates_sd.rf);
  push("psi_NRF", analytic.rates.nrf, sim.rates.nrf, sim.rates_sd.nrf);
  push("psi_CR", analytic.rates.cr, sim.rates.cr, sim.rates_sd.cr);
  push("psi_PM", analytic.rates.pm, sim.rates.pm, sim.rates_sd.pm);
  push("psi_R", analytic.rates.r, sim.rates.r, sim.rates_sd.r);
  push("psi_NU", analytic.rates.nu, sim.rates.nu, sim.rates_sd.nu);
  push("psi_NVP", analytic.rates.nvp, sim.rates.nvp, sim.rates_sd.nvp);

  const double bonferroni = alpha / double(rep.lines.size());
  for (auto& line : rep.lines) {
    double pvalue = std::erfc(std::abs(line.z) / std::sqrt(2.0));
    line.covered = pvalue >= bonferroni;
    if (line.covered) ++rep.covered;
  }
  rep.pass = rep.covered >= int(std::ceil(0.95 * rep.lines.size()));
  return rep;
}

}  // namespace mmaprel
