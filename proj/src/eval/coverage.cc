// Copyright 2026 The QMixLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmixlab/eval/coverage.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "qmixlab/common/error.h"
#include "qmixlab/common/io.h"
#include "qmixlab/common/parallel.h"
#include "qmixlab/common/random.h"
#include "qmixlab/qlearn/train.h"

namespace qmixlab::eval {
namespace {

std::string Real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// "w0,w1,..." in six significant digits, quoted for the CSV.
std::string MixtureField(const qmix::MixedStrategy& sigma) {
  std::string out = "\"";
  for (int k = 0; k < sigma.size(); ++k) {
    if (k > 0) out += ',';
    out += Real(sigma.weight(k));
  }
  return out + "\"";
}

// Splits one CSV line, honoring double quotes.
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw CorruptDocument("csv: unterminated quote");
  return fields;
}

std::vector<std::vector<std::string>> ReadRows(const std::string& text,
                                               const std::string& header,
                                               std::size_t width) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw CorruptDocument("csv: expected header '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(SplitCsv(line));
    if (rows.back().size() != width) {
      throw CorruptDocument("csv: row " + std::to_string(rows.size()) +
                            " has " + std::to_string(rows.back().size()) +
                            " fields, expected " + std::to_string(width));
    }
  }
  return rows;
}

double ParseReal(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw CorruptDocument("csv: bad number '" + s + "'");
    return x;
  } catch (const std::logic_error&) {
    throw CorruptDocument("csv: bad number '" + s + "'");
  }
}

void Aggregate(CoverageCell& cell) {
  const std::size_t n = cell.seed_means.size();
  if (n >= 2) {
    const ConfidenceInterval ci = MakeConfidenceInterval(cell.seed_means);
    cell.mean = ci.mean;
    cell.half_width = ci.half_width;
  } else {
    cell.mean = n == 1 ? cell.seed_means[0] : 0.0;
    cell.half_width = 0.0;
  }
}

void AddCompositions(int k_left, int units_left, std::vector<int>& prefix,
                     std::vector<std::vector<int>>& out) {
  if (k_left == 1) {
    prefix.push_back(units_left);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int u = 0; u <= units_left; ++u) {
    prefix.push_back(u);
    AddCompositions(k_left - 1, units_left - u, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MixtureGrid EnumerateMixtures(const std::vector<std::string>& ids,
                              double step) {
  if (ids.empty()) throw InvalidArgument("mixture grid: no opponents");
  if (!(step > 0.0 && step <= 1.0)) {
    throw InvalidArgument("mixture grid: step must be in (0, 1]");
  }
  const double inverse = 1.0 / step;
  const long units = std::lround(inverse);
  if (std::abs(inverse - static_cast<double>(units)) > 1e-9) {
    throw InvalidArgument("mixture grid: 1/step = " + Real(inverse) +
                          " is not an integer");
  }
  std::vector<std::vector<int>> compositions;
  std::vector<int> prefix;
  AddCompositions(static_cast<int>(ids.size()), static_cast<int>(units), prefix,
                  compositions);
  MixtureGrid grid;
  grid.reserve(compositions.size());
  for (const std::vector<int>& c : compositions) {
    std::vector<double> w(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      w[k] = static_cast<double>(c[k]) / static_cast<double>(units);
    }
    grid.emplace_back(ids, std::move(w));
  }
  return grid;
}

uint64_t MixtureCount(int k, int units) {
  // C(units + k - 1, k - 1), built incrementally to stay exact.
  uint64_t c = 1;
  for (int i = 1; i < k; ++i) {
    c = c * static_cast<uint64_t>(units + i) / static_cast<uint64_t>(i);
  }
  return c;
}

double StudentT95(int n) {
  if (n < 2) throw InvalidArgument("confidence interval: need at least 2 samples");
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(dist, 0.975);
  return std::round(t * 1000.0) / 1000.0;
}

ConfidenceInterval MakeConfidenceInterval(const std::vector<double>& means,
                                          double t) {
  const int n = static_cast<int>(means.size());
  if (n < 2) {
    throw InvalidArgument("confidence interval: need at least 2 samples, got " +
                          std::to_string(n));
  }
  ConfidenceInterval ci;
  ci.n = n;
  ci.t = t > 0.0 ? t : StudentT95(n);
  if (std::all_of(means.begin(), means.end(),
                  [&means](double x) { return x == means.front(); })) {
    // Exact, without summation round-off.
    ci.mean = means.front();
    return ci;
  }
  ci.mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : means) ss += (x - ci.mean) * (x - ci.mean);
  const double s = std::sqrt(ss / (n - 1));
  ci.half_width = ci.t * s / std::sqrt(static_cast<double>(n));
  return ci;
}

std::vector<int> CoverageReport::SortedOrder(int method) const {
  const std::vector<CoverageCell>& row = cells[static_cast<std::size_t>(method)];
  std::vector<int> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&row](int a, int b) {
    return row[static_cast<std::size_t>(a)].mean >
           row[static_cast<std::size_t>(b)].mean;
  });
  return order;
}

double CoverageReport::GridAverage(int method) const {
  const std::vector<CoverageCell>& row = cells[static_cast<std::size_t>(method)];
  if (row.empty()) return 0.0;
  double total = 0.0;
  for (const CoverageCell& c : row) total += c.mean;
  return total / static_cast<double>(row.size());
}

uint64_t SweepTaskSeed(uint64_t seed, int mixture_index) {
  return DeriveSeed(seed, {0xc0ffee, static_cast<uint64_t>(mixture_index)});
}

CoverageReport CoverageSweep(const envs::Environment& env,
                             const std::vector<SweepMethod>& methods,
                             const envs::OpponentPool& pool,
                             const MixtureGrid& grid,
                             const SweepConfig& config) {
  if (config.episodes < 1) throw InvalidArgument("sweep: episodes must be >= 1");
  if (config.seeds.empty()) throw InvalidArgument("sweep: no seeds");
  if (methods.empty()) throw InvalidArgument("sweep: no methods");
  const std::size_t n_seeds = config.seeds.size();
  // Fail before any simulation if a method cannot play this environment.
  {
    auto probe = env.Clone();
    probe->Reset(0);
    const envs::Observation obs = probe->Observe(0);
    for (const SweepMethod& m : methods) {
      std::vector<std::shared_ptr<const qlearn::Agent>> probes = m.agents;
      if (m.factory) {
        if (grid.empty()) continue;
        probes = {m.factory(0, grid.front())};
      } else if (m.agents.size() != 1 && m.agents.size() != n_seeds) {
        throw InvalidArgument("sweep: method '" + m.name + "' has " +
                              std::to_string(m.agents.size()) +
                              " agents for " + std::to_string(n_seeds) +
                              " seeds");
      }
      for (const auto& agent : probes) {
        if (!agent) throw InvalidArgument("sweep: method '" + m.name + "' has no agent");
        try {
          const int a = agent->Act(obs, qlearn::EpisodeContext{0});
          if (a < 0 || a >= env.num_actions()) {
            throw InvalidArgument("action " + std::to_string(a) + " out of range");
          }
        } catch (const Error& e) {
          throw InvalidArgument("sweep: method '" + m.name +
                                "' does not fit environment '" + env.name() +
                                "': " + e.what());
        }
      }
    }
  }
  for (const qmix::MixedStrategy& sigma : grid) {
    if (sigma.ids() != pool.ids) {
      throw InvalidArgument("sweep: mixture ids do not match the opponent pool");
    }
  }

  CoverageReport report;
  for (const SweepMethod& m : methods) report.methods.push_back(m.name);
  report.grid = grid;
  report.seeds = config.seeds;
  report.cells.assign(methods.size(),
                      std::vector<CoverageCell>(grid.size(), CoverageCell{}));
  const std::size_t per_seed = methods.size() * grid.size();
  std::vector<double> results(n_seeds * per_seed, 0.0);
  ParallelFor(
      results.size(),
      [&](std::size_t task) {
        const std::size_t s = task / per_seed;
        const std::size_t m = (task % per_seed) / grid.size();
        const std::size_t j = task % grid.size();
        const SweepMethod& method = methods[m];
        const std::shared_ptr<const qlearn::Agent> agent =
            method.factory ? method.factory(s, grid[j])
                           : method.agents[method.agents.size() == 1 ? 0 : s];
        results[task] =
            qlearn::EvaluateAgent(env, *agent, pool, grid[j], config.episodes,
                                  SweepTaskSeed(config.seeds[s],
                                                static_cast<int>(j)))
                .mean;
      },
      config.threads);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CoverageCell& cell = report.cells[m][j];
      for (std::size_t s = 0; s < n_seeds; ++s) {
        cell.seed_means.push_back(results[s * per_seed + m * grid.size() + j]);
      }
      Aggregate(cell);
    }
  }
  return report;
}

std::string PerSeedCsv(const CoverageReport& report) {
  std::string out = "method,mixture,seed,mean_return\n";
  for (std::size_t m = 0; m < report.methods.size(); ++m) {
    for (std::size_t j = 0; j < report.grid.size(); ++j) {
      const std::string mix = MixtureField(report.grid[j]);
      for (std::size_t s = 0; s < report.seeds.size(); ++s) {
        out += report.methods[m] + "," + mix + "," +
               std::to_string(report.seeds[s]) + "," +
               Real(report.cells[m][j].seed_means[s]) + "\n";
      }
    }
  }
  return out;
}

std::string SortedCurveCsv(const CoverageReport& report) {
  std::string out = "method,rank,mixture,aggregate_mean,ci_halfwidth\n";
  for (std::size_t m = 0; m < report.methods.size(); ++m) {
    const std::vector<int> order = report.SortedOrder(static_cast<int>(m));
    for (std::size_t r = 0; r < order.size(); ++r) {
      const CoverageCell& c = report.cells[m][static_cast<std::size_t>(order[r])];
      out += report.methods[m] + "," + std::to_string(r + 1) + "," +
             MixtureField(report.grid[static_cast<std::size_t>(order[r])]) +
             "," + Real(c.mean) + "," + Real(c.half_width) + "\n";
    }
  }
  return out;
}

void EmitReport(const CoverageReport& report, const std::string& prefix,
                bool force) {
  WriteFileAtomic(prefix + "_per_seed.csv", PerSeedCsv(report), force);
  WriteFileAtomic(prefix + "_sorted.csv", SortedCurveCsv(report), force);
}

CoverageReport ParsePerSeedCsv(const std::string& text,
                               const std::vector<std::string>& ids) {
  const auto rows = ReadRows(text, "method,mixture,seed,mean_return", 4);
  CoverageReport report;
  std::map<std::string, std::size_t> method_index, mixture_index;
  std::map<uint64_t, std::size_t> seed_index;
  // (method, mixture, seed) -> value, kept in first-seen order.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, double>> values;
  for (const auto& row : rows) {
    auto [mi, new_m] = method_index.emplace(row[0], report.methods.size());
    if (new_m) report.methods.push_back(row[0]);
    auto [ji, new_j] = mixture_index.emplace(row[1], report.grid.size());
    if (new_j) {
      try {
        report.grid.push_back(qmix::MixedStrategy::Parse(row[1], ids));
      } catch (const InvalidArgument& e) {
        throw CorruptDocument(std::string("csv: ") + e.what());
      }
    }
    uint64_t seed = 0;
    try {
      seed = std::stoull(row[2]);
    } catch (const std::logic_error&) {
      throw CorruptDocument("csv: bad seed '" + row[2] + "'");
    }
    auto [si, new_s] = seed_index.emplace(seed, report.seeds.size());
    if (new_s) report.seeds.push_back(seed);
    values.emplace_back(mi->second, ji->second, si->second, ParseReal(row[3]));
  }
  report.cells.assign(report.methods.size(),
                      std::vector<CoverageCell>(report.grid.size()));
  for (auto& row : report.cells) {
    for (CoverageCell& c : row) c.seed_means.assign(report.seeds.size(), NAN);
  }
  for (const auto& [m, j, s, v] : values) report.cells[m][j].seed_means[s] = v;
  for (auto& row : report.cells) {
    for (CoverageCell& c : row) {
      for (double v : c.seed_means) {
        if (std::isnan(v)) throw CorruptDocument("csv: missing seed entries");
      }
      Aggregate(c);
    }
  }
  return report;
}

std::vector<SortedRow> ParseSortedCurveCsv(const std::string& text) {
  const auto rows =
      ReadRows(text, "method,rank,mixture,aggregate_mean,ci_halfwidth", 5);
  std::vector<SortedRow> out;
  for (const auto& row : rows) {
    SortedRow r;
    r.method = row[0];
    try {
      r.rank = std::stoi(row[1]);
    } catch (const std::logic_error&) {
      throw CorruptDocument("csv: bad rank '" + row[1] + "'");
    }
    r.mixture = row[2];
    r.aggregate_mean = ParseReal(row[3]);
    r.ci_halfwidth = ParseReal(row[4]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qmixlab::eval
