// Copyright 2026 The mrdw Authors.
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

#include "mrdw/app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "mrdw/stats.hpp"

namespace mrdw::app {

using nlohmann::json;

TrialRow make_row(long long trial_id, const std::string& config, Method method,
                  const TrialStats& stats) {
  TrialRow row;
  row.trial_id = trial_id;
  row.config = config;
  row.method = std::string(method_name(method));
  row.seed = stats.seed;
  row.n_users = static_cast<int>(stats.virtual_distance.size());
  row.common_resets = stats.common_resets;
  row.virtual_distances = stats.virtual_distance;
  row.status = std::string(status_name(stats.status));
  return row;
}

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  return out + '\n';
}

std::string csv_line(const TrialRow& row) {
  std::string distances;
  for (std::size_t i = 0; i < row.virtual_distances.size(); ++i) {
    if (i) distances += ';';
    distances += fmt::format("{:.6f}", row.virtual_distances[i]);
  }
  return fmt::format("{},{},{},{},{},{},{},{}\n", row.trial_id, row.config, row.method,
                     row.seed, row.n_users, row.common_resets, distances, row.status);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_int(const std::string& s, const std::string& column, std::size_t row) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw CsvError(fmt::format("row {}: column \"{}\" is not an integer: \"{}\"", row,
                               column, s));
  }
  return value;
}

double parse_double(const std::string& s, std::size_t row) {
  // std::from_chars for double is not available in libstdc++ 11 for all
  // targets, so go through strtod with a full-consumption check.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw CsvError(fmt::format(
        "row {}: column \"virtual_distances\" has a bad number: \"{}\"", row, s));
  }
  return v;
}

}  // namespace

std::vector<TrialRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty CSV: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split(line, ',');
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
  for (const std::string& col : kCsvColumns) {
    if (!index.count(col)) throw CsvError(fmt::format("missing column \"{}\"", col));
  }

  std::vector<TrialRow> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != header.size()) {
      throw CsvError(fmt::format("row {}: expected {} fields, found {}", row_no,
                                 header.size(), f.size()));
    }
    auto get = [&](const char* col) -> const std::string& { return f[index.at(col)]; };
    TrialRow row;
    row.trial_id = parse_int<long long>(get("trial_id"), "trial_id", row_no);
    row.config = get("config");
    row.method = get("method");
    row.seed = parse_int<std::uint64_t>(get("seed"), "seed", row_no);
    row.n_users = parse_int<int>(get("n_users"), "n_users", row_no);
    row.common_resets = parse_int<int>(get("common_resets"), "common_resets", row_no);
    if (!get("virtual_distances").empty()) {
      for (const std::string& d : split(get("virtual_distances"), ';')) {
        row.virtual_distances.push_back(parse_double(d, row_no));
      }
    }
    row.status = get("status");
    if (row.method.empty()) throw CsvError(fmt::format("row {}: empty method", row_no));
    if (row.status.empty()) throw CsvError(fmt::format("row {}: empty status", row_no));
    if (row.common_resets < 0) {
      throw CsvError(fmt::format("row {}: negative common_resets", row_no));
    }
    if (static_cast<int>(row.virtual_distances.size()) != row.n_users) {
      throw CsvError(fmt::format("row {}: {} virtual distances for n_users = {}", row_no,
                                 row.virtual_distances.size(), row.n_users));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TrialRow> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  try {
    return read_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(path.string() + ": " + e.what());
  }
}

std::vector<TrialStats> run_trials(
    const std::vector<TrialConfig>& trials, unsigned jobs,
    const std::function<void(std::size_t, const TrialStats&)>& on_done) {
  std::vector<TrialStats> results(trials.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, trials.size()));
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      results[i] = run_trial(trials[i]);
      if (on_done) {
        std::lock_guard lock(report);
        on_done(i, results[i]);
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return results;
}

json summarize_rows(const std::vector<TrialRow>& rows) {
  struct Group {
    std::string config;
    std::string method;
    std::vector<double> resets;
    int failed = 0;
  };
  std::vector<Group> groups;
  auto find = [&](const std::string& c, const std::string& m) -> Group& {
    for (Group& g : groups) {
      if (g.config == c && g.method == m) return g;
    }
    groups.push_back({c, m, {}, 0});
    return groups.back();
  };
  for (const TrialRow& r : rows) {
    Group& g = find(r.config, r.method);
    if (r.status == "ok") {
      g.resets.push_back(r.common_resets);
    } else {
      ++g.failed;
    }
  }

  json records = json::array();
  for (const Group& g : groups) {
    json rec = {{"config", g.config}, {"method", g.method},
                {"n", g.resets.size()}, {"failed", g.failed}};
    if (!g.resets.empty()) {
      const Summary s = summarize(g.resets);
      rec["mean"] = s.mean;
      rec["median"] = s.median;
      rec["q1"] = s.q1;
      rec["q3"] = s.q3;
      rec["min"] = s.min;
      rec["max"] = s.max;
    }
    rec["vs_ours"] = nullptr;
    if (g.method != "ours") {
      const Group* ours = nullptr;
      int baselines = 0;
      for (const Group& o : groups) {
        if (o.config != g.config) continue;
        if (o.method == "ours") {
          ours = &o;
        } else {
          ++baselines;
        }
      }
      if (ours && !ours->resets.empty() && !g.resets.empty()) {
        const MannWhitneyResult mw = mann_whitney_u(g.resets, ours->resets);
        rec["vs_ours"] = {{"u", mw.u_a},
                          {"u_ours", mw.u_b},
                          {"p_two_sided", mw.p_two_sided},
                          {"comparisons", baselines},
                          {"p_bonferroni", bonferroni(mw.p_two_sided, baselines)},
                          {"exact", mw.exact}};
      }
    }
    records.push_back(std::move(rec));
  }
  return {{"records", records}};
}

CompareResult run_experiment(const ExperimentSpec& spec, RoomStore& store,
                             std::ostream* progress) {
  struct Slot {
    std::string config;
    long long trial_id;
  };
  std::vector<TrialConfig> trials;
  std::vector<Slot> slots;
  for (const ConfigEntry& c : spec.configs) {
    std::vector<UserSpec> users;
    for (int u = 0; u < c.users; ++u) {
      users.push_back({c.envs[static_cast<std::size_t>(u) % c.envs.size()],
                       spec.params.speed, std::nullopt});
    }
    for (const Method m : spec.methods) {
      for (int t = 0; t < spec.trials; ++t) {
        trials.push_back(make_trial(m, users, spec.seed + static_cast<std::uint64_t>(t),
                                    spec.params, store));
        slots.push_back({c.name, static_cast<long long>(slots.size())});
      }
    }
  }

  std::size_t done = 0;
  auto on_done = [&](std::size_t, const TrialStats&) {
    ++done;
    if (progress && (done % 10 == 0 || done == trials.size())) {
      *progress << fmt::format("\r{}/{} trials", done, trials.size()) << std::flush;
    }
  };
  const std::vector<TrialStats> stats = run_trials(trials, spec.jobs, on_done);
  if (progress) *progress << '\n';

  CompareResult result;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    result.rows.push_back(
        make_row(slots[i].trial_id, slots[i].config, trials[i].method, stats[i]));
    result.wall_ms.push_back(stats[i].wall_ms);
  }
  result.summary = summarize_rows(result.rows);
  return result;
}

}  // namespace mrdw::app
