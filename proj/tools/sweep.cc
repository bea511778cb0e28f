/*
Copyright 2026 The GSLR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <atomic>
#include <chrono>
#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.h"
#include "commands.h"
#include "gslr/checkpoint.h"
#include "gslr/io.h"
#include "gslr/metrics.h"

namespace gslr::cli {
namespace {

constexpr char kHeader[] =
    "cell,method,n,k,r,lambda,lr,iters,seed,psnr_db,ssim,final_loss,stop_reason,seconds";
constexpr std::size_t kColumns = 14;

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Keys of complete rows already in the file. Rows with the wrong column count
// (e.g. cut off by a crash) are ignored and their cells rerun.
std::set<std::string> ExistingCells(const std::string& path, bool* ends_with_newline) {
  std::set<std::string> done;
  *ends_with_newline = true;
  if (!std::filesystem::exists(path) || std::filesystem::file_size(path) == 0) return done;
  const std::string bytes = ReadFileBytes(path);
  *ends_with_newline = bytes.back() == '\n';
  std::istringstream in(bytes);
  std::string line;
  std::getline(in, line);
  if (line != kHeader)
    throw DataError("'" + path + "' exists but is not a sweep table from this tool");
  while (std::getline(in, line)) {
    if (in.eof() && !*ends_with_newline) break;
    const std::vector<std::string> f = SplitCsv(line);
    if (f.size() == kColumns) done.insert(f[0] + ":" + f[7]);
  }
  return done;
}

struct Cell {
  RecoveryConfig cfg;
  std::string key;
};

void AppendLine(const std::string& path, const std::string& line) {
  std::ofstream f(path, std::ios::binary | std::ios::app);
  f << line << '\n';
  f.flush();
  if (!f) throw FormatError("short write to '" + path + "'");
}

}  // namespace

void AddSweepCommand(CLI::App& app, SweepOptions& o) {
  CLI::App* s = app.add_subcommand("sweep", "grid search, one CSV row per cell");
  s->add_option("--input", o.input)->required();
  s->add_option("--mask", o.mask)->required();
  s->add_option("--truth", o.truth)->required();
  s->add_option("--out", o.out, "CSV table; existing cells are skipped")->required();
  s->add_option("--method", o.method, "gslr or ablation:<latent>:<transform>");
  s->add_option("--pattern", o.pattern, "selects the default --r set")
      ->check(CLI::IsMember({"random", "tube", "slice"}));
  s->add_option("--n", o.n, "2D primitive counts");
  s->add_option("--k", o.k, "1D primitive counts");
  s->add_option("--r", o.r, "latent depths");
  s->add_option("--lambda", o.lambda, "regularizer weights");
  s->add_option("--lr", o.lr, "learning rates");
  s->add_option("--iters", o.iters);
  s->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  AddModelFlags(s, o.flags, true);
}

int RunSweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  const Method method = ParseMethod(o.method);
  if (method.tnn) throw ConfigError("sweep runs gslr methods only");

  // Default grids are the standard search ranges for each hyperparameter.
  std::vector<std::size_t> ns = o.n, ks = o.k, rs = o.r;
  std::vector<double> lambdas = o.lambda, lrs = o.lr;
  if (ns.empty())
    for (std::size_t i = 1; i <= 9; ++i) ns.push_back(i * 10000);
  if (ks.empty())
    for (std::size_t k = 20; k <= 100; k += 5) ks.push_back(k);
  if (rs.empty()) {
    if (o.pattern == "slice")
      rs = {100, 150, 200, 250, 300};
    else
      for (std::size_t r = 15; r <= 60; r += 5) rs.push_back(r);
  }
  if (lambdas.empty()) lambdas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  if (lrs.empty()) lrs = {1e-2, 1e-3};

  const Tensor3 observed = ReadTensor(o.input);
  const Mask3 mask = ReadMask(o.mask);
  const Tensor3 truth = ReadTensor(o.truth);
  if (!mask.SameShape(observed) || !truth.SameShape(observed))
    throw DimensionError("input, mask and truth shapes differ");
  for (std::size_t p = 0; p < observed.size(); ++p) {
    const double v = observed.data()[p];
    if (mask.at(p) && !(v >= -1e-6 && v <= 1.0 + 1e-6))
      throw DataError("observed values must lie in [0, 1]; normalize the input first");
  }

  std::vector<Cell> cells;
  for (std::size_t n : ns)
    for (std::size_t k : ks)
      for (std::size_t r : rs)
        for (double lambda : lambdas)
          for (double lr : lrs) {
            ModelFlags f = o.flags;
            f.n = n;
            f.k = k;
            f.r = r;
            f.lambda = lambda;
            f.lr = lr;
            Cell c{BuildConfig(f, method, o.iters), ""};
            c.key = ConfigHashHex(c.cfg) + ":" + std::to_string(o.iters);
            cells.push_back(std::move(c));
          }

  bool ends_with_newline = true;
  const std::set<std::string> done = ExistingCells(o.out, &ends_with_newline);
  if (!std::filesystem::exists(o.out) || std::filesystem::file_size(o.out) == 0)
    AppendLine(o.out, kHeader);
  else if (!ends_with_newline)
    AppendLine(o.out, "");

  std::vector<const Cell*> todo;
  for (const Cell& c : cells)
    if (!done.count(c.key)) todo.push_back(&c);
  err << "sweep cells=" << cells.size() << " done=" << cells.size() - todo.size()
      << " todo=" << todo.size() << " jobs=" << o.jobs << "\n";

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  double best_psnr = -std::numeric_limits<double>::infinity();
  std::string best_cell;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const Cell& c = *todo[i];
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure) return;
        err << "cell " << c.key << " config " << ConfigToJson(c.cfg) << "\n";
      }
      try {
        RecoverHooks hooks;
        hooks.truth = &truth;
        const RecoveryResult r = Recover(observed, mask, c.cfg, hooks);
        double psnr = std::numeric_limits<double>::quiet_NaN(), ssim = psnr;
        if (r.report.metrics) {
          psnr = r.report.metrics->psnr_db;
          ssim = r.report.metrics->ssim;
        }
        const double loss = r.report.trace.empty() ? psnr : r.report.trace.back().loss;
        std::string reason = r.report.stop_reason;
        for (char& ch : reason)
          if (ch == ',') ch = ';';
        std::ostringstream row;
        row << c.key.substr(0, c.key.find(':')) << "," << MethodName(method) << ","
            << c.cfg.n_primitives_2d << "," << c.cfg.k_primitives_1d << ","
            << c.cfg.latent_depth << "," << FormatNumber(c.cfg.lambda) << ","
            << FormatNumber(c.cfg.base_lr) << "," << c.cfg.max_iters << "," << c.cfg.seed
            << "," << FormatNumber(psnr) << "," << FormatNumber(ssim) << ","
            << FormatNumber(loss) << "," << reason << ","
            << FormatNumber(r.report.wall_seconds);
        std::lock_guard<std::mutex> lock(mu);
        AppendLine(o.out, row.str());
        if (psnr > best_psnr) {
          best_psnr = psnr;
          best_cell = c.key;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, todo.size()));
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  out << "sweep cells=" << cells.size() << " ran=" << todo.size()
      << " skipped=" << cells.size() - todo.size();
  if (!best_cell.empty())
    out << " best_cell=" << best_cell << " best_psnr_db=" << FormatNumber(best_psnr);
  out << "\n";
  return kExitOk;
}

}  // namespace gslr::cli
