// Copyright 2026 The predbench Authors.
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

#include "predbench/bench_store.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "predbench/error.hpp"
#include "predbench/parallel.hpp"
#include "predbench/random.hpp"
#include "predbench/text.hpp"

namespace predbench {

namespace {

constexpr std::string_view kMagic = "predbench-store";

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> split_doubles(std::string_view s) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(parse_double(part));
  return out;
}

// Reads "<key> <value>" and returns value.
std::string_view expect_line(std::string_view line, std::string_view key) {
  if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
      line[key.size()] != ' ') {
    throw FormatError("store header: expected '" + std::string(key) + "', got '" +
                      std::string(line) + "'");
  }
  return line.substr(key.size() + 1);
}

}  // namespace

void CostModel::validate() const {
  if (!(epoch_cost > 0.0)) throw InvalidArgument("epoch cost must be positive");
  if (!(zero_cost_query >= 0.0) || !(model_query >= 0.0)) {
    throw InvalidArgument("costs must be non-negative");
  }
}

std::string CostModel::describe() const {
  return "epoch=" + format_double(epoch_cost) +
         ";zero_cost=" + format_double(zero_cost_query) +
         ";model_query=" + format_double(model_query);
}

CostModel CostModel::parse(std::string_view description) {
  CostModel c;
  for (const auto& [key, value] : parse_fields(description)) {
    if (key == "epoch") c.epoch_cost = parse_double(value);
    else if (key == "zero_cost") c.zero_cost_query = parse_double(value);
    else if (key == "model_query") c.model_query = parse_double(value);
    else throw FormatError("unknown cost field: " + key);
  }
  c.validate();
  return c;
}

std::string StoreHeader::serialize() const {
  std::ostringstream os;
  os << kMagic << ' ' << format_version << '\n'
     << "space " << space.describe() << '\n'
     << "net " << net.describe() << '\n'
     << "train " << train.describe() << '\n'
     << "dataset " << dataset.describe() << '\n'
     << "cost " << cost.describe() << '\n'
     << "seed " << seed << '\n';
  return os.str();
}

std::uint64_t StoreHeader::hash() const { return fnv1a(serialize()); }

BenchmarkRecord train_record(const StoreHeader& header, const SyntheticDataset& data,
                             const Architecture& arch) {
  const std::uint64_t idx = arch.index(header.space);
  Network net = Network::instantiate(
      header.space, arch, header.net, data.input_dim, data.num_classes,
      derive_seed(header.seed, {idx, fnv1a("init")}));
  TrainConfig cfg = header.train;
  cfg.seed = derive_seed(header.seed, {idx, fnv1a("train")});
  BenchmarkRecord rec;
  rec.arch = arch;
  rec.param_count = net.param_count();
  rec.flop_count = net.flop_count();
  rec.epoch_cost = header.cost.epoch_cost;
  rec.curve = train(net, data, cfg);
  return rec;
}

BenchmarkStore::BenchmarkStore(StoreHeader header, std::vector<BenchmarkRecord> records)
    : header_(std::move(header)), records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].arch, i).second) {
      throw FormatError("duplicate architecture in store: " + records_[i].arch.str());
    }
  }
}

BenchmarkStore BenchmarkStore::build(const StoreHeader& header,
                                     const BuildOptions& options) {
  if (options.n_archs < 1) throw InvalidArgument("n_archs must be >= 1");
  header.train.validate();
  header.cost.validate();
  if (options.n_archs > header.space.cardinality()) {
    throw DuplicateExhaustion("requested " + std::to_string(options.n_archs) +
                              " distinct architectures but the space has only " +
                              std::to_string(header.space.cardinality()));
  }
  const SyntheticDataset data = make_dataset(header.dataset);
  Rng rng(derive_seed(header.seed, {fnv1a("build")}));
  std::unordered_set<Architecture> seen;
  auto draw = [&]() -> Architecture {
    if (seen.size() >= header.space.cardinality()) {
      throw DuplicateExhaustion("search space exhausted while replacing diverged records");
    }
    while (true) {
      Architecture a = sample_uniform(header.space, rng);
      if (seen.insert(a).second) return a;
    }
  };
  std::vector<Architecture> archs;
  archs.reserve(options.n_archs);
  for (std::size_t i = 0; i < options.n_archs; ++i) archs.push_back(draw());

  std::vector<BenchmarkRecord> records(archs.size());
  std::vector<char> diverged(archs.size(), 0);
  parallel_for(archs.size(), options.threads, [&](std::size_t i) {
    try {
      records[i] = train_record(header, data, archs[i]);
    } catch (const DivergedTraining&) {
      diverged[i] = 1;
    }
  });
  for (std::size_t i = 0; i < archs.size(); ++i) {
    while (diverged[i]) {
      if (options.log) {
        options.log("skipped diverged architecture " + archs[i].str() +
                    "; drawing a replacement");
      }
      archs[i] = draw();
      try {
        records[i] = train_record(header, data, archs[i]);
        diverged[i] = 0;
      } catch (const DivergedTraining&) {
      }
    }
  }
  return BenchmarkStore(header, std::move(records));
}

std::string BenchmarkStore::serialize() const {
  std::ostringstream os;
  os << header_.serialize();
  os << "header_hash " << hex64(header_.hash()) << '\n';
  os << "records " << records_.size() << '\n';
  for (const auto& r : records_) {
    os << r.arch.str() << '\t' << r.param_count << '\t' << r.flop_count << '\t'
       << format_double(r.epoch_cost) << '\t' << join_doubles(r.curve.train_loss)
       << '\t' << join_doubles(r.curve.val_acc) << '\t'
       << join_doubles(r.curve.val_loss) << '\n';
  }
  return os.str();
}

BenchmarkStore BenchmarkStore::parse(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 9) throw FormatError("store file truncated");
  StoreHeader h;
  {
    auto magic = lines[0];
    if (magic.substr(0, kMagic.size()) != kMagic) throw FormatError("not a predbench store");
    h.format_version = static_cast<int>(parse_u64(magic.substr(kMagic.size())));
    if (h.format_version != StoreHeader::kFormatVersion) {
      throw FormatError("unsupported store format version " +
                        std::to_string(h.format_version));
    }
  }
  h.space = SearchSpace::parse(expect_line(lines[1], "space"));
  h.net = NetConfig::parse(expect_line(lines[2], "net"));
  h.train = TrainConfig::parse(expect_line(lines[3], "train"));
  h.dataset = DatasetConfig::parse(expect_line(lines[4], "dataset"));
  h.cost = CostModel::parse(expect_line(lines[5], "cost"));
  h.seed = parse_u64(expect_line(lines[6], "seed"));
  const auto stored_hash = expect_line(lines[7], "header_hash");
  if (stored_hash != hex64(h.hash())) {
    throw FormatError("store header hash mismatch: file says " +
                      std::string(stored_hash) + ", header hashes to " + hex64(h.hash()));
  }
  const std::size_t n = parse_size(expect_line(lines[8], "records"));
  if (lines.size() != 9 + n) {
    throw FormatError("store declares " + std::to_string(n) + " records but has " +
                      std::to_string(lines.size() - 9));
  }
  std::vector<BenchmarkRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto fields = split(lines[9 + i], '\t');
    if (fields.size() != 7) {
      throw FormatError("record " + std::to_string(i) + ": expected 7 fields");
    }
    BenchmarkRecord r;
    r.arch = Architecture::parse(fields[0]);
    r.arch.validate(h.space);
    r.param_count = parse_size(fields[1]);
    r.flop_count = parse_size(fields[2]);
    r.epoch_cost = parse_double(fields[3]);
    r.curve.train_loss = split_doubles(fields[4]);
    r.curve.val_acc = split_doubles(fields[5]);
    r.curve.val_loss = split_doubles(fields[6]);
    if (r.curve.epochs() != h.train.epochs || r.curve.train_loss.size() != h.train.epochs ||
        r.curve.val_loss.size() != h.train.epochs) {
      throw FormatError("record " + r.arch.str() + ": curve length != E");
    }
    if (!(r.epoch_cost > 0.0)) throw FormatError("record " + r.arch.str() + ": epoch_cost <= 0");
    records.push_back(std::move(r));
  }
  return BenchmarkStore(std::move(h), std::move(records));
}

BenchmarkStore BenchmarkStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open store file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void BenchmarkStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write store file " + path.string());
  out << serialize();
  if (!out) throw InvalidArgument("failed writing store file " + path.string());
}

const BenchmarkRecord* BenchmarkStore::find(const Architecture& arch) const {
  auto it = index_.find(arch);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const BenchmarkRecord& BenchmarkStore::at(const Architecture& arch) const {
  const BenchmarkRecord* r = find(arch);
  if (!r) throw NotFound("architecture " + arch.str() + " is not in the store");
  return *r;
}

const BenchmarkRecord& BenchmarkStore::query_full(const Architecture& arch,
                                                  BudgetAccount& account) const {
  const BenchmarkRecord& r = at(arch);
  account.charge(static_cast<double>(epochs()) * r.epoch_cost);
  return r;
}

LearningCurve BenchmarkStore::query_partial(const Architecture& arch, std::size_t k,
                                            BudgetAccount& account) const {
  const BenchmarkRecord& r = at(arch);
  LearningCurve prefix = r.curve.prefix(k);
  account.charge(static_cast<double>(k) * r.epoch_cost);
  return prefix;
}

Benchmark::Benchmark(const BenchmarkStore& store, bool on_demand)
    : store_(store), on_demand_(on_demand), dataset_(make_dataset(store.header().dataset)) {}

bool Benchmark::contains(const Architecture& arch) const {
  if (store_.find(arch)) return true;
  std::lock_guard lock(mutex_);
  return extra_.count(arch) > 0;
}

const BenchmarkRecord& Benchmark::record(const Architecture& arch) const {
  if (const BenchmarkRecord* r = store_.find(arch)) return *r;
  if (!on_demand_) throw NotFound("architecture " + arch.str() + " is not in the store");
  {
    std::lock_guard lock(mutex_);
    auto it = extra_.find(arch);
    if (it != extra_.end()) return *it->second;
  }
  // Training happens outside the lock; a concurrent duplicate computes the
  // same deterministic record and the first insert wins.
  auto rec = std::make_unique<BenchmarkRecord>(train_record(header(), dataset_, arch));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = extra_.emplace(arch, std::move(rec));
  return *it->second;
}

const BenchmarkRecord& Benchmark::query_full(const Architecture& arch,
                                             BudgetAccount& account) const {
  const BenchmarkRecord& r = record(arch);
  account.charge(static_cast<double>(epochs()) * r.epoch_cost);
  return r;
}

LearningCurve Benchmark::query_partial(const Architecture& arch, std::size_t k,
                                       BudgetAccount& account) const {
  const BenchmarkRecord& r = record(arch);
  LearningCurve prefix = r.curve.prefix(k);
  account.charge(static_cast<double>(k) * r.epoch_cost);
  return prefix;
}

std::size_t Benchmark::trained_on_demand() const {
  std::lock_guard lock(mutex_);
  return extra_.size();
}

}  // namespace predbench
