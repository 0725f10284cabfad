#include "readability/dataflow.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "readability/errors.hpp"

namespace readability::dataflow {

namespace {

std::size_t mix(std::size_t seed, std::size_t h) {
  // boost::hash_combine with a 64-bit constant
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_double(double d) {
  if (d == 0.0) d = 0.0;  // fold -0.0 onto +0.0
  return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(d));
}

const char* type_name(ColumnType t) {
  switch (t) {
    case ColumnType::Int: return "int";
    case ColumnType::Real: return "real";
    case ColumnType::Pair: return "pair";
    case ColumnType::Array: return "array";
  }
  return "?";
}

std::vector<Row> concat(std::vector<std::vector<Row>>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<Row> rows;
  rows.reserve(total);
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(rows));
  return rows;
}

struct RowHash {
  std::size_t operator()(const Row& r) const { return hash_row(r); }
};

Row project(const Row& row, const std::vector<std::size_t>& cols) {
  Row out;
  out.reserve(cols.size());
  for (auto c : cols) out.push_back(row[c]);
  return out;
}

std::size_t hash_columns(const Row& row, const std::vector<std::size_t>& cols) {
  std::size_t h = 0;
  for (auto c : cols) h = mix(h, hash_value(row[c]));
  return h;
}

// Hash-repartitions rows by the given columns. Each input partition is
// scattered by one task; buckets are then concatenated in input-partition
// order so the layout is deterministic.
std::vector<std::vector<Row>> shuffle(const Table& t, const std::vector<std::size_t>& key_cols,
                                      const ExecConfig& exec) {
  const std::size_t n_in = t.num_partitions();
  const std::size_t n_out = exec.target_partitions;
  std::vector<std::vector<std::vector<Row>>> scattered(n_in, std::vector<std::vector<Row>>(n_out));
  parallel_for(n_in, exec.workers, [&](std::size_t p) {
    for (const Row& row : t.partition(p)) {
      scattered[p][hash_columns(row, key_cols) % n_out].push_back(row);
    }
  });
  std::vector<std::vector<Row>> out(n_out);
  for (std::size_t p = 0; p < n_in; ++p) {
    for (std::size_t b = 0; b < n_out; ++b) {
      std::move(scattered[p][b].begin(), scattered[p][b].end(), std::back_inserter(out[b]));
    }
  }
  return out;
}

Schema concat_schemas(const Schema& a, const Schema& b) {
  std::vector<Column> cols(a.columns().begin(), a.columns().end());
  cols.insert(cols.end(), b.columns().begin(), b.columns().end());
  return Schema(std::move(cols));
}

}  // namespace

bool operator==(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return a.as_int() == b.as_int();
    case 1: return a.as_real() == b.as_real();
    case 2: return a.as_pair() == b.as_pair();
    default: return std::ranges::equal(a.as_array(), b.as_array());
  }
}

bool operator<(const Value& a, const Value& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  switch (a.index()) {
    case 0: return a.as_int() < b.as_int();
    case 1: return a.as_real() < b.as_real();
    case 2: return a.as_pair() < b.as_pair();
    default: {
      const auto& x = a.as_array();
      const auto& y = b.as_array();
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    }
  }
}

std::size_t hash_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return mix(1, std::hash<std::int64_t>{}(x));
        } else if constexpr (std::is_same_v<T, double>) {
          return mix(2, hash_double(x));
        } else if constexpr (std::is_same_v<T, Pair>) {
          return mix(mix(3, hash_double(x.first)), hash_double(x.second));
        } else {
          std::size_t h = 4;
          for (const auto& e : x) h = mix(h, hash_value(e));
          return h;
        }
      },
      v.base());
}

std::size_t hash_row(const Row& row) {
  std::size_t h = row.size();
  for (const auto& v : row) h = mix(h, hash_value(v));
  return h;
}

bool conforms(const Value& v, ColumnType type) {
  switch (type) {
    case ColumnType::Int: return std::holds_alternative<std::int64_t>(v.base());
    case ColumnType::Real: return std::holds_alternative<double>(v.base());
    case ColumnType::Pair: return std::holds_alternative<Pair>(v.base());
    case ColumnType::Array: return std::holds_alternative<Array>(v.base());
  }
  return false;
}

Schema::Schema(std::initializer_list<Column> columns) : Schema(std::vector<Column>(columns)) {}

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {}

std::optional<std::size_t> Schema::find(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw SchemaError("no column named '" + name + "'");
}

ExecConfig ExecConfig::with_workers(std::size_t workers) {
  return ExecConfig{workers, 4 * std::max<std::size_t>(workers, 1)};
}

void ExecConfig::validate() const {
  if (workers < 1) throw ParameterError("workers must be >= 1");
  if (target_partitions < 1) throw ParameterError("target_partitions must be >= 1");
}

void parallel_for(std::size_t tasks, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (tasks == 0) return;
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, tasks);
  if (threads == 1) {
    for (std::size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

Table::Table(Schema schema, std::vector<Row> rows, std::size_t partitions)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  if (partitions < 1) throw ParameterError("a table needs at least one partition");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& row = rows_[i];
    if (row.size() != schema_.size()) {
      throw SchemaError("row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                        " values, schema has " + std::to_string(schema_.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!conforms(row[c], schema_[c].type)) {
        throw SchemaError("row " + std::to_string(i) + ", column '" + schema_[c].name + "' is not " +
                          type_name(schema_[c].type));
      }
    }
  }
  offsets_.assign(partitions + 1, 0);
  const std::size_t n = rows_.size();
  for (std::size_t p = 0; p <= partitions; ++p) offsets_[p] = p * n / partitions;
}

Table Table::from_partitions(Schema schema, std::vector<std::vector<Row>> parts) {
  Table t;
  t.schema_ = std::move(schema);
  if (parts.empty()) parts.emplace_back();
  t.offsets_.assign(1, 0);
  for (const auto& p : parts) t.offsets_.push_back(t.offsets_.back() + p.size());
  t.rows_ = concat(parts);
  return t;
}

std::span<const Row> Table::partition(std::size_t i) const {
  return std::span<const Row>(rows_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

Table Table::repartition(std::size_t partitions) const {
  if (partitions < 1) throw ParameterError("a table needs at least one partition");
  Table t = *this;
  t.offsets_.assign(partitions + 1, 0);
  for (std::size_t p = 0; p <= partitions; ++p) t.offsets_[p] = p * rows_.size() / partitions;
  return t;
}

Table rename(const Table& t, const std::vector<std::string>& names) {
  if (names.size() != t.schema().size()) {
    throw SchemaError("rename: expected " + std::to_string(t.schema().size()) + " names, got " +
                      std::to_string(names.size()));
  }
  std::vector<Column> cols;
  for (std::size_t i = 0; i < names.size(); ++i) cols.push_back({names[i], t.schema()[i].type});
  std::vector<std::vector<Row>> parts(t.num_partitions());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    auto rows = t.partition(p);
    parts[p].assign(rows.begin(), rows.end());
  }
  return Table::from_partitions(Schema(std::move(cols)), std::move(parts));
}

Table with_column(const Table& t, Column column, const std::function<Value(const Row&)>& fn,
                  const ExecConfig& exec) {
  if (t.schema().find(column.name)) throw SchemaError("with_column: column '" + column.name + "' exists");
  std::vector<Column> cols(t.schema().columns().begin(), t.schema().columns().end());
  const ColumnType type = column.type;
  const std::string name = column.name;
  cols.push_back(std::move(column));
  std::vector<std::vector<Row>> parts(t.num_partitions());
  parallel_for(parts.size(), exec.workers, [&](std::size_t p) {
    for (const Row& row : t.partition(p)) {
      Row out = row;
      out.push_back(fn(row));
      if (!conforms(out.back(), type)) throw SchemaError("with_column: '" + name + "' value has wrong type");
      parts[p].push_back(std::move(out));
    }
  });
  return Table::from_partitions(Schema(std::move(cols)), std::move(parts));
}

Table flat_map(const Table& t, Schema out_schema,
               const std::function<void(const Row&, std::vector<Row>&)>& fn, const ExecConfig& exec) {
  std::vector<std::vector<Row>> parts(t.num_partitions());
  parallel_for(parts.size(), exec.workers, [&](std::size_t p) {
    for (const Row& row : t.partition(p)) fn(row, parts[p]);
  });
  return Table::from_partitions(std::move(out_schema), std::move(parts));
}

Table filter(const Table& t, const RowPredicate& pred, const ExecConfig& exec) {
  std::vector<std::vector<Row>> parts(t.num_partitions());
  parallel_for(parts.size(), exec.workers, [&](std::size_t p) {
    for (const Row& row : t.partition(p)) {
      if (pred(row)) parts[p].push_back(row);
    }
  });
  return Table::from_partitions(t.schema(), std::move(parts));
}

Table union_all(const Table& a, const Table& b) {
  if (!(a.schema() == b.schema())) throw SchemaError("union_all: schemas differ");
  std::vector<std::vector<Row>> parts;
  for (const Table* t : {&a, &b}) {
    for (std::size_t p = 0; p < t->num_partitions(); ++p) {
      auto rows = t->partition(p);
      parts.emplace_back(rows.begin(), rows.end());
    }
  }
  return Table::from_partitions(a.schema(), std::move(parts));
}

Table join(const Table& left, const Table& right, const JoinSpec& spec, const ExecConfig& exec) {
  std::vector<std::string> collisions;
  for (const auto& c : left.schema().columns()) {
    if (right.schema().find(c.name)) collisions.push_back(c.name);
  }
  if (!collisions.empty()) {
    std::string names;
    for (const auto& n : collisions) names += (names.empty() ? "" : ", ") + n;
    throw SchemaError("join: column name collision: " + names);
  }
  Schema out_schema = concat_schemas(left.schema(), right.schema());
  const auto& pred = spec.predicate;

  auto emit = [&](const Row& l, const Row& r, std::vector<Row>& out) {
    if (pred && !pred(l, r)) return;
    Row row;
    row.reserve(l.size() + r.size());
    row.insert(row.end(), l.begin(), l.end());
    row.insert(row.end(), r.begin(), r.end());
    out.push_back(std::move(row));
  };

  if (spec.equi_keys.empty()) {
    // Broadcast the smaller side; nested loops per partition of the larger.
    const bool broadcast_right = right.size() <= left.size();
    const Table& big = broadcast_right ? left : right;
    const auto small = (broadcast_right ? right : left).rows();
    std::vector<std::vector<Row>> parts(big.num_partitions());
    parallel_for(parts.size(), exec.workers, [&](std::size_t p) {
      for (const Row& b : big.partition(p)) {
        for (const Row& s : small) {
          if (broadcast_right) {
            emit(b, s, parts[p]);
          } else {
            emit(s, b, parts[p]);
          }
        }
      }
    });
    return Table::from_partitions(std::move(out_schema), std::move(parts));
  }

  std::vector<std::size_t> lkeys, rkeys;
  for (const auto& [l, r] : spec.equi_keys) {
    lkeys.push_back(left.schema().index_of(l));
    rkeys.push_back(right.schema().index_of(r));
  }
  auto lparts = shuffle(left, lkeys, exec);
  auto rparts = shuffle(right, rkeys, exec);
  std::vector<std::vector<Row>> parts(exec.target_partitions);
  parallel_for(parts.size(), exec.workers, [&](std::size_t p) {
    std::unordered_map<Row, std::vector<const Row*>, RowHash> build;
    for (const Row& r : rparts[p]) build[project(r, rkeys)].push_back(&r);
    for (const Row& l : lparts[p]) {
      auto it = build.find(project(l, lkeys));
      if (it == build.end()) continue;
      for (const Row* r : it->second) emit(l, *r, parts[p]);
    }
  });
  return Table::from_partitions(std::move(out_schema), std::move(parts));
}

Table explode(const Table& t, const std::string& array_column, ColumnType element_type,
              const ExecConfig& exec) {
  const std::size_t col = t.schema().index_of(array_column);
  if (t.schema()[col].type != ColumnType::Array) {
    throw SchemaError("explode: column '" + array_column + "' is not an array");
  }
  std::vector<Column> cols(t.schema().columns().begin(), t.schema().columns().end());
  cols[col].type = element_type;
  std::vector<std::vector<Row>> parts(t.num_partitions());
  parallel_for(parts.size(), exec.workers, [&](std::size_t p) {
    for (const Row& row : t.partition(p)) {
      for (const Value& element : row[col].as_array()) {
        Row out = row;
        out[col] = element;
        parts[p].push_back(std::move(out));
      }
    }
  });
  return Table::from_partitions(Schema(std::move(cols)), std::move(parts));
}

Table group_aggregate(const Table& t, const std::vector<std::string>& key_columns, const Fold& fold,
                      const ExecConfig& exec) {
  std::vector<std::size_t> keys;
  std::vector<Column> cols;
  for (const auto& k : key_columns) {
    keys.push_back(t.schema().index_of(k));
    cols.push_back(t.schema()[keys.back()]);
  }
  if (std::any_of(cols.begin(), cols.end(), [&](const Column& c) { return c.name == fold.output.name; })) {
    throw SchemaError("group_aggregate: output column '" + fold.output.name + "' collides with a key");
  }
  cols.push_back(fold.output);

  // Partial aggregation per input partition: rows become (key..., state).
  std::vector<std::vector<Row>> partial(t.num_partitions());
  parallel_for(partial.size(), exec.workers, [&](std::size_t p) {
    std::unordered_map<Row, std::size_t, RowHash> slot;
    auto& out = partial[p];
    for (const Row& row : t.partition(p)) {
      Row key = project(row, keys);
      auto [it, inserted] = slot.try_emplace(std::move(key), out.size());
      if (inserted) {
        Row entry = it->first;
        entry.push_back(fold.init());
        out.push_back(std::move(entry));
      }
      fold.step(out[it->second].back(), row);
    }
  });

  // Shuffle partial states by key, then merge.
  std::vector<std::size_t> state_keys(keys.size());
  std::iota(state_keys.begin(), state_keys.end(), 0);
  Table staged = Table::from_partitions(Schema(cols), std::move(partial));
  auto buckets = shuffle(staged, state_keys, exec);
  std::vector<std::vector<Row>> merged(buckets.size());
  parallel_for(buckets.size(), exec.workers, [&](std::size_t p) {
    std::unordered_map<Row, std::size_t, RowHash> slot;
    auto& out = merged[p];
    for (Row& row : buckets[p]) {
      Row key(row.begin(), row.end() - 1);
      auto [it, inserted] = slot.try_emplace(std::move(key), out.size());
      if (inserted) {
        out.push_back(std::move(row));
      } else {
        fold.merge(out[it->second].back(), row.back());
      }
    }
    for (Row& row : out) {
      if (fold.finish) row.back() = fold.finish(row.back());
      if (!conforms(row.back(), fold.output.type)) {
        throw SchemaError("group_aggregate: fold output '" + fold.output.name + "' has wrong type");
      }
    }
  });

  std::vector<Row> rows = concat(merged);
  std::sort(rows.begin(), rows.end(), [n = keys.size()](const Row& a, const Row& b) {
    return std::lexicographical_compare(a.begin(), a.begin() + n, b.begin(), b.begin() + n);
  });
  const std::size_t parts = std::max<std::size_t>(1, exec.target_partitions);
  std::vector<std::vector<Row>> out(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t lo = p * rows.size() / parts;
    const std::size_t hi = (p + 1) * rows.size() / parts;
    out[p].assign(std::make_move_iterator(rows.begin() + lo), std::make_move_iterator(rows.begin() + hi));
  }
  return Table::from_partitions(Schema(std::move(cols)), std::move(out));
}

Value aggregate(const Table& t, const Fold& fold, const ExecConfig& exec) {
  std::vector<Value> states(t.num_partitions());
  parallel_for(states.size(), exec.workers, [&](std::size_t p) {
    Value state = fold.init();
    for (const Row& row : t.partition(p)) fold.step(state, row);
    states[p] = std::move(state);
  });
  Value total = fold.init();
  for (const auto& s : states) fold.merge(total, s);
  return fold.finish ? fold.finish(total) : total;
}

Table distinct(const Table& t, const ExecConfig& exec) {
  std::vector<std::size_t> all(t.schema().size());
  std::iota(all.begin(), all.end(), 0);
  auto buckets = shuffle(t, all, exec);
  std::vector<std::vector<Row>> parts(buckets.size());
  parallel_for(buckets.size(), exec.workers, [&](std::size_t p) {
    std::unordered_set<Row, RowHash> seen;
    for (Row& row : buckets[p]) {
      if (seen.insert(row).second) parts[p].push_back(std::move(row));
    }
  });
  return Table::from_partitions(t.schema(), std::move(parts));
}

std::size_t count(const Table& t) { return t.size(); }

namespace folds {

Fold sum(const Schema& schema, const std::string& column, const std::string& output) {
  const std::size_t col = schema.index_of(column);
  const ColumnType type = schema[col].type;
  if (type == ColumnType::Int) {
    return Fold{
        {output, ColumnType::Int},
        [] { return Value(std::int64_t{0}); },
        [col](Value& s, const Row& r) { s = Value(s.as_int() + r[col].as_int()); },
        [](Value& s, const Value& o) { s = Value(s.as_int() + o.as_int()); },
        {},
    };
  }
  if (type != ColumnType::Real) throw SchemaError("sum: column '" + column + "' is not numeric");
  return Fold{
      {output, ColumnType::Real},
      [] { return Value(0.0); },
      [col](Value& s, const Row& r) { s = Value(s.as_real() + r[col].as_real()); },
      [](Value& s, const Value& o) { s = Value(s.as_real() + o.as_real()); },
      {},
  };
}

Fold collect_list(const Schema& schema, const std::string& column, const std::string& output) {
  const std::size_t col = schema.index_of(column);
  return Fold{
      {output, ColumnType::Array},
      [] { return Value(Array{}); },
      [col](Value& s, const Row& r) { s.as_array().push_back(r[col]); },
      [](Value& s, const Value& o) {
        auto& a = s.as_array();
        const auto& b = o.as_array();
        a.insert(a.end(), b.begin(), b.end());
      },
      {},
  };
}

Fold count_and_sum(const Schema& schema, const std::string& column, const std::string& output) {
  const std::size_t col = schema.index_of(column);
  if (schema[col].type != ColumnType::Real) throw SchemaError("count_and_sum: column '" + column + "' is not real");
  return Fold{
      {output, ColumnType::Pair},
      [] { return Value(Pair{0.0, 0.0}); },
      [col](Value& s, const Row& r) {
        const Pair& p = s.as_pair();
        s = Value(Pair{p.first + 1.0, p.second + r[col].as_real()});
      },
      [](Value& s, const Value& o) {
        const Pair& a = s.as_pair();
        const Pair& b = o.as_pair();
        s = Value(Pair{a.first + b.first, a.second + b.second});
      },
      {},
  };
}

}  // namespace folds

}  // namespace readability::dataflow
