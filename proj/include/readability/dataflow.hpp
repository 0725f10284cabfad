#pragma once

// In-process partitioned tables with DataFrame-style operators.
//
// Tables are immutable. Every operator processes input partitions as
// independent tasks on a pool of `ExecConfig::workers` threads and
// concatenates per-partition output in partition order, so results are
// deterministic for a fixed partition layout. Key-based operators
// (equi-join, group_aggregate, distinct) hash-repartition rows into
// `ExecConfig::target_partitions` buckets first; non-equi joins broadcast
// the smaller side instead of shuffling.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace readability::dataflow {

struct Pair {
  double first = 0.0;
  double second = 0.0;

  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

struct Value;
using Array = std::vector<Value>;

// A cell: integer, real, real pair (e.g. a position) or array of values.
// Holds the variant rather than deriving from it so the variant's own
// comparison operators never take part in overload resolution.
struct Value {
  using Storage = std::variant<std::int64_t, double, Pair, Array>;

  Value() = default;
  Value(std::int64_t v) : data(v) {}
  Value(int v) : data(static_cast<std::int64_t>(v)) {}
  Value(double v) : data(v) {}
  Value(Pair v) : data(v) {}
  Value(Array v) : data(std::move(v)) {}

  const Storage& base() const { return data; }
  std::size_t index() const { return data.index(); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  double as_real() const { return std::get<double>(data); }
  const Pair& as_pair() const { return std::get<Pair>(data); }
  const Array& as_array() const { return std::get<Array>(data); }
  Array& as_array() { return std::get<Array>(data); }

  // Ordered by alternative index, then by content.
  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);

  Storage data;
};

std::size_t hash_value(const Value& v);

enum class ColumnType { Int, Real, Pair, Array };

bool conforms(const Value& v, ColumnType type);

struct Column {
  std::string name;
  ColumnType type;

  friend bool operator==(const Column&, const Column&) = default;
};

class Schema {
 public:
  Schema() = default;
  Schema(std::initializer_list<Column> columns);
  explicit Schema(std::vector<Column> columns);

  std::size_t size() const { return columns_.size(); }
  const Column& operator[](std::size_t i) const { return columns_[i]; }
  std::span<const Column> columns() const { return columns_; }

  // Throws SchemaError naming the column if absent.
  std::size_t index_of(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<Column> columns_;
};

using Row = std::vector<Value>;

std::size_t hash_row(const Row& row);

struct ExecConfig {
  std::size_t workers = 1;
  std::size_t target_partitions = 4;

  // Default partitioning: four partitions per worker.
  static ExecConfig with_workers(std::size_t workers);

  // Throws ParameterError unless workers >= 1 and target_partitions >= 1.
  void validate() const;
};

// Runs fn(0) .. fn(tasks - 1) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t tasks, std::size_t workers, const std::function<void(std::size_t)>& fn);

class Table {
 public:
  Table() = default;

  // Validates every row against the schema and splits the rows into
  // `partitions` contiguous ranges of near-equal size.
  Table(Schema schema, std::vector<Row> rows, std::size_t partitions = 1);

  // Trusted constructor for operator output: one vector per partition.
  static Table from_partitions(Schema schema, std::vector<std::vector<Row>> parts);

  const Schema& schema() const { return schema_; }
  std::span<const Row> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  std::size_t num_partitions() const { return offsets_.size() - 1; }
  std::span<const Row> partition(std::size_t i) const;

  Table repartition(std::size_t partitions) const;

 private:
  Schema schema_;
  std::vector<Row> rows_;
  std::vector<std::size_t> offsets_{0, 0};
};

using RowPredicate = std::function<bool(const Row&)>;
using RowPairPredicate = std::function<bool(const Row&, const Row&)>;

// Positional rename of every column; types are kept.
Table rename(const Table& t, const std::vector<std::string>& names);

// Appends a computed column.
Table with_column(const Table& t, Column column, const std::function<Value(const Row&)>& fn,
                  const ExecConfig& exec);

// Each input row emits zero or more rows of `out_schema`.
Table flat_map(const Table& t, Schema out_schema,
               const std::function<void(const Row&, std::vector<Row>&)>& fn, const ExecConfig& exec);

Table filter(const Table& t, const RowPredicate& pred, const ExecConfig& exec);

// Concatenates partitions of two tables with identical schemas.
Table union_all(const Table& a, const Table& b);

struct JoinSpec {
  // (left column, right column) pairs that must compare equal.
  std::vector<std::pair<std::string, std::string>> equi_keys;
  // Applied to every candidate pair; empty means always true.
  RowPairPredicate predicate;
};

// Output rows are left-row columns followed by right-row columns. Throws
// SchemaError listing every column name present on both sides.
Table join(const Table& left, const Table& right, const JoinSpec& spec, const ExecConfig& exec);

// One output row per element of the array column, which is replaced by the
// element. Element values are not type-checked against any schema; the
// output column type is `element_type`.
Table explode(const Table& t, const std::string& array_column, ColumnType element_type,
              const ExecConfig& exec);

// A fold over rows. `merge` must be associative and commutative over fold
// states; that is what makes grouped results independent of partitioning.
struct Fold {
  Column output;
  std::function<Value()> init;
  std::function<void(Value& state, const Row& row)> step;
  std::function<void(Value& state, const Value& other)> merge;
  std::function<Value(const Value& state)> finish;  // identity when empty
};

// One output row per distinct key: key columns followed by the fold output.
// Rows are sorted by key.
Table group_aggregate(const Table& t, const std::vector<std::string>& key_columns, const Fold& fold,
                      const ExecConfig& exec);

// Global fold over all rows (finished). Returns finish(init()) for an empty table.
Value aggregate(const Table& t, const Fold& fold, const ExecConfig& exec);

// One representative per class of equal rows, first occurrence kept.
Table distinct(const Table& t, const ExecConfig& exec);

std::size_t count(const Table& t);

namespace folds {

// Integer or real sum of a column; the state type follows the column type.
Fold sum(const Schema& schema, const std::string& column, const std::string& output);

// Collects a column's values into an Array. Element order follows
// partition order, so consumers should not depend on it.
Fold collect_list(const Schema& schema, const std::string& column, const std::string& output);

// (count, sum) of a real column as a Pair.
Fold count_and_sum(const Schema& schema, const std::string& column, const std::string& output);

}  // namespace folds

}  // namespace readability::dataflow
