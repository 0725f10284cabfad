#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <stdexcept>

#include "readability/dataflow.hpp"
#include "readability/errors.hpp"
#include "test_support.hpp"

namespace {

using namespace readability::dataflow;
using readability::ParameterError;
using readability::SchemaError;

Table ints(const std::string& name, std::vector<std::int64_t> values, std::size_t partitions = 1) {
  std::vector<Row> rows;
  for (auto v : values) rows.push_back({Value(v)});
  return Table(Schema{{name, ColumnType::Int}}, std::move(rows), partitions);
}

std::vector<Row> sorted_rows(const Table& t) {
  std::vector<Row> rows(t.rows().begin(), t.rows().end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

ExecConfig config(std::size_t workers, std::size_t partitions) { return ExecConfig{workers, partitions}; }

TEST(ValueTest, OrderingAndEquality) {
  EXPECT_EQ(Value(std::int64_t{3}), Value(3));
  EXPECT_LT(Value(3), Value(4));
  EXPECT_LT(Value(9), Value(0.5));  // int sorts before real
  EXPECT_EQ(Value(Array{Value(1), Value(2)}), Value(Array{Value(1), Value(2)}));
  EXPECT_LT(Value(Array{Value(1)}), Value(Array{Value(1), Value(0)}));
  EXPECT_EQ(hash_value(Value(0.0)), hash_value(Value(-0.0)));
}

TEST(TableTest, RejectsNonConformingRows) {
  EXPECT_THROW(Table(Schema{{"a", ColumnType::Int}}, {{Value(1.5)}}), SchemaError);
  EXPECT_THROW(Table(Schema{{"a", ColumnType::Int}}, {{Value(1), Value(2)}}), SchemaError);
}

TEST(TableTest, PartitionsCoverRowsDisjointly) {
  for (std::size_t p : {1, 2, 3, 8, 20}) {
    const Table t = ints("v", {1, 2, 3, 4, 5, 6, 7}, p);
    std::size_t total = 0;
    for (std::size_t i = 0; i < t.num_partitions(); ++i) total += t.partition(i).size();
    EXPECT_EQ(total, 7u);
    EXPECT_EQ(t.repartition(3).size(), 7u);
  }
}

TEST(ExecConfigTest, Validation) {
  EXPECT_EQ(ExecConfig::with_workers(3).target_partitions, 12u);
  EXPECT_THROW(config(0, 1).validate(), ParameterError);
  EXPECT_THROW(config(1, 0).validate(), ParameterError);
}

TEST(ParallelFor, RunsEveryTaskAndRethrows) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Join, Examples) {
  const ExecConfig exec = config(2, 4);
  const Table a = ints("a", {1, 2});
  const Table b = ints("b", {2, 3});
  const Table eq = join(a, b, {{{"a", "b"}}, {}}, exec);
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_EQ(eq.rows()[0], (Row{Value(2), Value(2)}));

  const Table lt = join(ints("a", {1, 2}), ints("b", {1, 2}), {{}, [](const Row& l, const Row& r) {
                          return l[0].as_int() < r[0].as_int();
                        }},
                        exec);
  ASSERT_EQ(lt.size(), 1u);
  EXPECT_EQ(lt.rows()[0], (Row{Value(1), Value(2)}));

  EXPECT_EQ(join(ints("a", {}), b, {{{"a", "b"}}, {}}, exec).size(), 0u);
  EXPECT_EQ(join(ints("a", {}), b, {}, exec).size(), 0u);
}

TEST(Join, CollisionNamesEveryColumn) {
  const Table a(Schema{{"x", ColumnType::Int}, {"y", ColumnType::Int}}, {});
  const Table b(Schema{{"y", ColumnType::Int}, {"x", ColumnType::Int}}, {});
  try {
    join(a, b, {}, config(1, 1));
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("x"), std::string::npos);
    EXPECT_NE(msg.find("y"), std::string::npos);
  }
}

TEST(Join, CartesianCardinalityAndPartitionIndependence) {
  testing_support::Gen gen(21);
  std::vector<std::int64_t> xs, ys;
  for (int i = 0; i < 37; ++i) xs.push_back(gen.integer(0, 9));
  for (int i = 0; i < 23; ++i) ys.push_back(gen.integer(0, 9));
  const auto reference = sorted_rows(join(ints("a", xs), ints("b", ys), {{{"a", "b"}}, {}}, config(1, 1)));
  // independent nested-loop oracle
  std::size_t matches = 0;
  for (auto x : xs) matches += static_cast<std::size_t>(std::count(ys.begin(), ys.end(), x));
  EXPECT_EQ(reference.size(), matches);

  for (std::size_t workers : {1, 4}) {
    for (std::size_t parts : {1, 2, 8}) {
      const auto exec = config(workers, parts);
      EXPECT_EQ(join(ints("a", xs, parts), ints("b", ys, 3), {}, exec).size(), xs.size() * ys.size());
      EXPECT_EQ(sorted_rows(join(ints("a", xs, parts), ints("b", ys, parts), {{{"a", "b"}}, {}}, exec)), reference);
    }
  }
}

TEST(Explode, Examples) {
  const Schema s{{"v", ColumnType::Int}, {"a", ColumnType::Array}};
  const ExecConfig exec = config(1, 2);
  const Table one(s, {{Value(1), Value(Array{Value(5), Value(6)})}});
  const Table e = explode(one, "a", ColumnType::Int, exec);
  EXPECT_EQ(sorted_rows(e), (std::vector<Row>{{Value(1), Value(5)}, {Value(1), Value(6)}}));
  EXPECT_EQ(explode(Table(s, {{Value(1), Value(Array{})}}), "a", ColumnType::Int, exec).size(), 0u);
  const Table two(s, {{Value(1), Value(Array{Value(5), Value(6)})}, {Value(2), Value(Array{Value(7), Value(8)})}});
  EXPECT_EQ(explode(two, "a", ColumnType::Int, exec).size(), 4u);
  EXPECT_THROW(explode(two, "v", ColumnType::Int, exec), SchemaError);
}

TEST(GroupAggregate, Examples) {
  const Schema s{{"k", ColumnType::Int}, {"x", ColumnType::Int}};
  const Table t(s, {{Value(1), Value(2)}, {Value(1), Value(3)}});
  const ExecConfig exec = config(2, 4);
  const Table g = group_aggregate(t, {"k"}, folds::sum(s, "x", "total"), exec);
  EXPECT_EQ(g.schema().index_of("total"), 1u);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.rows()[0], (Row{Value(1), Value(5)}));

  const Table single(s, {{Value(4), Value(9)}});
  EXPECT_EQ(group_aggregate(single, {"k"}, folds::sum(s, "x", "total"), exec).rows()[0], (Row{Value(4), Value(9)}));
}

TEST(GroupAggregate, PartitionIndependentAndMatchesDirectSum) {
  testing_support::Gen gen(22);
  const Schema s{{"k", ColumnType::Int}, {"a", ColumnType::Array}};
  std::vector<Row> rows;
  std::map<std::int64_t, std::int64_t> expected;
  for (int i = 0; i < 200; ++i) {
    const auto k = gen.integer(0, 15);
    Array values;
    for (auto n = gen.integer(0, 5); n > 0; --n) {
      const auto v = gen.integer(-50, 50);
      values.push_back(Value(v));
      expected[k] += v;
    }
    rows.push_back({Value(k), Value(std::move(values))});
  }
  std::vector<Row> want;
  for (auto [k, v] : expected) want.push_back({Value(k), Value(v)});

  std::optional<std::vector<Row>> first;
  for (std::size_t parts : {1, 2, 8}) {
    for (std::size_t workers : {1, 3}) {
      const auto exec = config(workers, parts);
      const Table exploded = explode(Table(s, rows, parts), "a", ColumnType::Int, exec);
      const Table g = group_aggregate(exploded, {"k"}, folds::sum(exploded.schema(), "a", "sum"), exec);
      const std::vector<Row> got(g.rows().begin(), g.rows().end());
      EXPECT_EQ(got, want);  // output is key-sorted
      if (!first) first = got;
      EXPECT_EQ(got, *first);
    }
  }
}

TEST(Aggregate, CountAndSumAndEmpty) {
  const Schema s{{"x", ColumnType::Real}};
  const Table t(s, {{Value(1.5)}, {Value(2.5)}, {Value(4.0)}}, 2);
  const Value v = aggregate(t, folds::count_and_sum(s, "x", "cs"), config(2, 2));
  EXPECT_EQ(v.as_pair(), (Pair{3.0, 8.0}));
  const Value e = aggregate(Table(s, {}), folds::count_and_sum(s, "x", "cs"), config(1, 1));
  EXPECT_EQ(e.as_pair(), (Pair{0.0, 0.0}));
}

TEST(Distinct, Examples) {
  const Schema s{{"a", ColumnType::Int}, {"b", ColumnType::Int}};
  const ExecConfig exec = config(2, 3);
  const Table dup(s, {{Value(1), Value(2)}, {Value(1), Value(2)}, {Value(3), Value(4)}}, 2);
  EXPECT_EQ(sorted_rows(distinct(dup, exec)), (std::vector<Row>{{Value(1), Value(2)}, {Value(3), Value(4)}}));
  const Table unique(s, {{Value(1), Value(2)}, {Value(3), Value(4)}});
  EXPECT_EQ(sorted_rows(distinct(unique, exec)), sorted_rows(unique));
  EXPECT_EQ(distinct(Table(s, {}), exec).size(), 0u);
}

TEST(Distinct, PartitionIndependent) {
  testing_support::Gen gen(23);
  std::vector<std::int64_t> xs;
  for (int i = 0; i < 500; ++i) xs.push_back(gen.integer(0, 60));
  std::set<std::int64_t> unique(xs.begin(), xs.end());
  for (std::size_t parts : {1, 2, 8}) {
    EXPECT_EQ(count(distinct(ints("v", xs, parts), config(4, parts))), unique.size());
  }
}

TEST(Count, Examples) {
  EXPECT_EQ(count(ints("v", {})), 0u);
  EXPECT_EQ(count(ints("v", {1, 2, 3})), 3u);
  EXPECT_EQ(count(distinct(ints("v", {7, 7}), config(1, 1))), 1u);
}

TEST(RowOperators, FilterFlatMapRenameUnion) {
  const ExecConfig exec = config(2, 2);
  const Table t = ints("v", {1, 2, 3, 4, 5}, 2);
  EXPECT_EQ(count(filter(t, [](const Row& r) { return r[0].as_int() % 2 == 1; }, exec)), 3u);
  const Table doubled = flat_map(
      t, Schema{{"w", ColumnType::Int}},
      [](const Row& r, std::vector<Row>& out) {
        out.push_back({r[0]});
        out.push_back({r[0]});
      },
      exec);
  EXPECT_EQ(count(doubled), 10u);
  EXPECT_EQ(rename(t, {"z"}).schema()[0].name, "z");
  EXPECT_EQ(count(union_all(t, rename(doubled, {"v"}))), 15u);
  const Table plus = with_column(t, {"sq", ColumnType::Int}, [](const Row& r) {
    return Value(r[0].as_int() * r[0].as_int());
  }, exec);
  EXPECT_EQ(plus.rows()[4], (Row{Value(5), Value(25)}));
}

}  // namespace
