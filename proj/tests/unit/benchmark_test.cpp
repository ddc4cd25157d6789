// Copyright 2026-present the vexbench authors
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
#include <gtest/gtest.h>

#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "vexbench/backend.hpp"
#include "vexbench/benchmark.hpp"
#include "vexbench/error.hpp"

using namespace vexbench;

namespace {

// Each timed phase reads the clock twice. The first read of a pair returns
// 0 and the second returns the next scripted duration, so measured
// durations equal the script bit for bit.
class ScriptedClock final : public Clock {
 public:
  explicit ScriptedClock(std::deque<double> durations) : durations_(std::move(durations)) {}
  double now() override {
    if (!in_phase_) {
      in_phase_ = true;
      return 0.0;
    }
    in_phase_ = false;
    if (durations_.empty()) throw std::logic_error("clock script exhausted");
    const double d = durations_.front();
    durations_.pop_front();
    return d;
  }
  std::size_t remaining() const { return durations_.size(); }

 private:
  std::deque<double> durations_;
  bool in_phase_ = false;
};

// Wraps a real backend and throws on indexing or querying at chosen sizes.
class FailingBackend final : public SearchBackend {
 public:
  FailingBackend(BackendKind kind, std::size_t fail_size, bool fail_query)
      : inner_(make_backend(kind)), fail_size_(fail_size), fail_query_(fail_query) {}
  BackendKind kind() const noexcept override { return inner_->kind(); }
  void index(std::span<const Document> docs) override {
    size_ = docs.size();
    if (!fail_query_ && size_ == fail_size_) throw Error(ErrorCode::kConnection, "index refused");
    inner_->index(docs);
  }
  ResultList query(const Embedding& q, std::size_t k) const override {
    if (fail_query_ && size_ == fail_size_) throw Error(ErrorCode::kProtocol, "query refused");
    return inner_->query(q, k);
  }
  std::size_t size() const override { return inner_->size(); }

 private:
  std::unique_ptr<SearchBackend> inner_;
  std::size_t fail_size_;
  bool fail_query_;
  std::size_t size_ = 0;
};

std::string shortest(double v) {
  char buf[64];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct Fixture {
  std::vector<Document> docs = testing_util::random_corpus(1, 40, 8);
  Embedding query = docs[3].embedding;
  BackendFactory factory = [](BackendKind k) { return make_backend(k); };
};

}  // namespace

TEST(BenchTest, InjectedDurationsReproduceExactly) {
  Fixture f;
  BenchPlan plan;
  plan.sizes = {10, 40};
  plan.backends = {BackendKind::kFlat, BackendKind::kNaive};
  plan.k = 5;
  plan.repetitions = 3;

  // flat: (index, query) per rep per size, then naive: query only.
  const std::vector<double> flat10{0.1, 0.01, 0.2, 0.02, 0.3, 0.03};
  const std::vector<double> flat40{1.5, 0.7, 2.5, 0.11, 3.25, 0.13};
  const std::vector<double> naive10{0.004, 0.005, 0.006};
  const std::vector<double> naive40{0.0123456789, 0.1, 1e-7};
  std::deque<double> script;
  for (const auto* v : {&flat10, &flat40, &naive10, &naive40}) script.insert(script.end(), v->begin(), v->end());
  ScriptedClock clock(script);

  const BenchResult result = run_bench(plan, f.docs, f.query, f.factory, clock);
  EXPECT_EQ(clock.remaining(), 0u);
  ASSERT_EQ(result.samples.size(), 18u);

  // No index rows for naive.
  for (const auto& s : result.samples) {
    EXPECT_FALSE(s.backend == BackendKind::kNaive && s.phase == Phase::kIndex);
  }

  const auto raw = lines_of(raw_csv(result.samples));
  ASSERT_EQ(raw.size(), 19u);
  EXPECT_EQ(raw[0], "backend,phase,size,repetition,duration_s,status");
  std::vector<std::string> want_raw;
  auto add = [&](const char* b, const char* p, int size, const std::vector<double>& v, std::size_t first,
                 std::size_t stride) {
    for (std::size_t r = 0; r < 3; ++r) {
      want_raw.push_back(std::string(b) + "," + p + "," + std::to_string(size) + "," + std::to_string(r) +
                         "," + shortest(v[first + r * stride]) + ",ok");
    }
  };
  add("flat", "index", 10, flat10, 0, 2);
  add("flat", "index", 40, flat40, 0, 2);
  add("flat", "query", 10, flat10, 1, 2);
  add("flat", "query", 40, flat40, 1, 2);
  add("naive", "query", 10, naive10, 0, 1);
  add("naive", "query", 40, naive40, 0, 1);
  EXPECT_EQ(std::vector<std::string>(raw.begin() + 1, raw.end()), want_raw);

  auto mean3 = [](double a, double b, double c) { return (a + b + c) / 3.0; };
  EXPECT_EQ(result.mean(BackendKind::kFlat, Phase::kIndex, 10), mean3(0.1, 0.2, 0.3));
  EXPECT_EQ(result.mean(BackendKind::kFlat, Phase::kQuery, 40), mean3(0.7, 0.11, 0.13));
  EXPECT_EQ(result.mean(BackendKind::kNaive, Phase::kQuery, 40), mean3(0.0123456789, 0.1, 1e-7));
  EXPECT_FALSE(result.mean(BackendKind::kNaive, Phase::kIndex, 10).has_value());

  const auto summary = lines_of(summary_csv(result.summary));
  ASSERT_EQ(summary.size(), 7u);
  EXPECT_EQ(summary[0], "backend,phase,size,mean_s,status");
  EXPECT_EQ(summary[1], "flat,index,10," + shortest(mean3(0.1, 0.2, 0.3)) + ",ok");
  EXPECT_EQ(summary[3], "flat,query,10," + shortest(mean3(0.01, 0.02, 0.03)) + ",ok");
  EXPECT_EQ(summary[6], "naive,query,40," + shortest(mean3(0.0123456789, 0.1, 1e-7)) + ",ok");
}

TEST(BenchTest, DyadicMeansAreExact) {
  const std::vector<BenchSample> samples{
      {BackendKind::kFlat, Phase::kQuery, 1, 0, 0.25, {}},
      {BackendKind::kFlat, Phase::kQuery, 1, 1, 0.5, {}},
      {BackendKind::kFlat, Phase::kQuery, 1, 2, 0.75, {}},
      {BackendKind::kFlat, Phase::kQuery, 1, 3, 1.0, {}},
  };
  const auto rows = summarize(samples);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_s, 0.625);
}

TEST(BenchTest, FailingCellDegradesWithoutAborting) {
  Fixture f;
  BenchPlan plan;
  plan.sizes = {10, 20, 40};
  plan.backends = {BackendKind::kFlat, BackendKind::kNaive};
  plan.k = 3;
  plan.repetitions = 2;
  const BackendFactory factory = [](BackendKind k) -> std::unique_ptr<SearchBackend> {
    if (k == BackendKind::kFlat) return std::make_unique<FailingBackend>(k, 20, false);
    return std::make_unique<FailingBackend>(k, 40, true);
  };
  SteadyClock clock;
  const BenchResult result = run_bench(plan, f.docs, f.query, factory, clock);

  EXPECT_TRUE(result.mean(BackendKind::kFlat, Phase::kIndex, 10).has_value());
  EXPECT_FALSE(result.mean(BackendKind::kFlat, Phase::kIndex, 20).has_value());
  EXPECT_FALSE(result.mean(BackendKind::kFlat, Phase::kQuery, 20).has_value());
  EXPECT_TRUE(result.mean(BackendKind::kFlat, Phase::kQuery, 40).has_value());
  EXPECT_TRUE(result.mean(BackendKind::kNaive, Phase::kQuery, 20).has_value());
  EXPECT_FALSE(result.mean(BackendKind::kNaive, Phase::kQuery, 40).has_value());

  const std::string summary = summary_csv(result.summary);
  EXPECT_NE(summary.find("flat,index,20,,failed"), std::string::npos);
  EXPECT_NE(summary.find("flat,query,20,,failed"), std::string::npos);
  EXPECT_NE(summary.find("naive,query,40,,failed"), std::string::npos);
  EXPECT_EQ(summary.find("naive,index"), std::string::npos);
  for (const auto& s : result.samples) {
    if (!s.duration_s) {
      EXPECT_FALSE(s.error.empty());
    }
  }
}

TEST(BenchTest, FreshBackendPerRepetition) {
  Fixture f;
  BenchPlan plan;
  plan.sizes = {10, 20};
  plan.backends = {BackendKind::kFlat};
  plan.k = 1;
  plan.repetitions = 3;
  std::size_t built = 0;
  const BackendFactory factory = [&](BackendKind k) {
    ++built;
    return make_backend(k);
  };
  SteadyClock clock;
  run_bench(plan, f.docs, f.query, factory, clock);
  EXPECT_EQ(built, 6u);
}

TEST(BenchTest, PlanValidation) {
  Fixture f;
  SteadyClock clock;
  auto run = [&](BenchPlan p) { run_bench(p, f.docs, f.query, f.factory, clock); };
  BenchPlan p;
  p.sizes = {20, 10};
  EXPECT_THROW(run(p), Error);
  p.sizes = {};
  EXPECT_THROW(run(p), Error);
  p.sizes = {10};
  p.repetitions = 0;
  EXPECT_THROW(run(p), Error);
  p.repetitions = 1;
  p.sizes = {10, 100};  // corpus too small
  EXPECT_THROW(run(p), Error);
}

TEST(BenchTest, CsvIsDeterministicAndWritten) {
  Fixture f;
  BenchPlan plan;
  plan.sizes = {10};
  plan.repetitions = 2;
  plan.k = 2;
  std::deque<double> script{0.5, 0.25, 0.5, 0.25, 0.125, 0.125};
  ScriptedClock c1(script), c2(script);
  const BenchResult a = run_bench(plan, f.docs, f.query, f.factory, c1);
  const BenchResult b = run_bench(plan, f.docs, f.query, f.factory, c2);
  EXPECT_EQ(raw_csv(a.samples), raw_csv(b.samples));
  EXPECT_EQ(summary_csv(a.summary), summary_csv(b.summary));

  testing_util::TempDir dir;
  const CsvPaths paths = emit_csv(a, (dir / "run").string());
  std::ifstream raw(paths.raw), summary(paths.summary);
  std::stringstream rs, ss;
  rs << raw.rdbuf();
  ss << summary.rdbuf();
  EXPECT_EQ(rs.str(), raw_csv(a.samples));
  EXPECT_EQ(ss.str(), summary_csv(a.summary));
  EXPECT_NE(ss.str().find("flat,index,10,0.5,ok"), std::string::npos);
}

TEST(BenchTest, RealClockTimingsArePositive) {
  Fixture f;
  BenchPlan plan;
  plan.sizes = {10, 40};
  plan.k = 5;
  plan.repetitions = 1;
  SteadyClock clock;
  const BenchResult r = run_bench(plan, f.docs, f.query, f.factory, clock);
  for (const auto& s : r.samples) {
    ASSERT_TRUE(s.duration_s.has_value());
    EXPECT_GE(*s.duration_s, 0.0);
  }
}
