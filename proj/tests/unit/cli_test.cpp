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
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "test_util.hpp"
#include "vexbench/dataset.hpp"

#ifndef VEXBENCH_CLI_PATH
#error "VEXBENCH_CLI_PATH must point at the vexbench executable"
#endif

using namespace vexbench;
using testing_util::TempDir;

namespace {

struct CliRun {
  int status;
  std::string out;
};

// Captures stdout, and stderr too unless stdout_only is set.
CliRun run(const std::string& args, bool stdout_only = false) {
  const std::string cmd =
      std::string(VEXBENCH_CLI_PATH) + " " + args + (stdout_only ? " 2>/dev/null" : " 2>&1");
  FILE* p = ::popen(cmd.c_str(), "r");
  if (p == nullptr) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int raw = ::pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(CliTest, GenThenQueryFindsThePlantedDocument) {
  TempDir dir;
  const std::string data = (dir / "x.jsonl").string();
  CliRun r = run("gen --n 100 --dim 8 --seed 1 --out " + data);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto records = read_jsonl(data);
  ASSERT_EQ(records.size(), 100u);
  EXPECT_EQ(records[0].document_embeddings.dim(), 8u);

  for (int row : {0, 42}) {
    r = run("--format csv query --data " + data + " --backend flat --row " + std::to_string(row) + " --k 1");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("\n1," + std::to_string(records[row].example_id) + ",1.0"), std::string::npos)
        << r.out;
  }
}

TEST(CliTest, BackendsPrintIdenticalRankings) {
  TempDir dir;
  const std::string data = (dir / "x.jsonl").string();
  ASSERT_EQ(run("gen --n 300 --dim 16 --seed 2 --noise 0.5 --out " + data).status, 0);
  const CliRun flat = run("--format csv query --data " + data + " --backend flat --row 3 --k 20");
  const CliRun naive = run("--format csv query --data " + data + " --backend naive --row 3 --k 20");
  const CliRun remote =
      run("--format csv query --data " + data + " --backend remote --row 3 --k 20", true);
  ASSERT_EQ(flat.status, 0) << flat.out;
  EXPECT_EQ(flat.out, naive.out);
  ASSERT_EQ(remote.status, 0) << remote.out;
  // Same ids in the same order; scores went through the wire shift.
  auto ids = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  EXPECT_EQ(ids(flat.out), ids(remote.out));
}

TEST(CliTest, GenIsDeterministicAndReadsAreIdempotent) {
  TempDir dir;
  const std::string a = (dir / "a.jsonl").string();
  const std::string b = (dir / "b.jsonl").string();
  ASSERT_EQ(run("gen --n 50 --dim 8 --seed 9 --noise 0.3 --out " + a).status, 0);
  ASSERT_EQ(run("gen --n 50 --dim 8 --seed 9 --noise 0.3 --out " + b).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const CliRun q1 = run("query --data " + a + " --row 5 --k 10");
  const CliRun q2 = run("query --data " + a + " --row 5 --k 10");
  EXPECT_EQ(q1.status, 0);
  EXPECT_EQ(q1.out, q2.out);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(CliTest, BenchWritesOneRowPerCell) {
  TempDir dir;
  const std::string prefix = (dir / "bench").string();
  const CliRun r = run("--format csv --dim 16 bench --sizes 20,40 --backends flat,naive --k 5 --reps 2 --out-prefix " +
                    prefix);
  ASSERT_EQ(r.status, 0) << r.out;
  const std::string raw = slurp(prefix + "_raw.csv");
  const std::string summary = slurp(prefix + "_summary.csv");
  EXPECT_EQ(std::count(raw.begin(), raw.end(), '\n'), 1 + 2 * 2 * 2 + 2 * 2);
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1 + 2 * 2 + 2);
  EXPECT_EQ(summary.find("naive,index"), std::string::npos);
}

TEST(CliTest, UsageAndRuntimeErrors) {
  TempDir dir;
  const std::string data = (dir / "x.jsonl").string();
  ASSERT_EQ(run("gen --n 10 --dim 4 --out " + data).status, 0);

  CliRun r = run("query --data " + data + " --no-such-flag");
  EXPECT_EQ(r.status, 2) << r.out;
  r = run("frobnicate");
  EXPECT_EQ(r.status, 2) << r.out;
  r = run("query --data " + data + " --row 99");
  EXPECT_EQ(r.status, 3) << r.out;
  EXPECT_NE(r.out.find("out of range"), std::string::npos);
  r = run("query --data " + (dir / "missing.jsonl").string());
  EXPECT_EQ(r.status, 2) << r.out;
  EXPECT_NE(r.out.find("does not exist"), std::string::npos);
  // Present but unreadable as a dataset.
  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{\"document_embeddings\": [1,\n";
  }
  r = run("query --data " + (dir / "bad.jsonl").string());
  EXPECT_EQ(r.status, 6) << r.out;
  EXPECT_NE(r.out.find("line 1"), std::string::npos) << r.out;
  r = run("--format csv query --data " + data + " --backend remote --remote-url 127.0.0.1:1 --k 1");
  EXPECT_EQ(r.status, 7) << r.out;
  EXPECT_NE(r.out.find("127.0.0.1:1"), std::string::npos);
  r = run("agree --sizes 5 --backends flat --runs 1");
  EXPECT_EQ(r.status, 9) << r.out;
}

TEST(CliTest, RecallOnNoiselessCorpus) {
  const CliRun r = run("--format csv --dim 32 recall --n 500 --m 20 --k-values 1,10 --noise 0");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("1,20"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("10,20"), std::string::npos) << r.out;
}
