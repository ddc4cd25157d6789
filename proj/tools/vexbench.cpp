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
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vexbench/backend.hpp"
#include "vexbench/benchmark.hpp"
#include "vexbench/dataset.hpp"
#include "vexbench/enrich.hpp"
#include "vexbench/error.hpp"
#include "vexbench/quality.hpp"
#include "vexbench/remote.hpp"
#include "vexbench/stub_server.hpp"

namespace {

using namespace vexbench;

constexpr int kExitUsage = 2;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 3;
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kZeroNorm:
    case ErrorCode::kNonFinite: return 4;
    case ErrorCode::kDuplicateId:
    case ErrorCode::kIndexSealed:
    case ErrorCode::kIndexNotSealed: return 5;
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kIo: return 6;
    case ErrorCode::kConnection:
    case ErrorCode::kProtocol: return 7;
    case ErrorCode::kProvider: return 8;
    case ErrorCode::kArity: return 9;
  }
  return 1;
}

struct Globals {
  std::uint64_t seed = 7;
  std::size_t dim = kDefaultEmbeddingDim;
  std::string format = "table";
};

std::string env_remote_url() {
  const char* v = std::getenv("VEXBENCH_REMOTE_URL");
  return v ? v : "";
}

std::vector<BackendKind> parse_backends(const std::vector<std::string>& names) {
  std::vector<BackendKind> out;
  for (const auto& n : names) out.push_back(parse_backend_kind(n));
  return out;
}

/// Resolves the remote endpoint, starting an in-process stub when no
/// service URL was given and a remote backend is requested.
class RemoteContext {
 public:
  RemoteContext(const std::string& url, const std::vector<BackendKind>& kinds) {
    options_.remote_url = url;
    const bool wants_remote =
        std::find(kinds.begin(), kinds.end(), BackendKind::kRemote) != kinds.end();
    if (wants_remote && options_.remote_url.empty()) {
      stub_ = std::make_unique<StubServer>();
      stub_->start();
      options_.remote_url = stub_->url();
      std::cerr << "no search service URL given; using in-process stub at " << options_.remote_url
                << "\n";
    }
  }

  BackendFactory factory() const {
    return [this](BackendKind kind) { return make_backend(kind, options_); };
  }

 private:
  BackendOptions options_;
  std::unique_ptr<StubServer> stub_;
};

std::vector<EnrichedRecord> load_or_synthesize(const std::string& data, std::size_t n,
                                               const Globals& g, double noise) {
  if (!data.empty()) return read_jsonl(data, n);
  return synth_corpus(SynthConfig{n, g.dim, g.seed, noise});
}

const EnrichedRecord& pick_row(const std::vector<EnrichedRecord>& records, std::size_t row) {
  if (row >= records.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + " is out of range (" +
                                                 std::to_string(records.size()) + " records)");
  }
  return records[row];
}

void print_results(const ResultList& results, const std::string& format) {
  if (format == "csv") {
    std::printf("rank,id,score\n");
    for (std::size_t i = 0; i < results.hits.size(); ++i) {
      std::printf("%zu,%lld,%.9f\n", i + 1, static_cast<long long>(results.hits[i].id),
                  results.hits[i].score);
    }
    return;
  }
  std::printf("%6s  %20s  %12s\n", "rank", "id", "score");
  for (std::size_t i = 0; i < results.hits.size(); ++i) {
    std::printf("%6zu  %20lld  %12.9f\n", i + 1, static_cast<long long>(results.hits[i].id),
                results.hits[i].score);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact dense-vector search engine with benchmark and quality harness", "vexbench"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--dim", g.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "table"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic enriched JSONL corpus");
  std::size_t gen_n = 0;
  double gen_noise = 0.0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of records")->required()->check(CLI::PositiveNumber);
  gen->add_option("--noise", gen_noise, "Question perturbation scale")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", gen_out, "Output file")->required();

  // enrich
  auto* enr = app.add_subcommand("enrich", "Attach embeddings to raw JSONL rows");
  std::string enr_in, enr_out, enr_provider;
  std::size_t enr_batch = 32, enr_max_seq = 256, enr_retries = 3;
  enr->add_option("--in", enr_in, "Raw JSONL input")->required()->check(CLI::ExistingFile);
  enr->add_option("--out", enr_out, "Enriched JSONL output (resumed if present)")->required();
  enr->add_option("--batch-size", enr_batch, "Rows per provider call")->capture_default_str()->check(CLI::PositiveNumber);
  enr->add_option("--max-seq-len", enr_max_seq, "Whitespace tokens kept per text")->capture_default_str()->check(CLI::PositiveNumber);
  enr->add_option("--provider", enr_provider, "Embedding service URL or 'synthetic' (default: $VEXBENCH_REMOTE_URL, else synthetic)");
  enr->add_option("--retries", enr_retries, "Attempts per batch against a remote provider")->capture_default_str()->check(CLI::PositiveNumber);

  // query
  auto* qry = app.add_subcommand("query", "Run one top-k query against a backend");
  std::string q_data, q_backend = "flat", q_url = env_remote_url();
  std::size_t q_row = 0, q_k = 100;
  qry->add_option("--data", q_data, "Enriched JSONL file")->required()->check(CLI::ExistingFile);
  qry->add_option("--backend", q_backend, "flat, naive or remote")->capture_default_str()->check(CLI::IsMember({"flat", "naive", "remote"}));
  qry->add_option("--row", q_row, "Row whose question embedding is the query")->capture_default_str();
  qry->add_option("--k", q_k, "Results to return")->capture_default_str()->check(CLI::PositiveNumber);
  qry->add_option("--remote-url", q_url, "Search service URL (default: $VEXBENCH_REMOTE_URL)");

  // bench
  auto* bch = app.add_subcommand("bench", "Time indexing and querying across corpus sizes");
  std::string b_data, b_prefix = "bench", b_url = env_remote_url();
  BenchPlan plan;
  std::vector<std::string> b_backends{"flat", "naive"};
  std::size_t b_row = 0;
  bch->add_option("--data", b_data, "Enriched JSONL file (default: synthetic corpus)")->check(CLI::ExistingFile);
  bch->add_option("--sizes", plan.sizes, "Ascending corpus sizes")->delimiter(',')->capture_default_str();
  bch->add_option("--backends", b_backends, "Backends to time")->delimiter(',')->capture_default_str();
  bch->add_option("--k", plan.k, "Results per query")->capture_default_str()->check(CLI::PositiveNumber);
  bch->add_option("--reps", plan.repetitions, "Repetitions per cell")->capture_default_str()->check(CLI::PositiveNumber);
  bch->add_option("--out-prefix", b_prefix, "CSV output prefix")->capture_default_str();
  bch->add_option("--row", b_row, "Row whose question embedding is the query")->capture_default_str();
  bch->add_option("--remote-url", b_url, "Search service URL (default: $VEXBENCH_REMOTE_URL, else in-process stub)");

  // agree
  auto* agr = app.add_subcommand("agree", "Positional top-k agreement across backends");
  std::string a_data, a_url = env_remote_url();
  std::vector<std::size_t> a_sizes{500, 1000, 5000, 10000};
  std::vector<std::string> a_backends{"flat", "naive", "remote"};
  std::size_t a_k = 100, a_runs = 2, a_row = 0;
  agr->add_option("--data", a_data, "Enriched JSONL file (default: synthetic corpus)")->check(CLI::ExistingFile);
  agr->add_option("--sizes", a_sizes, "Corpus sizes")->delimiter(',')->capture_default_str();
  agr->add_option("--backends", a_backends, "Backends to compare")->delimiter(',')->capture_default_str();
  agr->add_option("--k", a_k, "Positions compared")->capture_default_str()->check(CLI::PositiveNumber);
  agr->add_option("--runs", a_runs, "Executions averaged")->capture_default_str()->check(CLI::PositiveNumber);
  agr->add_option("--row", a_row, "Row whose question embedding is the query")->capture_default_str();
  agr->add_option("--remote-url", a_url, "Search service URL (default: $VEXBENCH_REMOTE_URL, else in-process stub)");

  // recall
  auto* rcl = app.add_subcommand("recall", "Expected-document recall at several k");
  std::string r_data, r_backend = "flat", r_url = env_remote_url();
  std::size_t r_n = 10000, r_m = 100;
  double r_noise = 0.4;
  std::vector<std::size_t> r_kvals{50, 100, 500, 1000};
  rcl->add_option("--data", r_data, "Enriched JSONL file (default: synthetic corpus)")->check(CLI::ExistingFile);
  rcl->add_option("--n", r_n, "Documents indexed")->capture_default_str()->check(CLI::PositiveNumber);
  rcl->add_option("--m", r_m, "Queries asked")->capture_default_str()->check(CLI::PositiveNumber);
  rcl->add_option("--k-values", r_kvals, "Ascending k values")->delimiter(',')->capture_default_str();
  rcl->add_option("--noise", r_noise, "Question noise of the synthetic corpus")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  rcl->add_option("--backend", r_backend, "flat, naive or remote")->capture_default_str()->check(CLI::IsMember({"flat", "naive", "remote"}));
  rcl->add_option("--remote-url", r_url, "Search service URL (default: $VEXBENCH_REMOTE_URL, else in-process stub)");

  // stub
  auto* stb = app.add_subcommand("stub", "Serve the search-service protocol stub");
  std::string s_host = "127.0.0.1";
  int s_port = 9200;
  stb->add_option("--host", s_host, "Listen address")->capture_default_str();
  stb->add_option("--port", s_port, "Listen port")->capture_default_str()->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*gen) {
      SynthCorpus corpus(SynthConfig{gen_n, g.dim, g.seed, gen_noise});
      JsonlWriter writer(gen_out);
      while (auto r = corpus.next()) writer.write(*r);
      writer.flush();
      std::cerr << "wrote " << writer.count() << " records to " << gen_out << "\n";
    } else if (*enr) {
      if (enr_provider.empty()) enr_provider = env_remote_url();
      if (enr_provider.empty()) enr_provider = "synthetic";
      std::unique_ptr<EmbeddingProvider> provider;
      if (enr_provider == "synthetic") {
        provider = std::make_unique<SyntheticProvider>(g.seed, g.dim);
      } else {
        provider = std::make_unique<RemoteProvider>(Endpoint::parse(enr_provider), g.dim,
                                                    RetryPolicy{enr_retries, 0.5});
      }
      EnrichmentConfig config{enr_batch, enr_max_seq, g.dim, provider.get()};
      const EnrichFileStats s = enrich_file(enr_in, enr_out, config);
      std::cerr << "enriched " << s.enrich.records << " records in " << s.enrich.batches
                << " batches (resumed after " << s.resumed << ", skipped " << s.skipped_lines
                << " unusable lines)\n";
    } else if (*qry) {
      const auto records = read_jsonl(q_data);
      const BackendKind kind = parse_backend_kind(q_backend);
      RemoteContext remote(q_url, {kind});
      auto backend = remote.factory()(kind);
      backend->index(documents_of(records));
      print_results(backend->query(pick_row(records, q_row).question_embeddings, q_k), g.format);
    } else if (*bch) {
      plan.backends = parse_backends(b_backends);
      plan.seed = g.seed;
      plan.validate();
      const auto records = load_or_synthesize(b_data, plan.sizes.back(), g, 0.0);
      const auto docs = documents_of(records);
      RemoteContext remote(b_url, plan.backends);
      SteadyClock clock;
      const BenchResult result =
          run_bench(plan, docs, pick_row(records, b_row).question_embeddings, remote.factory(), clock);
      const CsvPaths paths = emit_csv(result, b_prefix);
      std::cout << summary_csv(result.summary);
      std::cerr << "wrote " << paths.raw.string() << " and " << paths.summary.string() << "\n";
    } else if (*agr) {
      const auto kinds = parse_backends(a_backends);
      std::size_t need = 0;
      for (auto s : a_sizes) need = std::max(need, s);
      const auto records = load_or_synthesize(a_data, need, g, 0.0);
      const auto docs = documents_of(records);
      RemoteContext remote(a_url, kinds);
      const auto reports = run_agreement(a_sizes, docs, pick_row(records, a_row).question_embeddings,
                                         kinds, remote.factory(), a_k, a_runs);
      std::cout << (g.format == "csv" ? agreement_csv(reports) : agreement_table(reports));
      for (const auto& r : reports) {
        if (r.failed()) throw Error(ErrorCode::kInvalidArgument, "size " + std::to_string(r.dataset_size) + " failed: " + r.error);
      }
    } else if (*rcl) {
      const auto records = load_or_synthesize(r_data, r_n, g, r_noise);
      const BackendKind kind = parse_backend_kind(r_backend);
      RemoteContext remote(r_url, {kind});
      auto backend = remote.factory()(kind);
      const RecallReport report = recall_expected(records, r_n, r_m, r_kvals, *backend);
      std::cout << (g.format == "csv" ? recall_csv(report) : recall_table(report));
    } else if (*stb) {
      StubServer server;
      std::cerr << "serving search-service stub on http://" << s_host << ":" << s_port << "\n";
      server.run(s_host, s_port);
    }
  } catch (const Error& e) {
    std::cerr << "vexbench " << stage << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "vexbench " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
