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
#include <charconv>
#include <string>

#include <json.hpp>

#include "vexbench/dataset.hpp"
#include "vexbench/error.hpp"

namespace vexbench {
namespace {

using nlohmann::json;

enum class Field { kNone, kDocumentEmbeddings, kDocumentText, kExampleId, kQuestionEmbeddings, kQuestionText, kOther };

Field field_of(std::string_view key) {
  if (key == "document_embeddings") return Field::kDocumentEmbeddings;
  if (key == "document_text") return Field::kDocumentText;
  if (key == "example_id") return Field::kExampleId;
  if (key == "question_embeddings") return Field::kQuestionEmbeddings;
  if (key == "question_text") return Field::kQuestionText;
  return Field::kOther;
}

// SAX handler that keeps the raw text of every float so it can be parsed
// straight to float32 without an intermediate double rounding.
class RecordHandler : public nlohmann::json_sax<json> {
 public:
  std::string error;
  std::optional<std::int64_t> example_id;
  std::optional<std::string> document_text;
  std::optional<std::string> question_text;
  std::optional<std::vector<float>> document_embeddings;
  std::optional<std::vector<float>> question_embeddings;

  bool null() override { return scalar("null"); }
  bool boolean(bool) override { return scalar("boolean"); }

  bool number_integer(number_integer_t v) override {
    if (in_embedding()) return push(static_cast<float>(v));
    if (depth_ == 1 && field_ == Field::kExampleId) {
      example_id = v;
      return true;
    }
    return scalar("number");
  }

  bool number_unsigned(number_unsigned_t v) override {
    if (in_embedding()) return push(static_cast<float>(v));
    if (depth_ == 1 && field_ == Field::kExampleId) {
      if (v > static_cast<number_unsigned_t>(std::numeric_limits<std::int64_t>::max())) {
        return fail("example_id does not fit a signed 64-bit integer");
      }
      example_id = static_cast<std::int64_t>(v);
      return true;
    }
    return scalar("number");
  }

  bool number_float(number_float_t, const string_t& raw) override {
    if (!in_embedding()) return scalar("number");
    float value = 0.0f;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
      return fail("embedding element '" + raw + "' is not representable as float32");
    }
    return push(value);
  }

  bool string(string_t& s) override {
    if (depth_ == 1 && field_ == Field::kDocumentText) {
      document_text = std::move(s);
      return true;
    }
    if (depth_ == 1 && field_ == Field::kQuestionText) {
      question_text = std::move(s);
      return true;
    }
    return scalar("string");
  }

  bool binary(binary_t&) override { return scalar("binary"); }

  bool start_object(std::size_t) override {
    if (depth_ == 0) {
      depth_ = 1;
      return true;
    }
    if (in_embedding()) return fail("embedding arrays may only hold numbers");
    if (depth_ == 1 && field_ != Field::kOther) return wrong_type();
    ++depth_;
    return true;
  }

  bool end_object() override {
    --depth_;
    return true;
  }

  bool key(string_t& k) override {
    if (depth_ == 1) field_ = field_of(k);
    return true;
  }

  bool start_array(std::size_t) override {
    if (depth_ == 0) return fail("line is not a JSON object");
    if (in_embedding()) return fail("embedding arrays may only hold numbers");
    if (depth_ == 1) {
      if (field_ == Field::kDocumentEmbeddings) {
        target_ = &document_embeddings.emplace();
      } else if (field_ == Field::kQuestionEmbeddings) {
        target_ = &question_embeddings.emplace();
      } else if (field_ != Field::kOther) {
        return wrong_type();
      }
    }
    ++depth_;
    return true;
  }

  bool end_array() override {
    --depth_;
    if (depth_ == 1) target_ = nullptr;
    return true;
  }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    if (error.empty()) error = ex.what();
    return false;
  }

 private:
  bool in_embedding() const { return target_ != nullptr && depth_ == 2; }

  bool push(float v) {
    target_->push_back(v);
    return true;
  }

  bool scalar(const char* what) {
    if (depth_ == 0) return fail("line is not a JSON object");
    if (in_embedding()) return fail(std::string("embedding element is a ") + what);
    if (depth_ == 1 && field_ != Field::kOther) return wrong_type();
    return true;
  }

  bool wrong_type() {
    static constexpr const char* kNames[] = {"", "document_embeddings", "document_text",
                                             "example_id", "question_embeddings", "question_text"};
    return fail(std::string("field '") + kNames[static_cast<int>(field_)] + "' has the wrong type");
  }

  bool fail(std::string message) {
    if (error.empty()) error = std::move(message);
    return false;
  }

  int depth_ = 0;
  Field field_ = Field::kNone;
  std::vector<float>* target_ = nullptr;
};

[[noreturn]] void malformed(std::size_t line_number, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_number) + ": " + what);
}

void append_embedding(std::string& out, std::span<const float> values) {
  out.push_back('[');
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, values[i]);
    out.append(buf, ptr);
  }
  out.push_back(']');
}

void append_string(std::string& out, const std::string& s) {
  out += json(s).dump(-1, ' ', false, json::error_handler_t::replace);
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

EnrichedRecord parse_record_line(std::string_view line, std::size_t line_number) {
  RecordHandler handler;
  const bool ok = json::sax_parse(line.begin(), line.end(), &handler);
  if (!ok) malformed(line_number, handler.error.empty() ? "invalid JSON" : handler.error);

  std::string missing;
  auto need = [&](bool present, const char* key) {
    if (!present) missing += (missing.empty() ? "" : ", ") + std::string(key);
  };
  need(handler.document_embeddings.has_value(), "document_embeddings");
  need(handler.document_text.has_value(), "document_text");
  need(handler.example_id.has_value(), "example_id");
  need(handler.question_embeddings.has_value(), "question_embeddings");
  need(handler.question_text.has_value(), "question_text");
  if (!missing.empty()) malformed(line_number, "missing " + missing);

  auto embedding = [&](std::vector<float>& v, const char* key) {
    try {
      return Embedding(std::move(v));
    } catch (const Error& e) {
      malformed(line_number, std::string(key) + ": " + e.what());
    }
  };
  EnrichedRecord record{*handler.example_id, std::move(*handler.document_text),
                        std::move(*handler.question_text),
                        embedding(*handler.document_embeddings, "document_embeddings"),
                        embedding(*handler.question_embeddings, "question_embeddings")};
  if (record.document_embeddings.dim() != record.question_embeddings.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "line " + std::to_string(line_number) + ": document and question embeddings differ in dimension (" +
                    std::to_string(record.document_embeddings.dim()) + " vs " +
                    std::to_string(record.question_embeddings.dim()) + ")");
  }
  return record;
}

std::string format_record_line(const EnrichedRecord& record) {
  std::string out;
  out.reserve(24 * (record.document_embeddings.dim() + record.question_embeddings.dim()) +
              record.document_text.size() + record.question_text.size() + 128);
  out += "{\"document_embeddings\":";
  append_embedding(out, record.document_embeddings.values());
  out += ",\"document_text\":";
  append_string(out, record.document_text);
  out += ",\"example_id\":";
  out += std::to_string(record.example_id);
  out += ",\"question_embeddings\":";
  append_embedding(out, record.question_embeddings.values());
  out += ",\"question_text\":";
  append_string(out, record.question_text);
  out += '}';
  return out;
}

JsonlReader::JsonlReader(const std::filesystem::path& path, std::size_t expected_dim)
    : path_(path), in_(path), dim_(expected_dim) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot open " + path.string());
}

std::optional<EnrichedRecord> JsonlReader::next() {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (is_blank(line_)) continue;
    EnrichedRecord record = parse_record_line(line_, line_number_);
    if (dim_ == 0) dim_ = record.document_embeddings.dim();
    if (record.document_embeddings.dim() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  path_.string() + " line " + std::to_string(line_number_) + ": dimension " +
                      std::to_string(record.document_embeddings.dim()) + " differs from " +
                      std::to_string(dim_));
    }
    if (!seen_ids_.insert(record.example_id).second) {
      malformed(line_number_, "duplicate example_id " + std::to_string(record.example_id));
    }
    return record;
  }
  if (in_.bad()) throw Error(ErrorCode::kIo, "read failure on " + path_.string());
  return std::nullopt;
}

std::vector<EnrichedRecord> read_jsonl(const std::filesystem::path& path, std::size_t limit) {
  JsonlReader reader(path);
  std::vector<EnrichedRecord> out;
  while (out.size() < limit) {
    auto r = reader.next();
    if (!r) break;
    out.push_back(std::move(*r));
  }
  return out;
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path, bool append)
    : path_(path), out_(path, append ? std::ios::app : std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
}

void JsonlWriter::write(const EnrichedRecord& record) {
  out_ << format_record_line(record) << '\n';
  if (!out_) throw Error(ErrorCode::kIo, "write failure on " + path_.string());
  ++count_;
}

void JsonlWriter::flush() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIo, "flush failure on " + path_.string());
}

std::size_t write_jsonl(std::span<const EnrichedRecord> records, const std::filesystem::path& path) {
  JsonlWriter writer(path);
  for (const auto& r : records) writer.write(r);
  writer.flush();
  return writer.count();
}

}  // namespace vexbench
