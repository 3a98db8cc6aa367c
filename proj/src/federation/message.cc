// Copyright 2026 The fedrange Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedrange/federation/message.h"

#include <array>
#include <charconv>
#include <map>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace fedrange {
namespace {

constexpr std::array<absl::string_view, 7> kTypeNames = {
    "QUERY", "SUMMARY", "ALLOCATION", "RESULT", "SECURE_SHARE", "ANSWER", "REFUSAL"};

// Longest accepted body; messages are a few hundred bytes in practice.
constexpr size_t kMaxFrameBytes = 1 << 20;

std::string FormatReal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

using Fields = std::vector<std::pair<std::string, std::string>>;

class FieldWriter {
 public:
  void Add(absl::string_view key, std::string value) {
    fields_.emplace_back(std::string(key), std::move(value));
  }
  void AddReal(absl::string_view key, double v) { Add(key, FormatReal(v)); }
  void AddInt(absl::string_view key, int64_t v) { Add(key, absl::StrCat(v)); }
  void AddUint(absl::string_view key, uint64_t v) { Add(key, absl::StrCat(v)); }

  absl::StatusOr<std::string> Finish() const {
    std::string out;
    for (const auto& [key, value] : fields_) {
      if (value.find_first_of("\r\n") != std::string::npos) {
        return absl::InvalidArgumentError(
            absl::StrCat("field '", key, "' contains a line break"));
      }
      absl::StrAppend(&out, key, "=", value, "\n");
    }
    return out;
  }

 private:
  Fields fields_;
};

// Decoded fields with strict accessors; every accessor consumes its field so
// leftovers can be reported.
class FieldReader {
 public:
  explicit FieldReader(std::multimap<std::string, std::string> fields)
      : fields_(std::move(fields)) {}

  absl::StatusOr<std::string> Str(absl::string_view key) {
    auto it = fields_.find(std::string(key));
    if (it == fields_.end()) {
      return absl::InvalidArgumentError(absl::StrCat("missing field '", key, "'"));
    }
    std::string v = std::move(it->second);
    fields_.erase(it);
    return v;
  }

  std::string OptionalStr(absl::string_view key) {
    absl::StatusOr<std::string> v = Str(key);
    return v.ok() ? *std::move(v) : std::string();
  }

  std::vector<std::string> All(absl::string_view key) {
    std::vector<std::string> out;
    auto [lo, hi] = fields_.equal_range(std::string(key));
    for (auto it = lo; it != hi; ++it) out.push_back(std::move(it->second));
    fields_.erase(lo, hi);
    return out;
  }

  absl::StatusOr<double> Real(absl::string_view key) {
    absl::StatusOr<std::string> s = Str(key);
    if (!s.ok()) return s.status();
    double v;
    if (!absl::SimpleAtod(*s, &v)) return Malformed(key, *s);
    return v;
  }

  absl::StatusOr<int64_t> Int(absl::string_view key) {
    absl::StatusOr<std::string> s = Str(key);
    if (!s.ok()) return s.status();
    int64_t v;
    if (!absl::SimpleAtoi(*s, &v)) return Malformed(key, *s);
    return v;
  }

  absl::StatusOr<uint64_t> Uint(absl::string_view key) {
    absl::StatusOr<std::string> s = Str(key);
    if (!s.ok()) return s.status();
    uint64_t v;
    if (!absl::SimpleAtoi(*s, &v)) return Malformed(key, *s);
    return v;
  }

  absl::StatusOr<int> ProviderId() {
    absl::StatusOr<int64_t> v = Int("provider");
    if (!v.ok()) return v.status();
    if (*v < 0 || *v > std::numeric_limits<int>::max()) {
      return Malformed("provider", absl::StrCat(*v));
    }
    return static_cast<int>(*v);
  }

  absl::Status ExpectEmpty() const {
    if (fields_.empty()) return absl::OkStatus();
    return absl::InvalidArgumentError(
        absl::StrCat("unexpected field '", fields_.begin()->first, "'"));
  }

 private:
  static absl::Status Malformed(absl::string_view key, absl::string_view value) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed value for '", key, "': '", value, "'"));
  }

  std::multimap<std::string, std::string> fields_;
};

#define FEDRANGE_ASSIGN(lhs, expr)            \
  do {                                        \
    auto _v = (expr);                         \
    if (!_v.ok()) return _v.status();         \
    lhs = *std::move(_v);                     \
  } while (false)

absl::StatusOr<std::pair<std::string, Interval>> ParseRange(absl::string_view text) {
  // name:lo:hi, where the name itself may contain ':'.
  const size_t second = text.rfind(':');
  const size_t first =
      second == absl::string_view::npos || second == 0 ? absl::string_view::npos
                                                       : text.rfind(':', second - 1);
  Interval iv;
  if (first == absl::string_view::npos || first == 0 ||
      !absl::SimpleAtoi(text.substr(first + 1, second - first - 1), &iv.lo) ||
      !absl::SimpleAtoi(text.substr(second + 1), &iv.hi)) {
    return absl::InvalidArgumentError(absl::StrCat("malformed range '", text, "'"));
  }
  return std::make_pair(std::string(text.substr(0, first)), iv);
}

void WritePayload(const QueryPayload& p, FieldWriter& w) {
  w.Add("agg", std::string(AggregationName(p.query.aggregation)));
  for (const auto& [name, iv] : p.query.ranges) {
    w.Add("range", absl::StrCat(name, ":", iv.lo, ":", iv.hi));
  }
  w.AddReal("sr", p.sample_rate);
  w.AddReal("epsilon", p.budget.epsilon);
  w.AddReal("delta", p.budget.delta);
  w.Add("hp", absl::StrCat(FormatReal(p.split.overview), ",",
                           FormatReal(p.split.sampling), ",",
                           FormatReal(p.split.estimate)));
  w.Add("mode", p.smc_mode ? "smc" : "plain");
  if (!p.analyst.empty()) w.Add("analyst", p.analyst);
}

void WritePayload(const SummaryPayload& p, FieldWriter& w) {
  w.AddInt("provider", p.provider_id);
  w.AddInt("n_q", p.n_q_noisy);
  w.AddReal("avg_r", p.avg_r_noisy);
}

void WritePayload(const AllocationPayload& p, FieldWriter& w) {
  w.AddInt("provider", p.provider_id);
  w.AddInt("s", p.sample_size);
}

void WritePayload(const ResultPayload& p, FieldWriter& w) {
  w.AddInt("provider", p.provider_id);
  w.AddReal("value", p.dp_result);
}

void WritePayload(const SecureSharePayload& p, FieldWriter& w) {
  w.AddInt("provider", p.provider_id);
  w.AddUint("masked_value", p.masked_value);
  w.AddUint("masked_sensitivity", p.masked_sensitivity);
}

void WritePayload(const AnswerPayload& p, FieldWriter& w) {
  w.AddReal("value", p.value);
  w.AddReal("epsilon", p.spent.epsilon);
  w.AddReal("delta", p.spent.delta);
  if (!p.warning.empty()) w.Add("warning", p.warning);
}

void WritePayload(const RefusalPayload& p, FieldWriter& w) { w.Add("reason", p.reason); }

absl::StatusOr<Payload> ReadQuery(FieldReader& r) {
  QueryPayload p;
  std::string agg;
  FEDRANGE_ASSIGN(agg, r.Str("agg"));
  FEDRANGE_ASSIGN(p.query.aggregation, ParseAggregation(agg));
  for (const std::string& text : r.All("range")) {
    std::pair<std::string, Interval> range;
    FEDRANGE_ASSIGN(range, ParseRange(text));
    if (!p.query.ranges.emplace(range).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("dimension '", range.first, "' repeated"));
    }
  }
  FEDRANGE_ASSIGN(p.sample_rate, r.Real("sr"));
  FEDRANGE_ASSIGN(p.budget.epsilon, r.Real("epsilon"));
  FEDRANGE_ASSIGN(p.budget.delta, r.Real("delta"));
  std::string hp;
  FEDRANGE_ASSIGN(hp, r.Str("hp"));
  const std::vector<absl::string_view> parts = absl::StrSplit(hp, ',');
  if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &p.split.overview) ||
      !absl::SimpleAtod(parts[1], &p.split.sampling) ||
      !absl::SimpleAtod(parts[2], &p.split.estimate)) {
    return absl::InvalidArgumentError(absl::StrCat("malformed hp '", hp, "'"));
  }
  std::string mode;
  FEDRANGE_ASSIGN(mode, r.Str("mode"));
  if (mode != "smc" && mode != "plain") {
    return absl::InvalidArgumentError(absl::StrCat("unknown mode '", mode, "'"));
  }
  p.smc_mode = mode == "smc";
  p.analyst = r.OptionalStr("analyst");
  return p;
}

absl::StatusOr<Payload> ReadSummary(FieldReader& r) {
  SummaryPayload p;
  FEDRANGE_ASSIGN(p.provider_id, r.ProviderId());
  FEDRANGE_ASSIGN(p.n_q_noisy, r.Int("n_q"));
  FEDRANGE_ASSIGN(p.avg_r_noisy, r.Real("avg_r"));
  return p;
}

absl::StatusOr<Payload> ReadAllocation(FieldReader& r) {
  AllocationPayload p;
  FEDRANGE_ASSIGN(p.provider_id, r.ProviderId());
  FEDRANGE_ASSIGN(p.sample_size, r.Int("s"));
  return p;
}

absl::StatusOr<Payload> ReadResult(FieldReader& r) {
  ResultPayload p;
  FEDRANGE_ASSIGN(p.provider_id, r.ProviderId());
  FEDRANGE_ASSIGN(p.dp_result, r.Real("value"));
  return p;
}

absl::StatusOr<Payload> ReadSecureShare(FieldReader& r) {
  SecureSharePayload p;
  FEDRANGE_ASSIGN(p.provider_id, r.ProviderId());
  FEDRANGE_ASSIGN(p.masked_value, r.Uint("masked_value"));
  FEDRANGE_ASSIGN(p.masked_sensitivity, r.Uint("masked_sensitivity"));
  return p;
}

absl::StatusOr<Payload> ReadAnswer(FieldReader& r) {
  AnswerPayload p;
  FEDRANGE_ASSIGN(p.value, r.Real("value"));
  FEDRANGE_ASSIGN(p.spent.epsilon, r.Real("epsilon"));
  FEDRANGE_ASSIGN(p.spent.delta, r.Real("delta"));
  p.warning = r.OptionalStr("warning");
  return p;
}

absl::StatusOr<Payload> ReadRefusal(FieldReader& r) {
  RefusalPayload p;
  FEDRANGE_ASSIGN(p.reason, r.Str("reason"));
  return p;
}

absl::StatusOr<MessageType> ParseType(absl::string_view name) {
  for (size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<MessageType>(i);
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown message type '", name, "'"));
}

// Splits a body into (key, value) lines.
absl::StatusOr<Fields> SplitFields(absl::string_view body) {
  Fields out;
  if (body.empty() || body.back() != '\n') {
    return absl::InvalidArgumentError("message body must end with a newline");
  }
  body.remove_suffix(1);
  for (absl::string_view line : absl::StrSplit(body, '\n')) {
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos || eq == 0) {
      return absl::InvalidArgumentError(absl::StrCat("malformed line '", line, "'"));
    }
    out.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace

absl::string_view MessageTypeName(MessageType type) {
  return kTypeNames[static_cast<size_t>(type)];
}

const std::vector<std::string>& AllowedFields(MessageType type) {
  static const auto* const kFields = new std::array<std::vector<std::string>, 7>{{
      {"type", "query_id", "agg", "range", "sr", "epsilon", "delta", "hp", "mode",
       "analyst"},
      {"type", "query_id", "provider", "n_q", "avg_r"},
      {"type", "query_id", "provider", "s"},
      {"type", "query_id", "provider", "value"},
      {"type", "query_id", "provider", "masked_value", "masked_sensitivity"},
      {"type", "query_id", "value", "epsilon", "delta", "warning"},
      {"type", "query_id", "reason"},
  }};
  return (*kFields)[static_cast<size_t>(type)];
}

absl::StatusOr<std::string> EncodeMessage(const Message& message) {
  FieldWriter w;
  w.Add("type", std::string(MessageTypeName(message.type())));
  w.Add("query_id", message.query_id);
  std::visit([&w](const auto& p) { WritePayload(p, w); }, message.payload);
  return w.Finish();
}

absl::StatusOr<Message> DecodeMessage(absl::string_view body) {
  Fields fields;
  FEDRANGE_ASSIGN(fields, SplitFields(body));
  if (fields.empty() || fields.front().first != "type") {
    return absl::InvalidArgumentError("message must start with a type field");
  }
  MessageType type;
  FEDRANGE_ASSIGN(type, ParseType(fields.front().second));
  std::multimap<std::string, std::string> by_key;
  for (auto& [key, value] : fields) {
    if (key != "range" && by_key.count(key) > 0) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate field '", key, "'"));
    }
    by_key.emplace(std::move(key), std::move(value));
  }
  by_key.erase("type");
  FieldReader r(std::move(by_key));
  Message m;
  FEDRANGE_ASSIGN(m.query_id, r.Str("query_id"));
  switch (type) {
    case MessageType::kQuery:
      FEDRANGE_ASSIGN(m.payload, ReadQuery(r));
      break;
    case MessageType::kSummary:
      FEDRANGE_ASSIGN(m.payload, ReadSummary(r));
      break;
    case MessageType::kAllocation:
      FEDRANGE_ASSIGN(m.payload, ReadAllocation(r));
      break;
    case MessageType::kResult:
      FEDRANGE_ASSIGN(m.payload, ReadResult(r));
      break;
    case MessageType::kSecureShare:
      FEDRANGE_ASSIGN(m.payload, ReadSecureShare(r));
      break;
    case MessageType::kAnswer:
      FEDRANGE_ASSIGN(m.payload, ReadAnswer(r));
      break;
    case MessageType::kRefusal:
      FEDRANGE_ASSIGN(m.payload, ReadRefusal(r));
      break;
  }
  if (absl::Status s = r.ExpectEmpty(); !s.ok()) return s;
  return m;
}

std::string FrameBody(absl::string_view body) {
  return absl::StrCat(body.size(), "\n", body);
}

absl::StatusOr<std::string> TakeFrame(std::string& buffer) {
  const size_t nl = buffer.find('\n');
  if (nl == std::string::npos) {
    if (buffer.size() > 20) return absl::InvalidArgumentError("frame length too long");
    return absl::NotFoundError("incomplete frame header");
  }
  size_t len;
  if (nl == 0 || !absl::SimpleAtoi(absl::string_view(buffer).substr(0, nl), &len) ||
      len > kMaxFrameBytes) {
    return absl::InvalidArgumentError("malformed frame length");
  }
  if (buffer.size() - nl - 1 < len) return absl::NotFoundError("incomplete frame body");
  std::string body = buffer.substr(nl + 1, len);
  buffer.erase(0, nl + 1 + len);
  return body;
}

absl::Status CheckFieldsAllowed(absl::string_view body) {
  Fields fields;
  FEDRANGE_ASSIGN(fields, SplitFields(body));
  if (fields.empty() || fields.front().first != "type") {
    return absl::InvalidArgumentError("message must start with a type field");
  }
  MessageType type;
  FEDRANGE_ASSIGN(type, ParseType(fields.front().second));
  const std::vector<std::string>& allowed = AllowedFields(type);
  const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
  for (const auto& [key, value] : fields) {
    if (!allowed_set.contains(key)) {
      return absl::PermissionDeniedError(absl::StrCat(
          "field '", key, "' is not allowed in ", MessageTypeName(type)));
    }
  }
  return absl::OkStatus();
}

}  // namespace fedrange

#undef FEDRANGE_ASSIGN
