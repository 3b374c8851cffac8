// Copyright 2026 The cyclebound Authors
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

// File layout:
//   "CBND" | u32 LE version | u64 LE config hash
//   records: varint length | kind byte | payload
// The last record is kEnd, carrying the number of records before it, so a
// file cut at a record boundary is still detected.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "cyclebound/case_engine.h"
#include "wire.h"

namespace cyclebound {

namespace {

enum RecordKind : std::uint8_t {
  kCounters = 1,
  kFrontier = 2,
  kWitness = 3,
  kEnd = 0x7f,
};

constexpr char kMagic[4] = {'C', 'B', 'N', 'D'};

void PutForm(wire::Writer& w, const AffineForm& f) {
  w.Int(f.a_coef);
  w.Int(f.constant);
}

AffineForm GetForm(wire::Reader& r) {
  AffineForm f;
  f.a_coef = r.Int();
  f.constant = r.Int();
  if (f.a_coef <= 0) throw wire::DecodeError("nonpositive coefficient in affine form");
  return f;
}

void PutState(wire::Writer& w, const CaseState& s) {
  w.Varint(s.modulus_exp);
  w.Int(s.residue);
  w.Byte(static_cast<std::uint8_t>(s.kind));
  w.Varint(s.k_total);
  w.Int(s.a_floor);
  w.Varint(s.minima.size());
  for (const ProcessedMinimum& m : s.minima) {
    PutForm(w, m.form);
    w.Varint(m.k);
    w.Byte(m.run_is_lower_bound ? 1 : 0);
    w.Int(m.coef.num());
    w.Int(m.coef.den());
  }
  w.Byte(s.pending ? 1 : 0);
  if (s.pending) PutForm(w, *s.pending);
  w.Varint(s.constraints.size());
  for (const LowerBoundConstraint& c : s.constraints) {
    PutForm(w, c.form);
    w.Int(c.x0_multiple);
    w.Int(c.offset);
  }
}

CaseState GetState(wire::Reader& r) {
  CaseState s;
  s.modulus_exp = r.Varint();
  s.residue = r.Int();
  const std::uint8_t kind = r.Byte();
  if (kind > static_cast<std::uint8_t>(NodeKind::kLongRun)) {
    throw wire::DecodeError("unknown node kind");
  }
  s.kind = static_cast<NodeKind>(kind);
  s.k_total = r.Varint();
  s.a_floor = r.Int();
  const std::uint64_t count = r.Varint();
  for (std::uint64_t i = 0; i < count; ++i) {
    ProcessedMinimum m;
    m.form = GetForm(r);
    m.k = r.Varint();
    m.run_is_lower_bound = r.Byte() != 0;
    const BigInt num = r.Int();
    const BigInt den = r.Int();
    if (den <= 0) throw wire::DecodeError("nonpositive denominator");
    m.coef = Rational(num, den);
    s.minima.push_back(std::move(m));
  }
  if (r.Byte()) s.pending = GetForm(r);
  const std::uint64_t constraints = r.Varint();
  for (std::uint64_t i = 0; i < constraints; ++i) {
    LowerBoundConstraint c;
    c.form = GetForm(r);
    c.x0_multiple = r.Int();
    c.offset = r.Int();
    s.constraints.push_back(std::move(c));
  }
  if ((s.kind == NodeKind::kOpen) != s.pending.has_value()) {
    throw wire::DecodeError("pending minimum inconsistent with node kind");
  }
  return s;
}

void PutRecord(wire::Writer& file, std::uint8_t kind, const wire::Writer& payload) {
  file.Varint(payload.bytes().size() + 1);
  file.Byte(kind);
  file.Bytes(payload.bytes());
}

}  // namespace

void SaveCheckpoint(const std::string& path, const Checkpoint& cp) {
  wire::Writer file;
  for (char c : kMagic) file.Byte(static_cast<std::uint8_t>(c));
  for (int i = 0; i < 4; ++i) file.Byte(static_cast<std::uint8_t>(kCheckpointVersion >> (8 * i)));
  for (int i = 0; i < 8; ++i) file.Byte(static_cast<std::uint8_t>(cp.config_hash >> (8 * i)));

  std::uint64_t records = 0;
  wire::Writer counters;
  counters.Varint(cp.nodes_explored);
  counters.Varint(cp.nodes_closed);
  counters.Varint(cp.open_nodes);
  counters.Varint(cp.max_modulus_exp_reached);
  counters.Varint(cp.rounds);
  PutRecord(file, kCounters, counters);
  ++records;
  for (const CaseState& s : cp.frontier) {
    wire::Writer w;
    PutState(w, s);
    PutRecord(file, kFrontier, w);
    ++records;
  }
  for (const CaseState& s : cp.witnesses) {
    wire::Writer w;
    PutState(w, s);
    PutRecord(file, kWitness, w);
    ++records;
  }
  wire::Writer end;
  end.Varint(records);
  PutRecord(file, kEnd, end);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    out.write(reinterpret_cast<const char*>(file.bytes().data()),
              static_cast<std::streamsize>(file.bytes().size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path, 0);
  const std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (data.size() < 16 || std::memcmp(data.data(), kMagic, 4) != 0) {
    throw CheckpointError(path + ": not a checkpoint file", 0);
  }
  std::uint32_t version = 0;
  for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(data[4 + i]) << (8 * i);
  if (version != kCheckpointVersion) {
    throw CheckpointError(path + ": format version " + std::to_string(version) +
                              ", expected " + std::to_string(kCheckpointVersion),
                          0);
  }
  Checkpoint cp;
  for (int i = 0; i < 8; ++i) cp.config_hash |= static_cast<std::uint64_t>(data[8 + i]) << (8 * i);

  wire::Reader file(data.data() + 16, data.size() - 16);
  std::size_t records = 0;
  bool have_counters = false;
  while (true) {
    const std::size_t offset = 16 + file.position();
    try {
      if (file.AtEnd()) throw wire::DecodeError("missing end record");
      const std::uint64_t length = file.Varint();
      if (length == 0 || length > data.size() - 16 - file.position()) {
        throw wire::DecodeError("truncated record");
      }
      const std::uint8_t* body = data.data() + 16 + file.position();
      for (std::uint64_t i = 0; i < length; ++i) file.Byte();
      wire::Reader r(body + 1, length - 1);
      switch (body[0]) {
        case kCounters:
          cp.nodes_explored = r.Varint();
          cp.nodes_closed = r.Varint();
          cp.open_nodes = r.Varint();
          cp.max_modulus_exp_reached = r.Varint();
          cp.rounds = r.Varint();
          have_counters = true;
          break;
        case kFrontier:
          cp.frontier.push_back(GetState(r));
          break;
        case kWitness:
          cp.witnesses.push_back(GetState(r));
          break;
        case kEnd: {
          const std::uint64_t expected = r.Varint();
          if (expected != records) throw wire::DecodeError("record count mismatch");
          if (!r.AtEnd()) throw wire::DecodeError("trailing bytes in record");
          if (!file.AtEnd()) throw wire::DecodeError("data after end record");
          if (!have_counters) throw wire::DecodeError("missing counters record");
          return cp;
        }
        default:
          throw wire::DecodeError("unknown record kind " + std::to_string(body[0]));
      }
      if (!r.AtEnd()) throw wire::DecodeError("trailing bytes in record");
    } catch (const wire::DecodeError& e) {
      throw CheckpointError(path + ": record " + std::to_string(records) + " at byte " +
                                std::to_string(offset) + ": " + e.what(),
                            records);
    }
    ++records;
  }
}

}  // namespace cyclebound
