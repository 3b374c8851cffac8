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

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "cyclebound/collatz.h"

namespace cyclebound {

namespace {

using u128 = unsigned __int128;

// Past this an odd step x + x/2 + 1 could overflow 128 bits.
constexpr u128 kWideLimit = ~u128{0} / 4;
// Descents longer than this are reported as unconfirmed rather than looping
// forever on a hypothetical cycle.
constexpr std::uint64_t kMaxSteps = std::uint64_t{1} << 24;
constexpr std::size_t kRecordBytes = 24;

BigInt ToBig(u128 x) {
  BigInt hi(static_cast<unsigned long>(x >> 64));
  BigInt lo(static_cast<unsigned long>(x));
  return (hi << 64) + lo;
}

int TrailingZeros128(u128 x) {
  const auto low = static_cast<std::uint64_t>(x);
  if (low != 0) return __builtin_ctzll(low);
  return 64 + __builtin_ctzll(static_cast<std::uint64_t>(x >> 64));
}

struct BlockResult {
  u128 max_excursion = 0;
  std::optional<BigInt> big_excursion;  // set once a trajectory left 128 bits
  std::optional<std::uint64_t> first_failure;
};

bool DescendBig(BigInt x, std::uint64_t n, std::uint64_t steps,
                BlockResult& out) {
  const BigInt start(static_cast<unsigned long>(n));
  while (x >= start) {
    if (++steps > kMaxSteps) return false;
    if (mpz_odd_p(x.get_mpz_t())) {
      x = (3 * x + 1) / 2;
      if (!out.big_excursion || x > *out.big_excursion) out.big_excursion = x;
    } else {
      x /= 2;
    }
  }
  return true;
}

// True when the trajectory of n drops below n.
bool Descend(std::uint64_t n, BlockResult& out) {
  u128 x = n;
  std::uint64_t steps = 0;
  while (x >= n) {
    if (++steps > kMaxSteps) return false;
    if (x & 1) {
      if (x > kWideLimit) return DescendBig(ToBig(x), n, steps, out);
      x = x + (x >> 1) + 1;
      if (x > out.max_excursion) out.max_excursion = x;
    } else {
      x >>= TrailingZeros128(x);
    }
  }
  return true;
}

BlockResult RunBlock(std::uint64_t start, std::uint64_t end) {
  BlockResult out;
  // Even n halve immediately; n = 1 mod 4 drops to (3n+1)/4 after reaching
  // (3n+1)/2, which still counts toward the excursion.
  std::uint64_t last_one_mod_four = 0;
  for (std::uint64_t n = end;; --n) {
    if ((n & 3) == 1 && n > 1) {
      last_one_mod_four = n;
      break;
    }
    if (n == start) break;
  }
  if (last_one_mod_four != 0) {
    out.max_excursion = (u128{3} * last_one_mod_four + 1) / 2;
  }
  std::uint64_t n = start + ((3 - (start & 3)) & 3);
  for (; n <= end && n >= start; n += 4) {
    if (!Descend(n, out)) {
      out.first_failure = n;
      break;
    }
  }
  return out;
}

void PutLe64(std::array<unsigned char, kRecordBytes>& buf, std::size_t at,
             std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf[at + i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint64_t GetLe64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

struct CheckpointRecord {
  std::uint64_t end = 0;
  std::uint64_t max_excursion = 0;
};

// Reads complete records; a partial trailing record is ignored.
std::map<std::uint64_t, CheckpointRecord> ReadCheckpoint(const std::string& path) {
  std::map<std::uint64_t, CheckpointRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::array<unsigned char, kRecordBytes> buf{};
  while (in.read(reinterpret_cast<char*>(buf.data()), kRecordBytes)) {
    out[GetLe64(buf.data())] = {GetLe64(buf.data() + 8), GetLe64(buf.data() + 16)};
  }
  return out;
}

}  // namespace

RangeVerifierReport VerifyRange(std::uint64_t limit, const VerifyOptions& options) {
  if (limit < 2) throw std::invalid_argument("VerifyRange requires limit >= 2");
  if (options.block_size < 4) throw std::invalid_argument("block_size must be >= 4");
  if (limit > (std::uint64_t{1} << 62)) {
    throw std::invalid_argument("VerifyRange limit above 2^62 is not supported");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t block = options.block_size;
  const std::uint64_t num_blocks = limit / block + 1;
  auto block_range = [&](std::uint64_t b) {
    return std::pair{std::max<std::uint64_t>(b * block, 2),
                     std::min<std::uint64_t>((b + 1) * block - 1, limit)};
  };

  RangeVerifierReport report;
  report.limit = limit;
  report.max_excursion = 0;
  std::vector<char> done(num_blocks, 0);
  std::ofstream log;
  if (!options.checkpoint_path.empty()) {
    if (options.resume) {
      for (const auto& [start, rec] : ReadCheckpoint(options.checkpoint_path)) {
        if (start % block != 0 && start != 2) continue;
        const std::uint64_t b = start / block;
        if (b >= num_blocks || block_range(b) != std::pair{start, rec.end}) continue;
        if (!done[b]) ++report.blocks_resumed;
        done[b] = 1;
        if (BigInt(static_cast<unsigned long>(rec.max_excursion)) > report.max_excursion) {
          report.max_excursion = static_cast<unsigned long>(rec.max_excursion);
        }
      }
      // Drop a torn trailing record so appends stay aligned.
      std::error_code ec;
      const auto size = std::filesystem::file_size(options.checkpoint_path, ec);
      if (!ec && size % kRecordBytes != 0) {
        std::filesystem::resize_file(options.checkpoint_path,
                                     size - size % kRecordBytes);
      }
    }
    log.open(options.checkpoint_path,
             std::ios::binary | (options.resume ? std::ios::app : std::ios::trunc));
    if (!log) throw std::runtime_error("cannot open checkpoint " + options.checkpoint_path);
  }

  std::atomic<std::uint64_t> next{0};
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= num_blocks) return;
      if (done[b]) continue;
      const auto [start, end] = block_range(b);
      if (start > end) continue;
      BlockResult r = RunBlock(start, end);
      const BigInt block_max = r.big_excursion ? *r.big_excursion : ToBig(r.max_excursion);
      std::lock_guard<std::mutex> lock(mu);
      if (block_max > report.max_excursion) report.max_excursion = block_max;
      if (r.first_failure) {
        if (!report.first_failure || *r.first_failure < *report.first_failure) {
          report.first_failure = r.first_failure;
        }
        continue;  // failed blocks are not checkpointed
      }
      if (log.is_open()) {
        std::array<unsigned char, kRecordBytes> buf{};
        PutLe64(buf, 0, start);
        PutLe64(buf, 8, end);
        const std::uint64_t saturated =
            block_max.fits_ulong_p() ? block_max.get_ui() : ~std::uint64_t{0};
        PutLe64(buf, 16, saturated);
        log.write(reinterpret_cast<const char*>(buf.data()), kRecordBytes);
        log.flush();
      }
    }
  };
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  report.verified = !report.first_failure.has_value();
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace cyclebound
