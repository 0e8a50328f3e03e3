#include "e2rc/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace e2rc {

namespace {

struct Tally {
  long frames = 0, bit_errors = 0, frame_errors = 0;
  long iters = 0;
  void merge(const Tally& o) {
    frames += o.frames;
    bit_errors += o.bit_errors;
    frame_errors += o.frame_errors;
    iters += o.iters;
  }
};

// one worker: run frames until told to stop; counts are order-insensitive
Tally run_frames(const LiftedCode& code, const std::vector<uint8_t>& bit_mask, double sigma,
                 double llr_scale, long frame_budget, uint64_t seed, int max_iters,
                 const std::atomic<long>* global_errors, long min_frame_errors) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::uniform_int_distribution<int> coin(0, 1);
  const int n = code.n(), k = code.k();
  auto sys = code.systematic_vars();
  std::vector<uint8_t> msg(k);
  std::vector<double> llr(n);
  Tally t;
  for (long f = 0; f < frame_budget; ++f) {
    if (global_errors && global_errors->load(std::memory_order_relaxed) >= min_frame_errors)
      break;
    for (int i = 0; i < k; ++i) msg[i] = uint8_t(coin(rng));
    std::vector<uint8_t> word = encode(code, msg);
    for (int i = 0; i < n; ++i) {
      if (bit_mask[i]) {
        llr[i] = 0.0;  // withheld from transmission
      } else {
        double y = (word[i] ? -1.0 : 1.0) + noise(rng);
        llr[i] = llr_scale * y;
      }
    }
    DecodeResult res = bp_decode(code, llr, max_iters);
    long errs = 0;
    for (size_t b = 0; b < sys.size(); ++b) {
      int v = sys[b];
      for (int x = 0; x < code.q; ++x)
        errs += res.bits[v * code.q + x] != word[v * code.q + x];
    }
    ++t.frames;
    t.iters += res.iterations;
    t.bit_errors += errs;
    t.frame_errors += errs > 0;
  }
  return t;
}

}  // namespace

std::vector<RateSimResult> simulate(const LiftedCode& code,
                                    const std::vector<std::vector<uint8_t>>& masks,
                                    const std::vector<double>& ebn0_list, const SimStop& stop,
                                    uint64_t seed, int threads, int max_iters) {
  if (masks.empty()) throw std::invalid_argument("no puncture masks given");
  // nested masks: each later mask must contain the previous one
  for (size_t i = 1; i < masks.size(); ++i) {
    if (masks[i].size() != masks[0].size() || int(masks[i].size()) != code.proto.num_vars())
      throw std::invalid_argument("mask size mismatch");
    for (size_t v = 0; v < masks[i].size(); ++v)
      if (masks[i - 1][v] && !masks[i][v])
        throw std::invalid_argument("puncture masks are not nested");
  }
  threads = std::max(1, threads);

  std::vector<RateSimResult> out;
  uint64_t stream = 0;
  for (const auto& mask : masks) {
    RateSimResult rs;
    rs.mask = mask;
    Protograph masked = code.proto;
    masked.punctured = mask;
    rs.rate = masked.transmitted_rate();

    std::vector<uint8_t> bit_mask(code.n(), 0);
    for (int v = 0; v < code.proto.num_vars(); ++v)
      if (mask[v]) std::fill_n(bit_mask.begin() + size_t(v) * code.q, code.q, uint8_t(1));

    for (double db : ebn0_list) {
      double sigma2 = 1.0 / (2.0 * rs.rate * std::pow(10.0, db / 10.0));
      double sigma = std::sqrt(sigma2);
      double llr_scale = 2.0 / sigma2;
      Tally total;
      ++stream;
      if (threads == 1) {
        long remaining = stop.max_frames;
        while (remaining > 0 && total.frame_errors < stop.min_frame_errors) {
          long chunk = std::min(remaining, std::max<long>(64, stop.max_frames / 64));
          Tally t = run_frames(code, bit_mask, sigma, llr_scale, chunk,
                               seed ^ (stream * 0x9E3779B97F4A7C15ull) ^ total.frames, max_iters,
                               nullptr, stop.min_frame_errors);
          total.merge(t);
          remaining -= t.frames;
          if (t.frames < chunk) break;
        }
      } else {
        std::atomic<long> global_errors{0};
        std::atomic<long> frames_left{stop.max_frames};
        std::vector<Tally> per(threads);
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
          pool.emplace_back([&, w]() {
            uint64_t wseed = seed ^ (stream * 0x9E3779B97F4A7C15ull) ^
                             (0xD1B54A32D192ED03ull * uint64_t(w + 1));
            while (global_errors.load(std::memory_order_relaxed) < stop.min_frame_errors) {
              long chunk = 256;
              long got = frames_left.fetch_sub(chunk);
              if (got <= 0) break;
              chunk = std::min(chunk, got);
              Tally t = run_frames(code, bit_mask, sigma, llr_scale, chunk, wseed++, max_iters,
                                   &global_errors, stop.min_frame_errors);
              per[w].merge(t);
              global_errors.fetch_add(t.frame_errors, std::memory_order_relaxed);
              if (t.frames < chunk) break;
            }
          });
        }
        for (auto& th : pool) th.join();
        for (auto& p : per) total.merge(p);
      }

      SimRow row;
      row.ebn0_db = db;
      row.rate = rs.rate;
      row.frames = total.frames;
      row.bit_errors = total.bit_errors;
      row.frame_errors = total.frame_errors;
      long info_bits = total.frames * long(code.k());
      row.ber = info_bits > 0 ? double(total.bit_errors) / double(info_bits) : 0.0;
      row.fer = total.frames > 0 ? double(total.frame_errors) / double(total.frames) : 0.0;
      row.avg_iters = total.frames > 0 ? double(total.iters) / double(total.frames) : 0.0;
      rs.rows.push_back(row);
    }
    out.push_back(std::move(rs));
  }
  return out;
}

double measured_threshold_db(const std::vector<SimRow>& rows, double target_ber) {
  std::vector<SimRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const SimRow& a, const SimRow& b) { return a.ebn0_db < b.ebn0_db; });
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].ber <= target_ber && sorted[i].ber >= 0.0) {
      if (i == 0) return sorted[0].ebn0_db;
      double b1 = std::max(sorted[i - 1].ber, 1e-12);
      double b2 = std::max(sorted[i].ber, 1e-12);
      if (b1 <= target_ber) return sorted[i - 1].ebn0_db;
      double t = (std::log10(b1) - std::log10(target_ber)) /
                 (std::log10(b1) - std::log10(b2));
      return sorted[i - 1].ebn0_db + t * (sorted[i].ebn0_db - sorted[i - 1].ebn0_db);
    }
  }
  return std::numeric_limits<double>::infinity();
}

std::string sim_rows_csv(const std::vector<SimRow>& rows) {
  std::ostringstream os;
  os << "ebn0_db,rate,frames,bit_errors,frame_errors,ber,fer,avg_iters\n";
  os.precision(10);
  for (const auto& r : rows) {
    os << r.ebn0_db << ',' << r.rate << ',' << r.frames << ',' << r.bit_errors << ','
       << r.frame_errors << ',' << r.ber << ',' << r.fer << ',' << r.avg_iters << '\n';
  }
  return os.str();
}

}  // namespace e2rc
