#include "onebit/sim/harness.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "onebit/channel.hpp"
#include "onebit/ci_mapping.hpp"
#include "onebit/linear_precoders.hpp"
#include "onebit/modulation.hpp"
#include "onebit/quantizer.hpp"
#include "onebit/rng.hpp"
#include "onebit/symbol_scaling.hpp"

namespace onebit {

namespace {

CVector transmit_for(Scheme sch, const CMatrix& h, const CVector& s,
                     const PskConstellation& c, const ExperimentConfig& cfg) {
  switch (sch) {
    case Scheme::kZfFd:
      return zf_precode_fd(h, s);
    case Scheme::kQuantizedZf:
      return quantized_zf(h, s).entries;
    case Scheme::kCiMapping:
      return ci_map_transmit(h, s, c).x.entries;
    case Scheme::kSymbolScaling:
      return symbol_scale(h, s, c,
                          {cfg.init_fallback, AllocationRule::kBestOfBoth})
          .x.entries;
    case Scheme::kSumMax:
      return symbol_scale(h, s, c, {cfg.init_fallback, AllocationRule::kSumMax})
          .x.entries;
    case Scheme::kMaxMin:
      return symbol_scale(h, s, c, {cfg.init_fallback, AllocationRule::kMaxMin})
          .x.entries;
  }
  throw std::invalid_argument("unknown scheme");
}

struct SchemeOutcome {
  CVector x;
  bool failed = false;
};

std::vector<SchemeOutcome> precode_all(const CMatrix& h_est, const CVector& s,
                                       const PskConstellation& c,
                                       const ExperimentConfig& cfg) {
  std::vector<SchemeOutcome> out(cfg.schemes.size());
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    try {
      out[i].x = transmit_for(cfg.schemes[i], h_est, s, c, cfg);
    } catch (const SingularChannelError&) {
      out[i].failed = true;
    } catch (const LpSolveError&) {
      out[i].failed = true;
    }
  }
  return out;
}

int gray_bit_errors(int true_index, int detected_index) {
  const unsigned gt = static_cast<unsigned>(true_index ^ (true_index >> 1));
  const unsigned gd =
      static_cast<unsigned>(detected_index ^ (detected_index >> 1));
  return std::popcount(gt ^ gd);
}

}  // namespace

const BerPoint& BerCurve::at(Scheme s, double snr_db) const {
  for (const auto& p : points)
    if (p.scheme == s && p.snr_db == snr_db) return p;
  throw std::out_of_range("no such (scheme, snr) point");
}

BerCurve run_ber_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const PskConstellation c(cfg.mod_order);
  const Index num_snr = static_cast<Index>(cfg.snr_db.size());
  const Index num_schemes = static_cast<Index>(cfg.schemes.size());
  const Index cells = num_schemes * num_snr;
  const int bps = c.bits_per_symbol();

  auto make_points = [&] {
    std::vector<BerPoint> pts(static_cast<std::size_t>(cells));
    for (Index si = 0; si < num_schemes; ++si)
      for (Index pi = 0; pi < num_snr; ++pi) {
        auto& p = pts[static_cast<std::size_t>(si * num_snr + pi)];
        p.scheme = cfg.schemes[static_cast<std::size_t>(si)];
        p.snr_db = cfg.snr_db[static_cast<std::size_t>(pi)];
      }
    return pts;
  };

  const int workers =
      static_cast<int>(std::min<Index>(cfg.workers, cfg.frames_per_point));
  std::vector<std::vector<BerPoint>> partials(
      static_cast<std::size_t>(workers));

  auto worker_fn = [&](int w) {
    std::vector<BerPoint>& local = partials[static_cast<std::size_t>(w)];
    local = make_points();
    for (Index f = w; f < cfg.frames_per_point; f += workers) {
      const std::uint64_t fu = static_cast<std::uint64_t>(f);
      const auto idx = uniform_indices(
          cfg.k, cfg.mod_order, frame_seed(cfg.master_seed, fu, Draw::kSymbols));
      CVector s(cfg.k);
      for (Index uk = 0; uk < cfg.k; ++uk)
        s(uk) = c.point(idx[static_cast<std::size_t>(uk)]);

      const Index block_start = f - f % cfg.channel_block_frames;
      const CMatrix h = sample_channel(
          cfg.k, cfg.nt,
          frame_seed(cfg.master_seed, static_cast<std::uint64_t>(block_start),
                     Draw::kChannel));
      const CVector noise =
          cfg.noiseless
              ? CVector::Zero(cfg.k)
              : complex_gaussian_vector(
                    cfg.k, 1.0,
                    frame_seed(cfg.master_seed, fu, Draw::kNoise));

      // With perfect CSI the precoders see the same matrix at every SNR,
      // so one precoding pass serves the whole row of points.
      std::vector<SchemeOutcome> shared;
      if (cfg.beta == 0.0) shared = precode_all(h, s, c, cfg);

      for (Index pi = 0; pi < num_snr; ++pi) {
        const double rho =
            std::pow(10.0, cfg.snr_db[static_cast<std::size_t>(pi)] / 10.0);
        std::vector<SchemeOutcome> per_snr;
        const std::vector<SchemeOutcome>* outcomes = &shared;
        if (cfg.beta > 0.0) {
          const CMatrix h_est =
              perturb_csi(h, CsiError(cfg.beta, rho),
                          frame_seed(cfg.master_seed, fu, Draw::kCsiError));
          per_snr = precode_all(h_est, s, c, cfg);
          outcomes = &per_snr;
        }

        bool any_failed = false;
        for (const auto& o : *outcomes) any_failed |= o.failed;
        if (any_failed) {
          for (Index si = 0; si < num_schemes; ++si)
            if ((*outcomes)[static_cast<std::size_t>(si)].failed)
              ++local[static_cast<std::size_t>(si * num_snr + pi)].failures;
          continue;
        }

        const double scale = std::sqrt(rho);
        for (Index si = 0; si < num_schemes; ++si) {
          const CVector y =
              scale * (h * (*outcomes)[static_cast<std::size_t>(si)].x) +
              noise;
          std::uint64_t errs = 0;
          for (Index uk = 0; uk < cfg.k; ++uk)
            errs += static_cast<std::uint64_t>(gray_bit_errors(
                idx[static_cast<std::size_t>(uk)], c.detect(y(uk)).index));
          auto& cell = local[static_cast<std::size_t>(si * num_snr + pi)];
          cell.bits += static_cast<std::uint64_t>(cfg.k) * bps;
          cell.bit_errors += errs;
          cell.error_sq_sum += errs * errs;
          ++cell.frames;
        }
      }
    }
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      threads.emplace_back(worker_fn, w);
    for (auto& t : threads) t.join();
  }

  BerCurve curve;
  curve.points = make_points();
  for (const auto& local : partials)
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      curve.points[i].bits += local[i].bits;
      curve.points[i].bit_errors += local[i].bit_errors;
      curve.points[i].frames += local[i].frames;
      curve.points[i].failures += local[i].failures;
      curve.points[i].error_sq_sum += local[i].error_sq_sum;
    }
  return curve;
}

std::vector<EtaPoint> run_eta_experiment(const std::vector<Index>& nt_list,
                                         Index k, Index realizations,
                                         std::uint64_t seed, int workers,
                                         int mod_order) {
  if (realizations < 1)
    throw std::invalid_argument("realizations must be >= 1");
  const PskConstellation c(mod_order);
  std::vector<EtaPoint> out;
  out.reserve(nt_list.size());

  for (const Index nt : nt_list) {
    if (nt < k) throw std::invalid_argument("need nt >= k");
    const std::uint64_t stream =
        mix_seed(seed, static_cast<std::uint64_t>(nt));
    const int w_count =
        static_cast<int>(std::min<Index>(workers, realizations));
    std::vector<std::uint64_t> interior_counts(
        static_cast<std::size_t>(w_count), 0);
    std::vector<Index> failures(static_cast<std::size_t>(w_count), 0);
    std::vector<Index> solved(static_cast<std::size_t>(w_count), 0);

    auto worker_fn = [&](int w) {
      for (Index r = w; r < realizations; r += w_count) {
        const std::uint64_t ru = static_cast<std::uint64_t>(r);
        const CMatrix h =
            sample_channel(k, nt, frame_seed(stream, ru, Draw::kChannel));
        const auto idx = uniform_indices(
            k, mod_order, frame_seed(stream, ru, Draw::kSymbols));
        CVector s(k);
        for (Index uk = 0; uk < k; ++uk)
          s(uk) = c.point(idx[static_cast<std::size_t>(uk)]);
        const LpSolution sol = solve_lp(build_relaxed_lp(h, s, c));
        if (sol.status != LpStatus::kOptimal) {
          ++failures[static_cast<std::size_t>(w)];
          continue;
        }
        CVector relaxed(nt);
        for (Index i = 0; i < nt; ++i)
          relaxed(i) = Complex(sol.z(i), sol.z(nt + i));
        const AlphabetCheck chk = is_valid_output(relaxed, nt);
        interior_counts[static_cast<std::size_t>(w)] +=
            static_cast<std::uint64_t>(chk.interior_total());
        ++solved[static_cast<std::size_t>(w)];
      }
    };

    if (w_count == 1) {
      worker_fn(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(w_count));
      for (int w = 0; w < w_count; ++w) threads.emplace_back(worker_fn, w);
      for (auto& t : threads) t.join();
    }

    EtaPoint pt;
    pt.nt = nt;
    std::uint64_t total = 0;
    Index ok = 0;
    for (int w = 0; w < w_count; ++w) {
      total += interior_counts[static_cast<std::size_t>(w)];
      ok += solved[static_cast<std::size_t>(w)];
      pt.lp_failures += failures[static_cast<std::size_t>(w)];
    }
    pt.realizations = ok;
    pt.mean_eta = ok == 0 ? 0.0
                          : static_cast<double>(total) /
                                (2.0 * static_cast<double>(nt) *
                                 static_cast<double>(ok));
    out.push_back(pt);
  }
  return out;
}

}  // namespace onebit
