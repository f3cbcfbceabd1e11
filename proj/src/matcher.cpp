#include "sonar/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sonar/parallel.hpp"

namespace sonar {

namespace {
double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double geometry_dist(const GeoParams& a, const GeoParams& b) {
  const double d1 = a.mg1 - b.mg1, d2 = a.mg2 - b.mg2, d3 = a.mg3 - b.mg3;
  return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
}
}  // namespace

double misfit(int level, const WaveletCoeffs& a, const WaveletCoeffs& b) {
  if (a.lmax != b.lmax) throw std::invalid_argument("mismatched wavelet depths");
  if (level < 1 || level > a.lmax) throw std::out_of_range("misfit level out of range");
  const auto wa = approx_at_level(a, level);
  const auto wb = approx_at_level(b, level);
  return sq_dist(wa, wb) + sq_dist(a.detail(level), b.detail(level));
}

PreparedLibrary::PreparedLibrary(const LibraryIndex& lib, double angle,
                                 const MatchConfig& cfg)
    : lmax_(cfg.lmax) {
  if (lib.records.empty()) throw std::invalid_argument("empty template library");
  const auto recs = query(lib, std::nullopt, angle);
  entries_.reserve(recs.size());
  for (const auto* r : recs) {
    Entry e;
    e.record = r;
    e.coeffs = dwt_multilevel(r->backscatter, lmax_);
    for (int l = 1; l <= lmax_; ++l) e.approx_by_level.push_back(approx_at_level(e.coeffs, l));
    entries_.push_back(std::move(e));
  }
  if (entries_.empty())
    throw std::invalid_argument("no templates at the requested incident angle");
}

PreparedLibrary::Entry PreparedLibrary::prepare_signal(
    const std::vector<double>& segment) const {
  Entry e;
  e.record = nullptr;
  e.coeffs = dwt_multilevel(segment, lmax_);
  for (int l = 1; l <= lmax_; ++l) e.approx_by_level.push_back(approx_at_level(e.coeffs, l));
  return e;
}

double PreparedLibrary::misfit_at(int level, const Entry& e, const Entry& signal) const {
  return sq_dist(e.approx_by_level[static_cast<std::size_t>(level - 1)],
                 signal.approx_by_level[static_cast<std::size_t>(level - 1)]) +
         sq_dist(e.coeffs.detail(level), signal.coeffs.detail(level));
}

RefineOutcome refine_candidates(const std::vector<double>& segment_signal,
                                const PreparedLibrary& lib, const MatchConfig& cfg,
                                int threads) {
  const auto& entries = lib.entries();
  if (entries.size() > 0 &&
      segment_signal.size() != entries.front().record->backscatter.size())
    throw std::invalid_argument("segment length does not match template length");
  const PreparedLibrary::Entry sig = lib.prepare_signal(segment_signal);

  RefineOutcome out;
  std::vector<std::size_t> current(entries.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;
  std::vector<double> current_misfits;  // misfit at the level that formed `current`
  out.stop_level = cfg.lmax + 1;

  const int nthreads = resolve_threads(threads);
  for (int l = cfg.lmax; l >= 1; --l) {
    std::vector<double> level_misfits(current.size());
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::size_t i = 0; i < current.size(); ++i)
      level_misfits[i] = lib.misfit_at(l, entries[current[i]], sig);

    const double threshold = cfg.epsilon_tol * std::pow(2.0, -l);
    std::vector<std::size_t> next;
    std::vector<double> next_misfits;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (level_misfits[i] < threshold) {
        next.push_back(current[i]);
        next_misfits.push_back(level_misfits[i]);
      }
    }
    if (next.empty()) break;  // keep (l+1, L^{l+1})
    current = std::move(next);
    current_misfits = std::move(next_misfits);
    out.stop_level = l;
    out.candidate_counts.push_back(current.size());
  }

  if (out.stop_level == cfg.lmax + 1) {
    // Coarse fallback: nothing passed the level-lmax filter; select over the
    // full library by level-lmax misfit.
    current_misfits.resize(current.size());
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::size_t i = 0; i < current.size(); ++i)
      current_misfits[i] = lib.misfit_at(cfg.lmax, entries[current[i]], sig);
  }
  out.candidates = std::move(current);
  out.misfits = std::move(current_misfits);
  return out;
}

std::size_t select_with_penalty(const RefineOutcome& outcome, const PreparedLibrary& lib,
                                const std::optional<GeoParams>& prev,
                                const MatchConfig& cfg) {
  if (outcome.candidates.empty()) throw std::invalid_argument("empty candidate set");
  const auto& entries = lib.entries();
  std::size_t best = outcome.candidates.front();
  double best_score = std::numeric_limits<double>::max();
  std::uint32_t best_id = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
    const auto idx = outcome.candidates[i];
    const auto& e = entries[idx];
    double score = outcome.misfits[i];
    if (prev) score += cfg.delta_penalty * geometry_dist(e.record->params.geometry, *prev);
    if (score < best_score ||
        (score == best_score && e.record->id < best_id)) {
      best_score = score;
      best = idx;
      best_id = e.record->id;
    }
  }
  return best;
}

ClassificationResult classify(const std::vector<double>& signal, const LibraryIndex& lib,
                              const MatchConfig& cfg, const DomainSpec& d, double alpha,
                              int threads) {
  const int n1 = d.samples_per_segment;
  if (signal.empty() || signal.size() % static_cast<std::size_t>(n1) != 0)
    throw std::invalid_argument("signal length is not a whole number of segments");
  const int nseg = static_cast<int>(signal.size()) / n1;

  const PreparedLibrary prepared(lib, alpha, cfg);
  ClassificationResult result;
  std::optional<GeoParams> prev;
  for (int seg = 0; seg < nseg; ++seg) {
    const std::vector<double> part(signal.begin() + static_cast<std::ptrdiff_t>(seg) * n1,
                                   signal.begin() +
                                       static_cast<std::ptrdiff_t>(seg + 1) * n1);
    const auto outcome = refine_candidates(part, prepared, cfg, threads);
    const auto chosen = select_with_penalty(outcome, prepared, prev, cfg);
    const auto& entry = prepared.entries()[chosen];

    SegmentMatch m;
    m.segment_index = seg;
    m.chosen = entry.record->params;
    m.template_id = entry.record->id;
    m.stop_level = outcome.stop_level;
    m.candidate_counts = outcome.candidate_counts;
    for (std::size_t i = 0; i < outcome.candidates.size(); ++i)
      if (outcome.candidates[i] == chosen) m.final_misfit = outcome.misfits[i];
    result.matches.push_back(std::move(m));
    result.material_map.push_back(entry.record->params.material);
    result.prediction.insert(result.prediction.end(), entry.record->backscatter.begin(),
                             entry.record->backscatter.end());
    prev = entry.record->params.geometry;
  }
  return result;
}

}  // namespace sonar
