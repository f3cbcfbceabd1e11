#pragma once

#include <optional>
#include <vector>

#include "sonar/core.hpp"
#include "sonar/library.hpp"
#include "sonar/wavelet.hpp"

namespace sonar {

struct MatchConfig {
  double epsilon_tol = 1.0 / 256.0;  // 2^-8
  double delta_penalty = 0.02;
  int lmax = 5;

  bool valid() const { return epsilon_tol > 0 && delta_penalty >= 0 && lmax >= 1; }
};

struct SegmentMatch {
  int segment_index = 0;
  SeafloorParams chosen;
  std::uint32_t template_id = 0;
  int stop_level = 0;  // l*, or lmax+1 when the coarsest filter emptied
  double final_misfit = 0;
  std::vector<std::size_t> candidate_counts;  // per level lmax..stop_level
};

struct ClassificationResult {
  std::vector<SegmentMatch> matches;
  std::vector<double> prediction;  // F[m], length N * samples_per_segment
  std::vector<Material> material_map;
};

/// Level-l misfit ||w^l_a - w^l_b||^2 + ||v^l_a - v^l_b||^2 with the level-l
/// approximation vectors reconstructed by partial inverse transform.
double misfit(int level, const WaveletCoeffs& a, const WaveletCoeffs& b);

/// Library records at the matching angle with precomputed wavelet
/// decompositions and per-level approximation vectors, shared across
/// segments of one classification run.
class PreparedLibrary {
 public:
  PreparedLibrary(const LibraryIndex& lib, double angle, const MatchConfig& cfg);

  struct Entry {
    const TemplateRecord* record;
    WaveletCoeffs coeffs;
    std::vector<std::vector<double>> approx_by_level;  // index l-1 -> w^l
  };
  const std::vector<Entry>& entries() const { return entries_; }
  int lmax() const { return lmax_; }

  /// Level-l misfit against a prepared segment signal.
  double misfit_at(int level, const Entry& e, const Entry& signal) const;
  Entry prepare_signal(const std::vector<double>& segment) const;

 private:
  std::vector<Entry> entries_;
  int lmax_;
};

struct RefineOutcome {
  int stop_level = 0;                    // l* (lmax+1 on coarse fallback)
  std::vector<std::size_t> candidates;   // indices into PreparedLibrary entries
  std::vector<double> misfits;           // misfit at stop_level (or lmax) per candidate
  std::vector<std::size_t> candidate_counts;
};

/// Nested candidate refinement: L^l = {m in L^{l+1} : misfit_l < eps 2^-l},
/// stopping one level above the first empty set. threads: 0 = auto.
RefineOutcome refine_candidates(const std::vector<double>& segment_signal,
                                const PreparedLibrary& lib, const MatchConfig& cfg,
                                int threads = 0);

/// Argmin of misfit + delta * ||mg - prev_mg|| over the candidate set; ties
/// broken by smallest template id.
std::size_t select_with_penalty(const RefineOutcome& outcome, const PreparedLibrary& lib,
                                const std::optional<GeoParams>& prev,
                                const MatchConfig& cfg);

/// Left-to-right greedy classification of a concatenated multi-segment
/// signal against the library.
ClassificationResult classify(const std::vector<double>& signal, const LibraryIndex& lib,
                              const MatchConfig& cfg, const DomainSpec& d, double alpha,
                              int threads = 0);

}  // namespace sonar
