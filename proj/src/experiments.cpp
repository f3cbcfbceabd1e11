#include "sonar/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include "sonar/parallel.hpp"

namespace sonar {

Material SeabedModel::material_at(double x) const {
  for (const auto& r : materials)
    if (x >= r.x0 && x < r.x1) return r.material;
  if (materials.empty()) throw std::invalid_argument("seabed model has no material regions");
  return x < materials.front().x0 ? materials.front().material : materials.back().material;
}

std::vector<double> SeabedModel::junctions() const {
  std::vector<double> js;
  for (std::size_t i = 1; i < materials.size(); ++i) {
    if (materials[i].material != materials[i - 1].material) js.push_back(materials[i].x0);
  }
  if (object) {
    js.push_back(object->first);
    js.push_back(object->second);
  }
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-9; }),
           js.end());
  std::erase_if(js, [&](double j) { return j <= 1e-9 || j >= width - 1e-9; });
  return js;
}

SeabedModel model_a() {
  SeabedModel m;
  m.width = 20.0;
  m.materials = {{0, 2, Material::Sand},
                 {2, 5, Material::Rock},
                 {5, 8, Material::Clay},
                 {8, 20, Material::Sand}};
  m.geometry_of_x = [](double) {
    GeoParams g;
    g.mg1 = 15.0;
    g.mg2 = 1.0;
    g.mg3 = 26.0;
    return g;
  };
  m.object_anchor = 14.0;
  return m;
}

SeabedModel model_b() {
  SeabedModel m;
  m.width = 20.0;
  m.materials = {{0, 5, Material::Sand}, {5, 13, Material::Rock}, {13, 20, Material::Clay}};
  m.geometry_of_x = [](double x) {
    GeoParams g;
    g.mg1 = 14.0;
    if (x >= 5.0 && x < 10.0) g.mg1 += 0.2 * x - 1.0;
    if (x >= 10.0 && x < 20.0) g.mg1 += 1.0;
    g.mg2 = 1.0;
    if (x >= 10.0 && x < 20.0) g.mg2 += 0.5 - 0.05 * x;
    g.mg3 = 25.0 + x / 20.0;
    return g;
  };
  m.object_anchor = 4.0;
  return m;
}

SeabedModel with_object(const SeabedModel& model, double t_w) {
  if (t_w < 0) throw std::invalid_argument("object width must be non-negative");
  if (t_w == 0) return model;
  SeabedModel out = model;
  out.object = {model.object_anchor - t_w, model.object_anchor};
  return out;
}

SeabedModel rescale_geometry(const SeabedModel& model, double factor) {
  SeabedModel out = model;
  auto base = model.geometry_of_x;
  out.geometry_of_x = [base, factor](double x) {
    GeoParams g = base(x);
    g.mg1 *= factor;
    g.mg3 *= factor;
    return g;
  };
  return out;
}

namespace {

std::string geo_key(const GeoParams& g) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%lld:%lld:%lld:%lld",
                static_cast<long long>(std::llround(g.mg1 * 1e12)),
                static_cast<long long>(std::llround(g.mg2 * 1e12)),
                static_cast<long long>(std::llround(g.mg3 * 1e12)),
                static_cast<long long>(std::llround(g.amplitude * 1e12)));
  return buf;
}

struct SegmentContext {
  bool embedded = false;
  // Pure: the single-segment parameterization.
  SeafloorParams pure;
  // Embedded: two halves split at local 4*ds plus an optional object span.
  SeafloorParams left, right;
  std::optional<std::pair<double, double>> object;  // local coords
  double object_eps = 0.02;
  double extract_x = 0;  // local x of the extracted segment start
  std::string key;
};

// Decides how segment i of the model is solved so that on-grid segments
// reproduce library template solves exactly.
SegmentContext segment_context(const SeabedModel& model, int i, const DomainSpec& d,
                               const SolveSpec& s) {
  const double ds = d.segment_width;
  const double L = i * ds, R = (i + 1) * ds;
  const double tol = 1e-9;
  const double half = s.domain_width_factor * ds;

  const auto js = model.junctions();
  std::optional<double> at_right, at_left, interior;
  for (const double j : js) {
    if (std::abs(j - R) < tol) at_right = j;
    else if (std::abs(j - L) < tol) at_left = j;
    else if (j > L && j < R) interior = j;
  }

  const GeoParams g_here = model.geometry_of_x(L + 0.5 * ds);
  const auto covered_by_object = [&](double a, double b) {
    return model.object && model.object->first <= a + tol && model.object->second >= b - tol;
  };

  SegmentContext ctx;
  // A segment fully covered by the object is an on-grid Metal segment and is
  // solved on the periodic Metal template domain, junctions notwithstanding;
  // only partially covered segments need the embedded explicit-span solve.
  if (covered_by_object(L, R) || (!at_right && !at_left && !interior)) {
    ctx.embedded = false;
    Material m = model.material_at(L + 0.5 * ds);
    if (covered_by_object(L, R)) m = Material::Metal;
    ctx.pure = {m, g_here, model.object_eps};
    ctx.key = "P:" + std::string(material_name(m)) + ":" + geo_key(g_here);
    return ctx;
  }

  ctx.embedded = true;
  double anchor;
  if (at_right) {
    anchor = *at_right;
    ctx.extract_x = half - ds;
  } else if (at_left) {
    anchor = *at_left;
    ctx.extract_x = half;
  } else {
    anchor = L;  // junction strictly inside: window starts at the segment
    ctx.extract_x = half;
  }
  const double off = anchor - half;

  const GeoParams g_left = model.geometry_of_x(anchor - 0.5 * ds);
  const GeoParams g_right = model.geometry_of_x(anchor + 0.5 * ds);
  Material ml = model.material_at(anchor - 0.5 * ds);
  Material mr = model.material_at(anchor + 0.5 * ds);
  // Whole half-windows covered by the object are modeled as the Metal
  // material (sand over metal below -eps), matching transition templates.
  if (covered_by_object(anchor - half, anchor)) ml = Material::Metal;
  if (covered_by_object(anchor, anchor + half)) mr = Material::Metal;
  ctx.left = {ml, g_left, model.object_eps};
  ctx.right = {mr, g_right, model.object_eps};

  if (model.object && ml != Material::Metal && mr != Material::Metal) {
    // Partial object coverage: carry the explicit object span, clipped to
    // the window.
    const double lo = std::max(model.object->first - off, 0.0);
    const double hi = std::min(model.object->second - off, 2.0 * half);
    if (hi - lo > tol) {
      ctx.object = {lo, hi};
      ctx.object_eps = model.object_eps;
    }
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f:%.9f:%.9f",
                ctx.object ? ctx.object->first : -1.0,
                ctx.object ? ctx.object->second : -1.0, ctx.extract_x);
  ctx.key = "E:" + std::string(material_name(ctx.left.material)) + ":" + geo_key(g_left) +
            "|" + material_name(ctx.right.material) + ":" + geo_key(g_right) + "|" + buf;
  return ctx;
}

}  // namespace

BackscatterSignal simulate_seabed(const SeabedModel& model, const ExperimentParams& exp,
                                  const DomainSpec& d, const SolveSpec& s,
                                  FidelityMode mode, int threads) {
  const double ds = d.segment_width;
  const int nseg = static_cast<int>(std::llround(model.width / ds));
  if (std::abs(nseg * ds - model.width) > 1e-9)
    throw std::invalid_argument("model width must be a whole number of segments");

  BackscatterSignal sig;
  sig.alpha = exp.incident_angle;
  sig.segment_width = ds;

  if (mode == FidelityMode::FullDomain) {
    std::vector<MediumMap::Region> regions;
    for (int i = 0; i < nseg; ++i) {
      const double L = i * ds;
      regions.push_back({L, L + ds,
                         {model.material_at(L + 0.5 * ds), model.geometry_of_x(L + 0.5 * ds),
                          model.object_eps}});
    }
    MediumMap medium(std::move(regions), exp);
    if (model.object) medium.set_object(model.object->first, model.object->second,
                                        model.object_eps);
    const SolveResult sol = solve_helmholtz(medium, exp, d, s, model.width);
    return backscatter_profile(sol.scattered, exp, d, kDefaultR0, kDefaultEpsilonReg, nseg,
                               0.0, threads);
  }

  // Segmented mode: cache per-context extracted profiles.
  std::map<std::string, std::vector<double>> cache;
  const double half = s.domain_width_factor * ds;
  for (int i = 0; i < nseg; ++i) {
    const SegmentContext ctx = segment_context(model, i, d, s);
    auto it = cache.find(ctx.key);
    if (it == cache.end()) {
      std::vector<double> values;
      if (!ctx.embedded) {
        const SolveResult sol = solve_template(ctx.pure, exp, d, s);
        values = backscatter_profile(sol.scattered, exp, d, kDefaultR0, kDefaultEpsilonReg,
                                     1, ds, threads)
                     .values;
      } else {
        MediumMap medium({{-1e30, half, ctx.left}, {half, 1e30, ctx.right}}, exp);
        if (ctx.object)
          medium.set_object(ctx.object->first, ctx.object->second, ctx.object_eps);
        const SolveResult sol = solve_helmholtz(medium, exp, d, s, 2.0 * half);
        values = backscatter_profile(sol.scattered, exp, d, kDefaultR0, kDefaultEpsilonReg,
                                     1, ctx.extract_x, threads)
                     .values;
      }
      it = cache.emplace(ctx.key, std::move(values)).first;
    }
    sig.values.insert(sig.values.end(), it->second.begin(), it->second.end());
    const double dx = ds / d.samples_per_segment;
    for (int j = 0; j < d.samples_per_segment; ++j)
      sig.x_coords.push_back(i * ds + j * dx);
  }
  return sig;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

BackscatterSignal add_noise(const BackscatterSignal& d, double level, std::uint64_t seed) {
  if (level < 0) throw std::invalid_argument("noise level must be non-negative");
  if (level == 0) return d;
  double rms = 0;
  for (const double v : d.values) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(d.values.size()));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, level * rms);
  BackscatterSignal out = d;
  for (auto& v : out.values) v += gauss(rng);
  return out;
}

namespace {
struct TrialOutcome {
  std::vector<Material> labels;
  std::vector<GeoParams> geometries;
};
}  // namespace

TrialReport evaluate(int trials, const SeabedModel& model, const std::vector<double>& widths,
                     const LibraryIndex& lib, const MatchConfig& cfg,
                     const ExperimentParams& exp, const DomainSpec& d, const SolveSpec& s,
                     double noise_level, std::uint64_t seed, FidelityMode mode,
                     int threads) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const double ds = d.segment_width;
  const int nseg = static_cast<int>(std::llround(model.width / ds));

  TrialReport report;
  report.n_trials = trials;
  report.seed = seed;
  report.noise_level = noise_level;

  // Static transition instances (material junctions of the object-free model).
  struct Junction {
    std::string type;
    int left_seg, right_seg;
  };
  std::vector<Junction> mat_junctions;
  {
    SeabedModel bare = model;
    bare.object.reset();
    for (const double j : bare.junctions()) {
      const int right = static_cast<int>(std::llround(j / ds));
      if (right <= 0 || right >= nseg) continue;
      const std::string type = std::string(material_name(bare.material_at(j - 0.5 * ds))) +
                               "-" + material_name(bare.material_at(j + 0.5 * ds));
      mat_junctions.push_back({type, right - 1, right});
    }
  }

  std::map<std::string, std::pair<int, int>> fa_counts;  // type -> (alarms, instances)
  std::map<double, std::pair<int, int>> det_counts;      // width -> (hits, instances)
  double e_sum[3] = {0, 0, 0};
  int e_runs = 0;
  long correct = 0, total_labeled = 0;

  const int nthreads = resolve_threads(threads);
  std::uint64_t run_index = 0;
  for (const double w : widths) {
    const SeabedModel mw = with_object(model, w);
    const BackscatterSignal base = simulate_seabed(mw, exp, d, s, mode, threads);

    std::vector<Material> truth(static_cast<std::size_t>(nseg));
    std::vector<bool> is_object(static_cast<std::size_t>(nseg), false);
    std::vector<GeoParams> truth_geo(static_cast<std::size_t>(nseg));
    for (int i = 0; i < nseg; ++i) {
      const double L = i * ds, R = (i + 1) * ds;
      truth[static_cast<std::size_t>(i)] = mw.material_at(L + 0.5 * ds);
      truth_geo[static_cast<std::size_t>(i)] = mw.geometry_of_x(L + 0.5 * ds);
      if (mw.object) {
        const double overlap =
            std::min(R, mw.object->second) - std::max(L, mw.object->first);
        if (overlap > 1e-9) {
          is_object[static_cast<std::size_t>(i)] = true;
          truth[static_cast<std::size_t>(i)] = Material::Metal;
        }
      }
    }

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (int t = 0; t < trials; ++t) {
      try {
        const auto noisy =
            add_noise(base, noise_level, derive_seed(seed, run_index + static_cast<std::uint64_t>(t)));
        const auto result = classify(noisy.values, lib, cfg, d, exp.incident_angle, 1);
        TrialOutcome& oc = outcomes[static_cast<std::size_t>(t)];
        oc.labels = result.material_map;
        for (const auto& m : result.matches) oc.geometries.push_back(m.chosen.geometry);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    run_index += static_cast<std::uint64_t>(trials);

    for (const auto& oc : outcomes) {
      for (int i = 0; i < nseg; ++i) {
        ++total_labeled;
        if (oc.labels[static_cast<std::size_t>(i)] == truth[static_cast<std::size_t>(i)])
          ++correct;
      }
      // False alarms at material transitions, excluding object segments.
      for (const auto& jn : mat_junctions) {
        for (const int sidx : {jn.left_seg, jn.right_seg}) {
          if (is_object[static_cast<std::size_t>(sidx)]) continue;
          auto& [alarms, instances] = fa_counts[jn.type];
          ++instances;
          if (oc.labels[static_cast<std::size_t>(sidx)] == Material::Metal) ++alarms;
        }
      }
      // Detection.
      if (mw.object) {
        auto& [hits, instances] = det_counts[w];
        for (int i = 0; i < nseg; ++i) {
          if (!is_object[static_cast<std::size_t>(i)]) continue;
          ++instances;
          if (oc.labels[static_cast<std::size_t>(i)] == Material::Metal) ++hits;
        }
      }
      // Geometry errors E_i = ||truth - est||_2 / (sqrt(N) ||truth||_2).
      double num[3] = {0, 0, 0}, den[3] = {0, 0, 0};
      for (int i = 0; i < nseg; ++i) {
        const GeoParams& tg = truth_geo[static_cast<std::size_t>(i)];
        const GeoParams& eg = oc.geometries[static_cast<std::size_t>(i)];
        const double tv[3] = {tg.mg1, tg.mg2, tg.mg3};
        const double ev[3] = {eg.mg1, eg.mg2, eg.mg3};
        for (int c = 0; c < 3; ++c) {
          num[c] += (tv[c] - ev[c]) * (tv[c] - ev[c]);
          den[c] += tv[c] * tv[c];
        }
        report.per_segment_mg2_abs_error.push_back(std::abs(tv[1] - ev[1]));
      }
      for (int c = 0; c < 3; ++c)
        e_sum[c] += std::sqrt(num[c]) / (std::sqrt(static_cast<double>(nseg)) *
                                         std::sqrt(std::max(den[c], 1e-300)));
      ++e_runs;
    }
  }

  for (const auto& [type, counts] : fa_counts)
    report.false_alarm_rates[type] =
        counts.second ? static_cast<double>(counts.first) / counts.second : 0.0;
  for (const auto& [w, counts] : det_counts)
    report.detection_rates[w] =
        counts.second ? static_cast<double>(counts.first) / counts.second : 0.0;
  for (int c = 0; c < 3; ++c)
    report.geometry_errors[c] = e_runs ? e_sum[c] / e_runs : 0.0;
  report.material_accuracy =
      total_labeled ? static_cast<double>(correct) / static_cast<double>(total_labeled) : 0.0;
  return report;
}

using nlohmann::json;

void to_json(json& j, const TrialReport& r) {
  json det = json::object();
  for (const auto& [w, rate] : r.detection_rates) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", w);
    det[buf] = rate;
  }
  j = json{{"false_alarm_rates", r.false_alarm_rates},
           {"detection_rates", det},
           {"geometry_errors", {r.geometry_errors[0], r.geometry_errors[1], r.geometry_errors[2]}},
           {"material_accuracy", r.material_accuracy},
           {"n_trials", r.n_trials},
           {"seed", r.seed},
           {"noise_level", r.noise_level},
           {"per_segment_mg2_abs_error", r.per_segment_mg2_abs_error}};
}

void from_json(const json& j, TrialReport& r) {
  r.false_alarm_rates =
      j.at("false_alarm_rates").get<std::map<std::string, double>>();
  r.detection_rates.clear();
  for (const auto& [k, v] : j.at("detection_rates").items())
    r.detection_rates[std::stod(k)] = v.get<double>();
  const auto& ge = j.at("geometry_errors");
  for (int c = 0; c < 3; ++c) r.geometry_errors[c] = ge.at(c).get<double>();
  r.material_accuracy = j.at("material_accuracy").get<double>();
  r.n_trials = j.at("n_trials").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.noise_level = j.at("noise_level").get<double>();
  r.per_segment_mg2_abs_error =
      j.at("per_segment_mg2_abs_error").get<std::vector<double>>();
}

}  // namespace sonar
