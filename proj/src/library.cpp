#include "sonar/library.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "sonar/config.hpp"
#include "sonar/errors.hpp"
#include "sonar/io.hpp"
#include "sonar/parallel.hpp"

namespace sonar {

double ParamGrid::grid_value(double lo, double hi, int n, int i) {
  if (n <= 1) return lo;
  return lo + (hi - lo) * i / (n - 1);
}

std::vector<double> ParamGrid::alphas() const {
  std::vector<double> out;
  for (int i = 0; i < n_alpha; ++i) out.push_back(grid_value(alpha_min, alpha_max, n_alpha, i));
  return out;
}

std::vector<GeoParams> ParamGrid::geometries() const {
  std::vector<GeoParams> out;
  for (int i1 = 0; i1 < n_mg1; ++i1)
    for (int i2 = 0; i2 < n_mg2; ++i2)
      for (int i3 = 0; i3 < n_mg3; ++i3) {
        GeoParams g;
        g.mg1 = grid_value(mg1_min, mg1_max, n_mg1, i1);
        g.mg2 = grid_value(mg2_min, mg2_max, n_mg2, i2);
        g.mg3 = grid_value(mg3_min, mg3_max, n_mg3, i3);
        out.push_back(g);
      }
  return out;
}

namespace {

struct BuildTask {
  bool transition = false;
  SeafloorParams left;   // also the pure params when !transition
  SeafloorParams right;  // transition only
  double alpha = 0;
};

std::vector<BuildTask> enumerate_tasks(const ParamGrid& grid) {
  std::vector<BuildTask> tasks;
  const auto alphas = grid.alphas();
  const auto geoms = grid.geometries();
  for (const auto a : alphas)
    for (const auto m : grid.materials)
      for (const auto& g : geoms) {
        BuildTask t;
        t.left = {m, g, 0.02};
        t.alpha = a;
        tasks.push_back(t);
      }
  for (const auto a : alphas)
    for (const auto& [lm, rm] : grid.transitions)
      for (const auto& g : geoms) {
        BuildTask t;
        t.transition = true;
        t.left = {lm, g, 0.02};
        t.right = {rm, g, 0.02};
        t.alpha = a;
        tasks.push_back(t);
      }
  return tasks;
}

void check_magnitudes(const std::vector<double>& values, double cap, double p0) {
  for (const double v : values)
    if (!(v >= 0.0) || v > cap * p0)
      throw NumericalError("template magnitude out of bounds (PML/solver blowup?)");
}

// Runs one task and fills its two records (ids preassigned by the caller).
void run_task(const BuildTask& t, const ExperimentParams& base_exp, const DomainSpec& d,
              const SolveSpec& s, double cap, TemplateRecord& rec_a, TemplateRecord& rec_b) {
  ExperimentParams exp = base_exp;
  exp.incident_angle = t.alpha;
  const double ds = d.segment_width;
  if (!t.transition) {
    const SolveResult sol = solve_template(t.left, exp, d, s);
    const auto prof_a = backscatter_profile(sol.scattered, exp, d, kDefaultR0,
                                            kDefaultEpsilonReg, 1, 1.0 * ds, 1);
    const auto prof_b = backscatter_profile(sol.scattered, exp, d, kDefaultR0,
                                            kDefaultEpsilonReg, 1, 2.0 * ds, 1);
    rec_a.params = t.left;
    rec_a.alpha = t.alpha;
    rec_a.backscatter = prof_a.values;
    rec_a.provenance = Provenance::PurePeriodic;
    rec_b = rec_a;
    rec_b.id = rec_a.id + 1;
    rec_b.backscatter = prof_b.values;
  } else {
    const SolveResult sol = solve_transition(t.left, t.right, exp, d, s);
    const double half = s.domain_width_factor * ds;
    const auto prof_a = backscatter_profile(sol.scattered, exp, d, kDefaultR0,
                                            kDefaultEpsilonReg, 1, half - ds, 1);
    const auto prof_b = backscatter_profile(sol.scattered, exp, d, kDefaultR0,
                                            kDefaultEpsilonReg, 1, half, 1);
    rec_a.params = t.left;
    rec_a.alpha = t.alpha;
    rec_a.backscatter = prof_a.values;
    rec_a.provenance = Provenance::TransitionExtract;
    rec_a.left = t.left.material;
    rec_a.right = t.right.material;
    rec_a.side = Side::Left;
    rec_b = rec_a;
    rec_b.id = rec_a.id + 1;
    rec_b.params = t.right;
    rec_b.backscatter = prof_b.values;
    rec_b.side = Side::Right;
  }
  check_magnitudes(rec_a.backscatter, cap, base_exp.source_strength);
  check_magnitudes(rec_b.backscatter, cap, base_exp.source_strength);
}

}  // namespace

LibraryIndex build_library(const ParamGrid& grid, const ExperimentParams& exp,
                           const DomainSpec& d, const SolveSpec& s, int threads,
                           const BuildProgress& progress) {
  if (grid.materials.empty() && grid.transitions.empty())
    throw std::invalid_argument("empty parameter grid");
  const auto tasks = enumerate_tasks(grid);

  LibraryIndex index;
  index.grid = grid;
  index.exp = exp;
  index.domain = d;
  index.solve = s;
  index.records.resize(2 * tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    index.records[2 * t].id = static_cast<std::uint32_t>(2 * t);
    index.records[2 * t + 1].id = static_cast<std::uint32_t>(2 * t + 1);
  }

  const int nthreads = resolve_threads(threads);
  std::atomic<std::size_t> done{0};
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    try {
      run_task(tasks[t], exp, d, s, index.magnitude_cap, index.records[2 * t],
               index.records[2 * t + 1]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
    const std::size_t n = ++done;
    if (progress) {
#pragma omp critical
      progress(n, tasks.size());
    }
  }
  if (error) std::rethrow_exception(error);
  return index;
}

// ---------------------------------------------------------------------------
// Persistence: magic, u64 header length, JSON header, float64 LE payload,
// u32 CRC32 over header bytes + payload bytes.

namespace {
constexpr char kMagic[8] = {'S', 'O', 'N', 'A', 'R', 'L', 'B', '1'};

using nlohmann::json;

json record_header(const TemplateRecord& r) {
  json j{{"id", r.id},
         {"params", r.params},
         {"alpha", r.alpha},
         {"n", r.backscatter.size()},
         {"provenance", r.provenance == Provenance::PurePeriodic ? "pure" : "transition"}};
  if (r.provenance == Provenance::TransitionExtract) {
    j["left"] = material_name(r.left);
    j["right"] = material_name(r.right);
    j["side"] = r.side == Side::Left ? "left" : "right";
  }
  return j;
}

TemplateRecord record_from_header(const json& j) {
  TemplateRecord r;
  r.id = j.at("id").get<std::uint32_t>();
  from_json(j.at("params"), r.params);
  r.alpha = j.at("alpha").get<double>();
  const auto prov = j.at("provenance").get<std::string>();
  if (prov == "pure") {
    r.provenance = Provenance::PurePeriodic;
  } else if (prov == "transition") {
    r.provenance = Provenance::TransitionExtract;
    r.left = material_from_name(j.at("left"));
    r.right = material_from_name(j.at("right"));
    r.side = j.at("side").get<std::string>() == "left" ? Side::Left : Side::Right;
  } else {
    throw DataFormatError("unknown record provenance: " + prov);
  }
  return r;
}
}  // namespace

void save_library(const LibraryIndex& index, const std::string& path) {
  json header{{"version", 1},
              {"grid", index.grid},
              {"experiment", index.exp},
              {"domain", index.domain},
              {"solver", index.solve},
              {"metadata", index.build_metadata},
              {"magnitude_cap", index.magnitude_cap}};
  json recs = json::array();
  for (const auto& r : index.records) recs.push_back(record_header(r));
  header["records"] = std::move(recs);
  const std::string htext = header.dump();

  std::vector<double> payload;
  for (const auto& r : index.records)
    payload.insert(payload.end(), r.backscatter.begin(), r.backscatter.end());

  std::uint32_t crc = crc32(htext.data(), htext.size());
  crc = crc32(payload.data(), payload.size() * sizeof(double), crc);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataFormatError("cannot open for writing: " + path);
  f.write(kMagic, sizeof(kMagic));
  const std::uint64_t hlen = htext.size();
  f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  f.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  f.write(reinterpret_cast<const char*>(payload.data()),
          static_cast<std::streamsize>(payload.size() * sizeof(double)));
  f.write(reinterpret_cast<const char*>(&crc), sizeof(crc));
  if (!f) throw DataFormatError("write failed: " + path);
}

LibraryIndex load_library(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataFormatError("cannot open: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataFormatError("not a template library file (bad magic): " + path);
  std::uint64_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!f || hlen == 0 || hlen > (1ull << 30))
    throw DataFormatError("corrupt library header length: " + path);
  std::string htext(hlen, '\0');
  f.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!f) throw DataFormatError("truncated library header: " + path);

  json header;
  try {
    header = json::parse(htext);
  } catch (const json::exception& e) {
    throw DataFormatError(std::string("corrupt library header JSON: ") + e.what());
  }

  LibraryIndex index;
  try {
    if (header.at("version").get<int>() != 1)
      throw DataFormatError("unsupported library version in " + path);
    from_json(header.at("grid"), index.grid);
    from_json(header.at("experiment"), index.exp);
    from_json(header.at("domain"), index.domain);
    from_json(header.at("solver"), index.solve);
    index.build_metadata = header.at("metadata").get<std::string>();
    index.magnitude_cap = header.at("magnitude_cap").get<double>();
    std::size_t total = 0;
    for (const auto& jr : header.at("records")) {
      index.records.push_back(record_from_header(jr));
      total += jr.at("n").get<std::size_t>();
    }
    std::vector<double> payload(total);
    f.read(reinterpret_cast<char*>(payload.data()),
           static_cast<std::streamsize>(total * sizeof(double)));
    if (!f) throw DataFormatError("truncated library payload: " + path);
    std::uint32_t stored_crc = 0;
    f.read(reinterpret_cast<char*>(&stored_crc), sizeof(stored_crc));
    if (!f) throw DataFormatError("missing library checksum: " + path);
    std::uint32_t crc = crc32(htext.data(), htext.size());
    crc = crc32(payload.data(), payload.size() * sizeof(double), crc);
    if (crc != stored_crc) throw DataFormatError("library checksum mismatch: " + path);
    std::size_t off = 0;
    std::size_t ri = 0;
    for (const auto& jr : header.at("records")) {
      const auto n = jr.at("n").get<std::size_t>();
      index.records[ri].backscatter.assign(payload.begin() + static_cast<std::ptrdiff_t>(off),
                                           payload.begin() +
                                               static_cast<std::ptrdiff_t>(off + n));
      off += n;
      ++ri;
    }
  } catch (const json::exception& e) {
    throw DataFormatError(std::string("invalid library header fields: ") + e.what());
  }
  return index;
}

std::vector<const TemplateRecord*> query(const LibraryIndex& index,
                                         std::optional<Material> material, double angle) {
  const auto alphas = index.grid.alphas();
  double best_alpha = 0;
  double best_dist = std::numeric_limits<double>::max();
  for (const double a : alphas) {
    const double dist = std::abs(a - angle);
    if (dist < best_dist - 1e-15) {  // strict improvement: earlier index wins ties
      best_dist = dist;
      best_alpha = a;
    }
  }
  std::vector<const TemplateRecord*> out;
  for (const auto& r : index.records) {
    if (std::abs(r.alpha - best_alpha) > 1e-12) continue;
    if (material && r.params.material != *material) continue;
    out.push_back(&r);
  }
  std::sort(out.begin(), out.end(),
            [](const TemplateRecord* a, const TemplateRecord* b) { return a->id < b->id; });
  return out;
}

}  // namespace sonar
