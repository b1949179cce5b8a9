#pragma once

// JSON instance and result files, content digests, random instance
// generation and the CSV summary table.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "klhull/error.hpp"
#include "klhull/linalg.hpp"
#include "klhull/quadmap.hpp"
#include "klhull/random.hpp"

namespace klhull {

using Json = nlohmann::json;

// Either a trace-one PSD matrix X or weighted points, both in the
// coordinates of the instance.
struct Witness {
  std::optional<SymMatrix> x;
  std::vector<Vector> points;
  Vector weights;

  bool is_matrix() const { return x.has_value(); }
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Instance {
  QuadraticMap map;
  std::optional<Witness> witness;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.map.forms() == b.map.forms() && a.witness == b.witness;
  }
};

namespace detail {

inline Json matrix_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (const auto& r : m.rows()) rows.push_back(r);
  return rows;
}

template <class T>
T get_field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string(where) + ": field \"" + key + "\" has the wrong type");
  }
}

inline std::vector<Vector> parse_rows(const Json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(what + ": expected " + std::to_string(n) + " rows");
  std::vector<Vector> rows;
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != n)
      throw ParseError(what + ": expected rows of length " + std::to_string(n));
    Vector row;
    for (const auto& v : r) {
      if (!v.is_number()) throw ParseError(what + ": non-numeric entry");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Rejects input that is not symmetric; SymMatrix itself would silently
// average the two triangles.
inline SymMatrix parse_symmetric(const Json& j, std::size_t n, const std::string& what) {
  const auto rows = parse_rows(j, n, what);
  double scale = 0.0, asym = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      scale = std::max(scale, std::abs(rows[r][c]));
      asym = std::max(asym, std::abs(rows[r][c] - rows[c][r]));
    }
  if (asym > 1e-12 * std::max(scale, 1.0)) throw InvalidArgument(what + " is not symmetric");
  return SymMatrix::from_rows(rows);
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace detail

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// FNV-1a of the compact dump; object keys are sorted, so the digest does not
// depend on field order in the source file.
inline std::string json_digest(const Json& j) { return detail::hex64(fnv1a64(j.dump())); }

inline Json to_json(const Instance& inst) {
  Json j;
  j["n"] = inst.map.n();
  j["k"] = inst.map.k();
  Json q = Json::array();
  for (const auto& f : inst.map.forms()) q.push_back(detail::matrix_json(f));
  j["Q"] = std::move(q);
  if (inst.witness) {
    Json w;
    if (inst.witness->is_matrix()) {
      w["X"] = detail::matrix_json(*inst.witness->x);
    } else {
      w["points"] = inst.witness->points;
      w["weights"] = inst.witness->weights;
    }
    j["witness"] = std::move(w);
  }
  return j;
}

// Throws ParseError for malformed JSON or schema mismatches and the
// validation errors of QuadraticMap / SpectahedronPoint / SimplexVector for
// mathematically invalid content.
inline Instance instance_from_json(const Json& j) {
  const auto n_raw = detail::get_field<long long>(j, "n", "instance");
  const auto k_raw = detail::get_field<long long>(j, "k", "instance");
  if (n_raw < 1 || k_raw < 1) throw ParseError("instance: n and k must be >= 1");
  const auto n = static_cast<std::size_t>(n_raw), k = static_cast<std::size_t>(k_raw);
  if (!j.contains("Q") || !j["Q"].is_array() || j["Q"].size() != k)
    throw ParseError("instance: \"Q\" must be an array of k matrices");
  std::vector<SymMatrix> forms;
  for (std::size_t i = 0; i < k; ++i)
    forms.push_back(detail::parse_symmetric(j["Q"][i], n, "Q[" + std::to_string(i) + "]"));
  Instance inst{QuadraticMap(std::move(forms)), std::nullopt};

  if (j.contains("witness")) {
    const Json& w = j["witness"];
    Witness wit;
    if (w.is_object() && w.contains("X")) {
      wit.x = detail::parse_symmetric(w["X"], n, "witness X");
      (void)SpectahedronPoint(*wit.x);
    } else if (w.is_object() && w.contains("points") && w.contains("weights")) {
      const auto pts = detail::get_field<std::vector<Vector>>(w, "points", "witness");
      const auto wts = detail::get_field<Vector>(w, "weights", "witness");
      if (pts.empty() || pts.size() != wts.size())
        throw ParseError("witness: points and weights must be non-empty and of equal length");
      for (const auto& p : pts)
        if (p.size() != n) throw ParseError("witness: point of wrong dimension");
      (void)SimplexVector(wts);
      wit.points = pts;
      wit.weights = wts;
      double mass = 0.0;
      for (std::size_t t = 0; t < pts.size(); ++t) mass += wts[t] * squared_norm(pts[t]);
      if (!(mass > 0.0)) throw InvalidArgument("witness: all points with positive weight are zero");
    } else {
      throw ParseError("witness: expected {\"X\": ...} or {\"points\": ..., \"weights\": ...}");
    }
    inst.witness = std::move(wit);
  }
  return inst;
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline Instance load_instance(const std::string& path) {
  return instance_from_json(parse_json_text(read_file(path), path));
}

inline std::string instance_digest(const Instance& inst) { return json_digest(to_json(inst)); }

// Random SPD forms. Q_i = G G^T / n + 1e-3 I with Gaussian G, then the
// log-spectrum is compressed affinely so that cond(Q_i) <= condition_cap and
// the form is scaled by a random factor in [1/2, 2]. condition_cap = 1 gives
// scalar multiples of I. The optional witness is a normalized Wishart matrix.
inline Instance generate_instance(std::size_t n, std::size_t k, std::uint64_t seed,
                                  double condition_cap, bool with_witness) {
  if (n < 1 || k < 1) throw InvalidArgument("generate: n and k must be >= 1");
  if (!(condition_cap >= 1.0)) throw InvalidArgument("generate: condition cap must be >= 1");
  const GaussianSampler root(seed, 0x67656eull);
  std::vector<SymMatrix> forms;
  for (std::size_t i = 0; i < k; ++i) {
    GaussianSampler s = root.substream(i);
    const double scale = std::exp2(2.0 * s.uniform() - 1.0);
    if (condition_cap == 1.0) {
      forms.push_back(SymMatrix::scaled_identity(n, scale));
      continue;
    }
    SquareMatrix g(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) g(r, c) = s.normal();
    SymMatrix q = SymMatrix(g * g.transpose()) / double(n) + SymMatrix::scaled_identity(n, 1e-3);
    const EigenDecomposition e = sym_eigen(q);
    const double lo = std::log(e.values.front()), hi = std::log(e.values.back());
    const double shrink = hi - lo > std::log(condition_cap) ? std::log(condition_cap) / (hi - lo) : 1.0;
    q = spectral_map(e, [&](double l) { return scale * std::exp(shrink * (std::log(l) - lo)); });
    forms.push_back(std::move(q));
  }
  Instance inst{QuadraticMap(std::move(forms)), std::nullopt};
  if (with_witness) {
    GaussianSampler s = root.substream(k);
    SquareMatrix h(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) h(r, c) = s.normal();
    const SymMatrix w(h * h.transpose());
    inst.witness = Witness{w / w.trace(), {}, {}};
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Result files

struct Timings {
  double prepare_ms = 0.0;
  double solve_round_ms = 0.0;
  double total_ms = 0.0;
};

struct ResultRecord {
  std::string command = "round";
  std::string mode;  // "rank-one" or "rank-m"
  int m = 1;
  std::uint64_t seed = 0;
  int budget = 0;
  double tol = 0.0;
  std::string instance_digest;
  std::size_t n = 0, k = 0;
  Vector a, b;
  double kl = 0.0;
  double bound = 0.0;
  double certificate = 0.0;
  double fw_gap = 0.0;
  double sdp_value = 0.0;
  long samples_drawn = 0;
  int trials = 0;
  int accepted_trials = 0;
  bool accepted = false;
  std::vector<Vector> points;  // instance coordinates; b is the mean of psi over them
  Timings timings;
  std::string digest;

  friend bool operator==(const ResultRecord& x, const ResultRecord& y) {
    return x.content_json() == y.content_json() && x.digest == y.digest;
  }

  // Everything except timings and digest.
  Json content_json() const {
    Json j;
    j["command"] = command;
    j["mode"] = mode;
    j["m"] = m;
    j["seed"] = seed;
    j["budget"] = budget;
    j["tol"] = tol;
    j["instance_digest"] = instance_digest;
    j["n"] = n;
    j["k"] = k;
    j["a"] = a;
    j["b"] = b;
    j["kl"] = kl;
    j["bound"] = bound;
    j["certificate"] = certificate;
    j["fw_gap"] = fw_gap;
    j["sdp_value"] = sdp_value;
    j["samples_drawn"] = samples_drawn;
    j["trials"] = trials;
    j["accepted_trials"] = accepted_trials;
    j["accepted"] = accepted;
    j["points"] = points;
    return j;
  }

  std::string compute_digest() const { return json_digest(content_json()); }

  Json to_json() const {
    Json j = content_json();
    j["timings"] = {{"prepare_ms", timings.prepare_ms},
                    {"solve_round_ms", timings.solve_round_ms},
                    {"total_ms", timings.total_ms}};
    j["digest"] = digest;
    return j;
  }
};

// Parses a result file and re-verifies kl against a and b, and the digest
// against the content.
inline ResultRecord result_from_json(const Json& j) {
  const char* w = "result";
  ResultRecord r;
  r.command = detail::get_field<std::string>(j, "command", w);
  r.mode = detail::get_field<std::string>(j, "mode", w);
  r.m = detail::get_field<int>(j, "m", w);
  r.seed = detail::get_field<std::uint64_t>(j, "seed", w);
  r.budget = detail::get_field<int>(j, "budget", w);
  r.tol = detail::get_field<double>(j, "tol", w);
  r.instance_digest = detail::get_field<std::string>(j, "instance_digest", w);
  r.n = detail::get_field<std::size_t>(j, "n", w);
  r.k = detail::get_field<std::size_t>(j, "k", w);
  r.a = detail::get_field<Vector>(j, "a", w);
  r.b = detail::get_field<Vector>(j, "b", w);
  r.kl = detail::get_field<double>(j, "kl", w);
  r.bound = detail::get_field<double>(j, "bound", w);
  r.certificate = detail::get_field<double>(j, "certificate", w);
  r.fw_gap = detail::get_field<double>(j, "fw_gap", w);
  r.sdp_value = detail::get_field<double>(j, "sdp_value", w);
  r.samples_drawn = detail::get_field<long>(j, "samples_drawn", w);
  r.trials = detail::get_field<int>(j, "trials", w);
  r.accepted_trials = detail::get_field<int>(j, "accepted_trials", w);
  r.accepted = detail::get_field<bool>(j, "accepted", w);
  r.points = detail::get_field<std::vector<Vector>>(j, "points", w);
  if (j.contains("timings")) {
    const Json& t = j["timings"];
    r.timings.prepare_ms = detail::get_field<double>(t, "prepare_ms", "timings");
    r.timings.solve_round_ms = detail::get_field<double>(t, "solve_round_ms", "timings");
    r.timings.total_ms = detail::get_field<double>(t, "total_ms", "timings");
  }
  r.digest = detail::get_field<std::string>(j, "digest", w);

  if (r.a.size() != r.k || r.b.size() != r.k) throw ParseError("result: a and b must have length k");
  const double kl = kl_divergence(SimplexVector(r.a), SimplexVector(r.b));
  if (!(std::abs(kl - r.kl) <= 1e-12 * std::max(1.0, std::abs(kl))))
    throw ParseError("result: kl does not match D(a||b) recomputed from a and b");
  if (r.compute_digest() != r.digest) throw ParseError("result: digest does not match content");
  return r;
}

inline ResultRecord load_result(const std::string& path) {
  return result_from_json(parse_json_text(read_file(path), path));
}

// ---------------------------------------------------------------------------
// CSV

inline const char* kCsvHeader = "n,k,m,kl,bound,margin,fw_gap,samples_drawn,accepted";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One row per record, sorted by (m, digest).
inline std::string csv_report(std::vector<ResultRecord> records) {
  std::sort(records.begin(), records.end(), [](const ResultRecord& x, const ResultRecord& y) {
    return x.m != y.m ? x.m < y.m : x.digest < y.digest;
  });
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + "," + std::to_string(r.k) + "," + std::to_string(r.m) + "," +
           format_double(r.kl) + "," + format_double(r.bound) + "," +
           format_double(r.bound - r.kl) + "," + format_double(r.fw_gap) + "," +
           std::to_string(r.samples_drawn) + "," + (r.accepted ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace klhull
