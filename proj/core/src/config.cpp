#include "mgmc/config.hpp"

#include "mgmc/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace mgmc {

using nlohmann::json;

namespace {

/// Reads fields from one JSON object and rejects keys nobody asked for.
class Section {
public:
  Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  template <class T> void get(const char *key, T &out) {
    seen_.insert(key);
    if (!j_.contains(key))
      return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception &e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  const json *child(const char *key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const char *key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto &[key, value] : j_.items())
      if (!seen_.count(key))
        throw ConfigError(path_ + ": unknown key '" + key + "'");
  }

private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F> auto guarded(const std::string &path, F &&f) {
  try {
    return f();
  } catch (const InvalidArgument &e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ObservationSource source_from_string(const std::string &s, const std::string &path) {
  if (s == "none")
    return ObservationSource::none;
  if (s == "synthetic")
    return ObservationSource::synthetic;
  if (s == "file")
    return ObservationSource::file;
  throw ConfigError(path + ": unknown observation source '" + s + "'");
}

std::string to_string(ObservationSource s) {
  switch (s) {
  case ObservationSource::none:
    return "none";
  case ObservationSource::synthetic:
    return "synthetic";
  case ObservationSource::file:
    return "file";
  }
  return "none";
}

} // namespace

RunConfig config_from_json(const json &j) {
  RunConfig c;
  Section root(j, "config");
  root.get("version", c.version);
  if (c.version != kConfigVersion)
    throw ConfigError("config.version: unsupported version " + std::to_string(c.version));
  root.get("seed", c.seed);
  root.get("threads", c.threads);
  if (c.threads < 1)
    throw ConfigError("config.threads: must be at least 1");
  root.get("output", c.output);

  if (const json *p = root.child("problem")) {
    Section s(*p, root.path("problem"));
    s.get("dimension", c.problem.dimension);
    s.get("cells", c.problem.cells);
    std::string op = to_string(c.problem.op);
    s.get("operator", op);
    c.problem.op = guarded(s.path("operator"), [&] { return operator_kind_from_string(op); });
    s.get("kappa_sq", c.problem.kappa_sq);
    if (const json *l = s.child("coarsenings"); l && !l->is_null())
      c.problem.coarsenings = l->get<int>();
    s.finish();
  }
  if (c.problem.dimension != 2 && c.problem.dimension != 3)
    throw ConfigError("config.problem.dimension: must be 2 or 3");
  if (c.problem.cells < 2)
    throw ConfigError("config.problem.cells: must be at least 2");
  if (!(c.problem.kappa_sq > 0.0))
    throw ConfigError("config.problem.kappa_sq: must be positive");

  if (const json *o = root.child("observations")) {
    Section s(*o, root.path("observations"));
    std::string src = to_string(c.observations.source);
    s.get("source", src);
    c.observations.source = source_from_string(src, s.path("source"));
    s.get("file", c.observations.file);
    s.get("count", c.observations.count);
    s.get("radius", c.observations.radius);
    s.get("value_range", c.observations.value_range);
    s.get("variance_range", c.observations.variance_range);
    s.finish();
  }
  if (c.observations.source == ObservationSource::file && c.observations.file.empty())
    throw ConfigError("config.observations.file: required when source is 'file'");
  if (c.observations.count < 0)
    throw ConfigError("config.observations.count: must be non-negative");
  if (!(c.observations.radius > 0.0))
    throw ConfigError("config.observations.radius: must be positive");
  if (!(c.observations.variance_range[0] > 0.0) ||
      c.observations.variance_range[1] < c.observations.variance_range[0])
    throw ConfigError("config.observations.variance_range: need 0 < lo <= hi");

  if (const json *q = root.child("qoi")) {
    Section s(*q, root.path("qoi"));
    std::vector<double> centre(c.qoi.centre.begin(), c.qoi.centre.end());
    s.get("centre", centre);
    if (centre.size() < 2 || centre.size() > 3)
      throw ConfigError("config.qoi.centre: expected 2 or 3 coordinates");
    for (std::size_t i = 0; i < centre.size(); ++i)
      c.qoi.centre[i] = centre[i];
    s.get("radius", c.qoi.radius);
    s.finish();
  }

  if (const json *sm = root.child("sampler")) {
    Section s(*sm, root.path("sampler"));
    s.get("kind", c.sampler.kind);
    s.get("nu1", c.sampler.cycle.nu1);
    s.get("nu2", c.sampler.cycle.nu2);
    s.get("nu0", c.sampler.cycle.nu0);
    s.get("omega", c.sampler.cycle.omega);
    std::string shape = to_string(c.sampler.cycle.shape);
    s.get("cycle", shape);
    c.sampler.cycle.shape = guarded(s.path("cycle"), [&] { return cycle_shape_from_string(shape); });
    std::string coarse = to_string(c.sampler.cycle.coarse);
    s.get("coarse", coarse);
    c.sampler.cycle.coarse =
        guarded(s.path("coarse"), [&] { return coarse_mode_from_string(coarse); });
    s.get("gibbs_sweeps", c.sampler.gibbs_sweeps);
    s.finish();
  }
  guarded("config.sampler", [&] {
    c.sampler.cycle.validate();
    return 0;
  });
  if (c.sampler.gibbs_sweeps < 1)
    throw ConfigError("config.sampler.gibbs_sweeps: must be at least 1");

  if (const json *e = root.child("experiment")) {
    Section s(*e, root.path("experiment"));
    s.get("steps", c.experiment.steps);
    s.get("warmup", c.experiment.warmup);
    s.get("chains", c.experiment.chains);
    s.get("grids", c.experiment.grids);
    s.get("samplers", c.experiment.samplers);
    s.get("lengths", c.experiment.lengths);
    s.get("max_lag", c.experiment.max_lag);
    s.get("wolff_s", c.experiment.wolff_s);
    s.get("max_rel_error", c.experiment.max_rel_error);
    s.get("timing_updates", c.experiment.timing_updates);
    s.get("write_states", c.experiment.write_states);
    s.finish();
  }
  if (c.experiment.steps < 1 || c.experiment.warmup < 0 || c.experiment.chains < 1)
    throw ConfigError("config.experiment: steps >= 1, warmup >= 0, chains >= 1 required");
  for (const auto &k : c.experiment.samplers)
    if (k != "mgmc" && k != "gibbs" && k != "cholesky")
      throw ConfigError("config.experiment.samplers: unknown sampler '" + k + "'");
  if (c.sampler.kind != "mgmc" && c.sampler.kind != "gibbs" && c.sampler.kind != "cholesky")
    throw ConfigError("config.sampler.kind: unknown sampler '" + c.sampler.kind + "'");

  root.finish();
  return c;
}

json config_to_json(const RunConfig &c) {
  json j;
  j["version"] = c.version;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output"] = c.output;
  j["problem"] = {{"dimension", c.problem.dimension},
                  {"cells", c.problem.cells},
                  {"operator", to_string(c.problem.op)},
                  {"kappa_sq", c.problem.kappa_sq},
                  {"coarsenings", c.problem.coarsenings ? json(*c.problem.coarsenings) : json()}};
  j["observations"] = {{"source", to_string(c.observations.source)},
                       {"file", c.observations.file},
                       {"count", c.observations.count},
                       {"radius", c.observations.radius},
                       {"value_range", c.observations.value_range},
                       {"variance_range", c.observations.variance_range}};
  std::vector<double> centre(c.qoi.centre.begin(),
                             c.qoi.centre.begin() + c.problem.dimension);
  j["qoi"] = {{"centre", centre}, {"radius", c.qoi.radius}};
  j["sampler"] = {{"kind", c.sampler.kind},
                  {"cycle", to_string(c.sampler.cycle.shape)},
                  {"nu1", c.sampler.cycle.nu1},
                  {"nu2", c.sampler.cycle.nu2},
                  {"nu0", c.sampler.cycle.nu0},
                  {"coarse", to_string(c.sampler.cycle.coarse)},
                  {"omega", c.sampler.cycle.omega},
                  {"gibbs_sweeps", c.sampler.gibbs_sweeps}};
  j["experiment"] = {{"steps", c.experiment.steps},
                     {"warmup", c.experiment.warmup},
                     {"chains", c.experiment.chains},
                     {"grids", c.experiment.grids},
                     {"samplers", c.experiment.samplers},
                     {"lengths", c.experiment.lengths},
                     {"max_lag", c.experiment.max_lag},
                     {"wolff_s", c.experiment.wolff_s},
                     {"max_rel_error", c.experiment.max_rel_error},
                     {"timing_updates", c.experiment.timing_updates},
                     {"write_states", c.experiment.write_states}};
  return j;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig &c) {
  // threads and output do not influence results
  json j = config_to_json(c);
  j.erase("threads");
  j.erase("output");
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace mgmc
