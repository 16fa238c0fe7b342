#include "pragnav/cli/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "pragnav/common/random.hpp"

namespace pragnav::cli {

using nlohmann::json;

namespace {

class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(where() + "must be an object");
  }

  void integer(const char* key, int& out, int min) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + "must be an integer");
      const auto x = v->get<long long>();
      if (x < min) throw ConfigError(where(key) + "must be at least " + std::to_string(min));
      out = static_cast<int>(x);
    }
  }

  void size(const char* key, std::size_t& out, std::size_t min) {
    int x = static_cast<int>(out);
    integer(key, x, static_cast<int>(min));
    out = static_cast<std::size_t>(x);
  }

  void seed(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
        throw ConfigError(where(key) + "must be a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void real(const char* key, double& out, double lo, double hi, bool open_lo = false) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + "must be a number");
      const double x = v->get<double>();
      if (x < lo || x > hi || (open_lo && x == lo)) {
        throw ConfigError(where(key) + "out of range");
      }
      out = x;
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(where(key) + "must be true or false");
      out = v->get<bool>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + "must be a string");
      out = v->get<std::string>();
    }
  }

  const json* take(const char* key) {
    used_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where(const char* key = nullptr) const {
    const std::string p = key ? child_path(key) : path_;
    return (p.empty() ? std::string("config") : p) + ": ";
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError("unknown key '" + child_path(it.key().c_str()) + "'");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

template <typename Fn>
void section(Section& parent, const char* key, Fn&& fill) {
  if (const json* v = parent.take(key)) {
    Section s(*v, parent.child_path(key));
    fill(s);
    s.finish();
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig rc;
  auto& e = rc.experiment;
  Section root(doc, "");
  if (!doc.contains("seed")) throw ConfigError("config: 'seed' is required");
  root.seed("seed", e.seed);
  std::string out_dir = rc.output_dir.string();
  root.text("output_dir", out_dir);
  if (out_dir.empty()) throw ConfigError("output_dir: must not be empty");
  rc.output_dir = out_dir;

  section(root, "world", [&](Section& s) {
    auto& d = e.dataset;
    s.integer("num_envs", d.num_envs, 2);
    s.integer("routes_per_env", d.routes_per_env, 1);
    s.integer("nodes_per_env", d.nodes_per_env, 8);
    s.real("ambiguity", d.ambiguity, 0.0, 1.0);
    s.real("val_seen_routes", d.splits.val_seen_routes, 0.0, 1.0, true);
    s.real("val_unseen_envs", d.splits.val_unseen_envs, 0.0, 1.0, true);
    s.integer("train_paraphrases", d.train_paraphrases, 1);
    s.integer("val_paraphrases", d.val_paraphrases, 1);
  });
  section(root, "follower", [&](Section& s) {
    s.size("embedding", e.follower.embedding, 1);
    s.size("hidden", e.follower.hidden, 1);
    s.size("attention", e.follower.attention, 1);
  });
  section(root, "speaker", [&](Section& s) {
    s.size("embedding", e.speaker.embedding, 1);
    s.size("hidden", e.speaker.hidden, 1);
  });
  section(root, "follower_train", [&](Section& s) {
    auto& t = e.follower_train;
    s.integer("iterations", t.iterations, 1);
    s.integer("batch_size", t.batch_size, 1);
    s.real("learning_rate", t.adam.learning_rate, 0.0, 1.0, true);
    s.real("clip_norm", t.clip_norm, 0.0, 1e9, true);
    s.integer("max_actions", t.max_actions, 1);
    s.integer("log_every", t.log_every, 0);
    std::string forcing = t.forcing == follower::Forcing::kStudent ? "student" : "teacher";
    s.text("forcing", forcing);
    if (forcing == "student") {
      t.forcing = follower::Forcing::kStudent;
    } else if (forcing == "teacher") {
      t.forcing = follower::Forcing::kTeacher;
    } else {
      throw ConfigError("follower_train.forcing: expected 'student' or 'teacher'");
    }
  });
  section(root, "speaker_train", [&](Section& s) {
    auto& t = e.speaker_train;
    s.integer("iterations", t.iterations, 1);
    s.integer("batch_size", t.batch_size, 1);
    s.real("learning_rate", t.adam.learning_rate, 0.0, 1.0, true);
    s.real("clip_norm", t.clip_norm, 0.0, 1e9, true);
    s.integer("log_every", t.log_every, 0);
  });
  section(root, "augment", [&](Section& s) { s.real("multiplier", e.augment_multiplier, 0.0, 1e6); });
  section(root, "pragmatic", [&](Section& s) {
    s.size("K", e.pragmatic.k, 1);
    s.real("lambda", e.pragmatic.lambda, 0.0, 1.0);
    s.integer("max_actions", e.pragmatic.max_actions, 1);
    s.boolean("heading_in_state", e.pragmatic.heading_in_state);
  });
  section(root, "sweeps", [&](Section& s) {
    if (const json* v = s.take("lambdas")) {
      if (!v->is_array() || v->empty()) throw ConfigError("sweeps.lambdas: must be a non-empty array");
      e.lambdas.clear();
      for (const auto& x : *v) {
        if (!x.is_number() || x.get<double>() < 0 || x.get<double>() > 1) {
          throw ConfigError("sweeps.lambdas: entries must be numbers in [0, 1]");
        }
        e.lambdas.push_back(x.get<double>());
      }
    }
    if (const json* v = s.take("ks")) {
      if (!v->is_array() || v->empty()) throw ConfigError("sweeps.ks: must be a non-empty array");
      e.ks.clear();
      for (const auto& x : *v) {
        if (!x.is_number_integer() || x.get<long long>() < 1) {
          throw ConfigError("sweeps.ks: entries must be positive integers");
        }
        e.ks.push_back(x.get<std::size_t>());
      }
    }
  });
  section(root, "eval", [&](Section& s) {
    s.real("threshold", e.threshold, 0.0, 1e9, true);
    s.integer("workers", e.eval_workers, 1);
    s.size("probe_examples", e.probe_examples, 0);
  });
  root.finish();
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string() + ": invalid JSON: " + err.what());
  }
  return parse_config(doc);
}

json config_to_json(const RunConfig& rc) {
  const auto& e = rc.experiment;
  const auto& d = e.dataset;
  return {
      {"seed", e.seed},
      {"output_dir", rc.output_dir.string()},
      {"world",
       {{"num_envs", d.num_envs},
        {"routes_per_env", d.routes_per_env},
        {"nodes_per_env", d.nodes_per_env},
        {"ambiguity", d.ambiguity},
        {"val_seen_routes", d.splits.val_seen_routes},
        {"val_unseen_envs", d.splits.val_unseen_envs},
        {"train_paraphrases", d.train_paraphrases},
        {"val_paraphrases", d.val_paraphrases}}},
      {"follower",
       {{"embedding", e.follower.embedding}, {"hidden", e.follower.hidden}, {"attention", e.follower.attention}}},
      {"speaker", {{"embedding", e.speaker.embedding}, {"hidden", e.speaker.hidden}}},
      {"follower_train",
       {{"iterations", e.follower_train.iterations},
        {"batch_size", e.follower_train.batch_size},
        {"learning_rate", e.follower_train.adam.learning_rate},
        {"clip_norm", e.follower_train.clip_norm},
        {"max_actions", e.follower_train.max_actions},
        {"log_every", e.follower_train.log_every},
        {"forcing", e.follower_train.forcing == follower::Forcing::kStudent ? "student" : "teacher"}}},
      {"speaker_train",
       {{"iterations", e.speaker_train.iterations},
        {"batch_size", e.speaker_train.batch_size},
        {"learning_rate", e.speaker_train.adam.learning_rate},
        {"clip_norm", e.speaker_train.clip_norm},
        {"log_every", e.speaker_train.log_every}}},
      {"augment", {{"multiplier", e.augment_multiplier}}},
      {"pragmatic",
       {{"K", e.pragmatic.k},
        {"lambda", e.pragmatic.lambda},
        {"max_actions", e.pragmatic.max_actions},
        {"heading_in_state", e.pragmatic.heading_in_state}}},
      {"sweeps", {{"lambdas", e.lambdas}, {"ks", e.ks}}},
      {"eval",
       {{"threshold", e.threshold}, {"workers", e.eval_workers}, {"probe_examples", e.probe_examples}}},
  };
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(config).dump())));
  return buf;
}

std::filesystem::path resolve_output_dir(const RunConfig& config) {
  if (config.output_dir.is_relative()) {
    if (const char* root = std::getenv("PRAGNAV_OUTPUT_ROOT"); root && *root) {
      return std::filesystem::path(root) / config.output_dir;
    }
  }
  return config.output_dir;
}

}  // namespace pragnav::cli
