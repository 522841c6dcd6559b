#include "groundnav/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "forward.hpp"
#include "groundnav/compass.hpp"
#include "groundnav/error.hpp"
#include "groundnav/grounder.hpp"
#include "groundnav/nnet/optim.hpp"

namespace groundnav {

using nlohmann::json;
using nnet::Tape;
using nnet::Var;

namespace {

constexpr double kAlphaMargin = kPi / 8.0;

double wrap_offset(double diff) { return wrap_angle(diff) - diff; }

std::string fmt_rate(const std::optional<double>& r) {
  if (!r) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << 100.0 * *r << "%";
  return s.str();
}

}  // namespace

json TrainConfig::to_json() const {
  return json{{"learning_rate", learning_rate}, {"epochs", epochs},
              {"holdout", holdout},             {"seed", seed},
              {"weight_type", weight_type},     {"weight_alpha", weight_alpha},
              {"weight_kappa", weight_kappa},   {"weight_area", weight_area},
              {"area_loss", area_loss},         {"hyperparameters", hyper.to_json()}};
}

TrainConfig TrainConfig::from_json(const json& j) {
  TrainConfig c;
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.holdout = j.value("holdout", c.holdout);
  c.seed = j.value("seed", c.seed);
  c.weight_type = j.value("weight_type", c.weight_type);
  c.weight_alpha = j.value("weight_alpha", c.weight_alpha);
  c.weight_kappa = j.value("weight_kappa", c.weight_kappa);
  c.weight_area = j.value("weight_area", c.weight_area);
  c.area_loss = j.value("area_loss", c.area_loss);
  if (j.contains("hyperparameters")) c.hyper = Hyperparameters::from_json(j["hyperparameters"]);
  if (!(c.holdout > 0.0 && c.holdout < 1.0)) {
    throw std::invalid_argument("holdout must lie in (0, 1)");
  }
  if (c.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(c.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  return c;
}

double loss_alpha_value(double alpha, double target) {
  const double d = wrap_angle(alpha - target);
  return std::max(d * d - kAlphaMargin * kAlphaMargin, 0.0);
}

Var loss_type(Tape& tape, ModelParams& params, const Modifier& u, UpdateType target) {
  return tape.softmax_cross_entropy(detail::type_logits(tape, params, u.tokens),
                                    static_cast<nnet::Index>(target));
}

Var loss_alpha(Tape& tape, ModelParams& params, const Modifier& u, double target) {
  const Var a = detail::alpha(tape, params, u.tokens);
  const double raw = tape.scalar_value(a) - target;
  // The wrap is a constant shift locally, so its derivative is 1.
  const Var d = tape.shift(a, -target + wrap_offset(raw));
  return tape.relu(tape.shift(tape.mul(d, d), -kAlphaMargin * kAlphaMargin));
}

Var loss_kappa(Tape& tape, ModelParams& params, const Modifier& u, int target) {
  return tape.bce_with_logits(detail::kappa_beta_logits(tape, params, u.tokens).first,
                              static_cast<double>(target));
}

AreaLossContext area_loss_context(const TrainingSample& sample, const AreaMap& map,
                                  const ModelParams& params) {
  if (sample.type != UpdateType::Precise || !sample.target || !sample.prior) {
    throw std::invalid_argument("area loss needs a precise sample with prior and target");
  }
  const Attention att = attention_weights(map, sample.modifier, params);
  const AreaWeights prior = gather_area_weights(*sample.prior, map);
  AreaLossContext ctx;
  ctx.coefficients.resize(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    ctx.coefficients[i] = att.weights[i] * prior.weights[i];
  }
  ctx.target = map.index_of(*sample.target);
  return ctx;
}

AreaLoss loss_area(Tape& tape, ModelParams& params, const Modifier& u,
                   const AreaLossContext& context, const AreaMap& map) {
  if (context.coefficients[context.target] <= 0.0) {
    return {tape.scalar(kAreaLossCap), true};
  }
  const Var a = detail::alpha(tape, params, u.tokens);
  const auto [zk, zb] = detail::kappa_beta_logits(tape, params, u.tokens);

  const double av = tape.scalar_value(a);
  const Point e{std::cos(av), std::sin(av)};
  // The minimizing boundary vertex is locally fixed; its projection's
  // derivative is that vertex's.
  Point lowest = map.normalized_boundary().front();
  for (const Point& v : map.normalized_boundary()) {
    if (dot(v, e) < dot(lowest, e)) lowest = v;
  }
  const auto n = static_cast<nnet::Index>(map.size());
  nnet::Matrix dx(n, 1), dy(n, 1), c(n, 1);
  for (nnet::Index i = 0; i < n; ++i) {
    const Point x = map.normalized_centroids()[static_cast<std::size_t>(i)];
    dx(i) = x.x - lowest.x;
    dy(i) = x.y - lowest.y;
    c(i) = context.coefficients[static_cast<std::size_t>(i)];
  }
  const Var proj = tape.add(tape.mul(tape.constant(dx), tape.cos(a)),
                            tape.mul(tape.constant(dy), tape.sin(a)));
  const Var log_base = tape.log(tape.shift(tape.sigmoid(proj), 1.0));
  const Var kappa = tape.sigmoid(zk);
  const Var powered = tape.exp(tape.mul(log_base, kappa));
  const Var offset = tape.mul(tape.exp(zb), kappa);
  const Var gamma = tape.shift(tape.add(powered, offset), -1.0 + params.hyper.gamma_floor);
  const Var w = tape.mul(gamma, tape.constant(c));
  const Var loss = tape.sub(tape.log(tape.sum(w)),
                            tape.log(tape.element(w, static_cast<nnet::Index>(context.target))));
  if (!(tape.scalar_value(loss) <= kAreaLossCap)) return {tape.scalar(kAreaLossCap), true};
  return {loss, false};
}

SampleLoss sample_loss(const TrainingSample& sample, const AreaMap& map,
                       ModelParams& params, const TrainConfig& config, bool backward,
                       const AreaLossContext* context) {
  Tape tape;
  SampleLoss out;
  std::vector<Var> terms;
  const Var lt = loss_type(tape, params, sample.modifier, sample.type);
  out.type = tape.scalar_value(lt);
  terms.push_back(tape.scale(lt, config.weight_type));

  const bool wants_alpha =
      sample.alpha && (sample.type == UpdateType::Directional ||
                       (sample.type == UpdateType::Precise && sample.kappa == 1));
  if (wants_alpha) {
    const Var la = loss_alpha(tape, params, sample.modifier, *sample.alpha);
    out.alpha = tape.scalar_value(la);
    terms.push_back(tape.scale(la, config.weight_alpha));
  }
  if (sample.type == UpdateType::Precise) {
    if (sample.kappa) {
      const Var lk = loss_kappa(tape, params, sample.modifier, *sample.kappa);
      out.kappa = tape.scalar_value(lk);
      terms.push_back(tape.scale(lk, config.weight_kappa));
    }
    if (config.area_loss && sample.target) {
      AreaLossContext local;
      if (!context) {
        local = area_loss_context(sample, map, params);
        context = &local;
      }
      const AreaLoss la = loss_area(tape, params, sample.modifier, *context, map);
      out.area = tape.scalar_value(la.value);
      out.area_clipped = la.clipped;
      terms.push_back(tape.scale(la.value, config.weight_area));
    }
  }
  Var total = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) total = tape.add(total, terms[i]);
  out.total = tape.scalar_value(total);
  if (backward) {
    if (!std::isfinite(out.total)) {
      throw NumericError("non-finite loss on sample " + std::to_string(sample.id));
    }
    tape.backward(total);
  }
  return out;
}

json EvalReport::to_json() const {
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  return json{{"samples", samples},
              {"type_accuracy", type_accuracy},
              {"precise_samples", precise_samples},
              {"area_accuracy", opt(area_accuracy)},
              {"direction_samples", direction_samples},
              {"direction_rate", opt(direction_rate)},
              {"kappa_samples", kappa_samples},
              {"kappa_accuracy", opt(kappa_accuracy)},
              {"mean_loss",
               {{"type", mean_loss.type},
                {"alpha", mean_loss.alpha},
                {"kappa", mean_loss.kappa},
                {"area", mean_loss.area},
                {"total", mean_loss.total}}}};
}

std::string EvalReport::table() const {
  std::ostringstream s;
  s << std::left << std::setw(26) << "metric" << std::setw(10) << "value" << "n\n";
  s << std::setw(26) << "type accuracy" << std::setw(10)
    << fmt_rate(std::optional<double>(type_accuracy)) << samples << "\n";
  s << std::setw(26) << "precise area top-1" << std::setw(10) << fmt_rate(area_accuracy)
    << precise_samples << "\n";
  s << std::setw(26) << "direction within pi/8" << std::setw(10) << fmt_rate(direction_rate)
    << direction_samples << "\n";
  s << std::setw(26) << "kappa accuracy" << std::setw(10) << fmt_rate(kappa_accuracy)
    << kappa_samples << "\n";
  s << std::setprecision(4) << std::fixed;
  s << "mean loss: type " << mean_loss.type << ", alpha " << mean_loss.alpha << ", kappa "
    << mean_loss.kappa << ", area " << mean_loss.area << ", total " << mean_loss.total << "\n";
  return s.str();
}

EvalReport evaluate(const ModelParams& params, std::span<const TrainingSample> samples,
                    const AreaMap& map, const TrainConfig& config) {
  EvalReport r;
  r.samples = samples.size();
  std::size_t type_hits = 0, area_hits = 0, dir_hits = 0, kappa_hits = 0;
  ModelParams& scratch = const_cast<ModelParams&>(params);  // forward only, no backward
  for (const TrainingSample& s : samples) {
    if (classify_modifier(s.modifier, params) == s.type) ++type_hits;
    const bool has_alpha =
        s.alpha && (s.type == UpdateType::Directional ||
                    (s.type == UpdateType::Precise && s.kappa == 1));
    if (has_alpha) {
      ++r.direction_samples;
      if (std::abs(wrap_angle(predict_direction(s.modifier, params) - *s.alpha)) <=
          kAlphaMargin) {
        ++dir_hits;
      }
    }
    if (s.type == UpdateType::Precise) {
      if (s.kappa) {
        ++r.kappa_samples;
        const int predicted = predict_kappa_beta(s.modifier, params).kappa > 0.5 ? 1 : 0;
        if (predicted == *s.kappa) ++kappa_hits;
      }
      if (s.target && s.prior) {
        ++r.precise_samples;
        try {
          const PreciseResult pr = precise_update(s.modifier, *s.prior, map, params);
          if (rank_areas(pr.posterior, map).front().id == *s.target) ++area_hits;
        } catch (const DegenerateUpdate&) {
        }
      }
    }
    const SampleLoss l = sample_loss(s, map, scratch, config, false);
    r.mean_loss.type += l.type;
    r.mean_loss.alpha += l.alpha;
    r.mean_loss.kappa += l.kappa;
    r.mean_loss.area += l.area;
    r.mean_loss.total += l.total;
  }
  if (r.samples > 0) {
    const double n = static_cast<double>(r.samples);
    r.type_accuracy = static_cast<double>(type_hits) / n;
    r.mean_loss.type /= n;
    r.mean_loss.alpha /= n;
    r.mean_loss.kappa /= n;
    r.mean_loss.area /= n;
    r.mean_loss.total /= n;
  }
  if (r.precise_samples > 0) {
    r.area_accuracy = static_cast<double>(area_hits) / static_cast<double>(r.precise_samples);
  }
  if (r.direction_samples > 0) {
    r.direction_rate = static_cast<double>(dir_hits) / static_cast<double>(r.direction_samples);
  }
  if (r.kappa_samples > 0) {
    r.kappa_accuracy = static_cast<double>(kappa_hits) / static_cast<double>(r.kappa_samples);
  }
  return r;
}

Split split_dataset(std::size_t n, double holdout, std::uint64_t seed) {
  if (!(holdout > 0.0 && holdout < 1.0)) throw std::invalid_argument("holdout must lie in (0, 1)");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto held = static_cast<std::size_t>(std::llround(static_cast<double>(n) * holdout));
  Split s;
  s.train.assign(idx.begin(), idx.end() - static_cast<std::ptrdiff_t>(held));
  s.holdout.assign(idx.end() - static_cast<std::ptrdiff_t>(held), idx.end());
  std::sort(s.holdout.begin(), s.holdout.end());
  return s;
}

TrainResult train(const Dataset& dataset, const AreaMap& map, ModelParams init,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  if (dataset.samples.empty()) throw std::invalid_argument("training dataset is empty");
  if (config.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  TrainResult result{std::move(init), {}, {}, split_dataset(dataset.samples.size(),
                                                             config.holdout, config.seed)};
  ModelParams& params = result.params;
  params.config_fingerprint = [&] {
    std::ostringstream fp;
    fp << std::hex << std::hash<std::string>{}(config.to_json().dump());
    return fp.str();
  }();

  // Attention and prior weights do not depend on trainable parameters.
  std::map<std::size_t, AreaLossContext> contexts;
  for (const std::size_t i : result.split.train) {
    const TrainingSample& s = dataset.samples[i];
    if (s.type == UpdateType::Precise && s.target && s.prior && config.area_loss) {
      contexts.emplace(i, area_loss_context(s, map, params));
    }
  }

  nnet::AdamState adam(params.parameters(), nnet::AdamConfig{config.learning_rate});
  std::mt19937_64 rng(config.seed + 1);
  std::vector<std::size_t> order = result.split.train;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (const std::size_t i : order) {
      const auto it = contexts.find(i);
      const SampleLoss l = sample_loss(dataset.samples[i], map, params, config, true,
                                       it == contexts.end() ? nullptr : &it->second);
      try {
        adam.step();
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (sample " +
                           std::to_string(dataset.samples[i].id) + ")");
      }
      total += l.total;
    }
    EpochStats stats{epoch, total / static_cast<double>(order.size())};
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }

  std::vector<TrainingSample> held;
  held.reserve(result.split.holdout.size());
  for (const std::size_t i : result.split.holdout) held.push_back(dataset.samples[i]);
  result.holdout = evaluate(params, held, map, config);
  return result;
}

double CompositeBucket::top1_rate() const {
  return queries ? static_cast<double>(top1) / static_cast<double>(queries) : 0.0;
}
double CompositeBucket::top5_rate() const {
  return queries ? static_cast<double>(top5) / static_cast<double>(queries) : 0.0;
}

const CompositeBucket* CompositeReport::bucket(int steps) const {
  for (const auto& b : buckets) {
    if (b.steps == steps) return &b;
  }
  return nullptr;
}

json CompositeReport::to_json() const {
  auto row = [](const CompositeBucket& b) {
    return json{{"steps", b.steps},       {"queries", b.queries},
                {"top1", b.top1_rate()},  {"top5", b.top5_rate()},
                {"errors", b.errors}};
  };
  json arr = json::array();
  for (const auto& b : buckets) arr.push_back(row(b));
  return json{{"buckets", arr}, {"any", row(any)}};
}

std::string CompositeReport::table() const {
  std::ostringstream s;
  s << std::left << std::setw(8) << "steps" << std::setw(10) << "queries" << std::setw(10)
    << "top1" << std::setw(10) << "top5" << "errors\n";
  s << std::fixed << std::setprecision(2);
  auto line = [&](const std::string& label, const CompositeBucket& b) {
    s << std::setw(8) << label << std::setw(10) << b.queries << std::setw(10)
      << 100.0 * b.top1_rate() << std::setw(10) << 100.0 * b.top5_rate() << b.errors << "\n";
  };
  for (const auto& b : buckets) line(std::to_string(b.steps), b);
  line("any", any);
  return s.str();
}

CompositeReport benchmark_composite(const std::vector<CompositeQuery>& queries,
                                    const AreaMap& map, const ModelParams& params) {
  std::map<int, CompositeBucket> by_steps;
  CompositeReport report;
  for (const CompositeQuery& q : queries) {
    int steps = q.steps;
    bool hit1 = false, hit5 = false, failed = false;
    try {
      const std::string np = extract_destination(q.instruction, params.lexicon.config());
      steps = static_cast<int>(parse_modifier_chain(np, params.lexicon, map.token_cap()).size());
      const BeliefTrace trace = ground(q.instruction, map, params);
      const auto top = top_k_areas(trace, 5);
      hit1 = !top.empty() && top.front() == q.goal;
      hit5 = std::find(top.begin(), top.end(), q.goal) != top.end();
    } catch (const Error&) {
      failed = true;
    }
    for (CompositeBucket* b : {&by_steps[steps], &report.any}) {
      ++b->queries;
      b->top1 += hit1;
      b->top5 += hit5;
      b->errors += failed;
    }
    by_steps[steps].steps = steps;
  }
  for (auto& [steps, b] : by_steps) report.buckets.push_back(b);
  return report;
}

}  // namespace groundnav
