#include "locaudit/support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "locaudit/errors.hpp"
#include "locaudit/rng.hpp"

namespace locaudit {

namespace {

const char* kAlphaLabels[] = {"D1", "D2"};
const char* kBetaLabels[] = {"B1", "B2"};

double zeroed(double p) { return p < kZeroWeight ? 0.0 : p; }

/// Cumulative draw over nonnegative weights; u in [0,1). Rounding tails fall
/// into the last positive category, so zero-weight events stay impossible.
int pick_category(double u, const double* weights, int count) {
  double cum = 0.0;
  int last_positive = -1;
  for (int i = 0; i < count; ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cum += weights[i];
    if (u < cum) return i;
  }
  if (last_positive < 0) throw Error("categorical draw over all-zero weights");
  return last_positive;
}

/// Outcome distributions for one context, precomputed from the kernel.
struct ContextDistribution {
  // Both measured: probabilities of (+,+), (+,-), (-,+), (-,-).
  std::array<double, 4> joint{};
  // Single measured: probability of +1.
  double p_plus = 0.0;
};

ContextDistribution distribution_for(const HardyConfiguration& config, const Context& context) {
  ContextDistribution dist;
  const auto a = alpha_label(context), b = beta_label(context);
  if (a && b) {
    const TwoValueObservable& oa = config.by_label(*a);
    const TwoValueObservable& ob = config.by_label(*b);
    dist.joint = {zeroed(joint_probability(config.psi, oa, Sign::Plus, ob, Sign::Plus)),
                  zeroed(joint_probability(config.psi, oa, Sign::Plus, ob, Sign::Minus)),
                  zeroed(joint_probability(config.psi, oa, Sign::Minus, ob, Sign::Plus)),
                  zeroed(joint_probability(config.psi, oa, Sign::Minus, ob, Sign::Minus))};
  } else if (a || b) {
    const TwoValueObservable& obs = config.by_label(a ? *a : *b);
    const double p = (1.0 + expectation(config.psi, obs)) / 2.0;
    dist.p_plus = p < kZeroWeight ? 0.0 : (p > 1.0 - kZeroWeight ? 1.0 : p);
  }
  return dist;
}

}  // namespace

int context_index(const Context& context) {
  return 3 * static_cast<int>(context.alpha) + static_cast<int>(context.beta);
}

Context context_from_index(int index) {
  if (index < 0 || index >= 9) throw Error("context index out of range");
  return {static_cast<AlphaChoice>(index / 3), static_cast<BetaChoice>(index % 3)};
}

std::string to_string(const Context& context) {
  const auto a = alpha_label(context), b = beta_label(context);
  return "(" + (a ? *a : std::string("none")) + "," + (b ? *b : std::string("none")) + ")";
}

std::optional<std::string> alpha_label(const Context& context) {
  if (context.alpha == AlphaChoice::NoneAlpha) return std::nullopt;
  return std::string(kAlphaLabels[static_cast<int>(context.alpha)]);
}

std::optional<std::string> beta_label(const Context& context) {
  if (context.beta == BetaChoice::NoneBeta) return std::nullopt;
  return std::string(kBetaLabels[static_cast<int>(context.beta)]);
}

void ContextPolicy::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidPolicy("context weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "context weights must sum to 1 (got " << sum << ")";
    throw InvalidPolicy(msg.str());
  }
}

ContextPolicy uniform_policy() {
  ContextPolicy policy;
  policy.weights.fill(1.0 / 9.0);
  return policy;
}

ContextPolicy single_context_policy(const Context& context) {
  ContextPolicy policy;
  policy.weights[context_index(context)] = 1.0;
  return policy;
}

Support sample_support(const HardyConfiguration& config, const ContextPolicy& policy, int n,
                       std::uint64_t seed) {
  if (n < 1) throw Error("sample_support requires n >= 1");
  policy.validate();

  std::array<ContextDistribution, 9> dists;
  for (int k = 0; k < 9; ++k)
    if (policy.weights[k] > 0.0) dists[k] = distribution_for(config, context_from_index(k));

  Support support{config, {}, seed};
  support.specimens.reserve(n);
  for (int id = 0; id < n; ++id) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(id));
    const int k = pick_category(rng.next_double(), policy.weights.data(), 9);
    const Context context = context_from_index(k);
    Specimen specimen{id, context, {}, {}};

    const auto a = alpha_label(context), b = beta_label(context);
    const ContextDistribution& dist = dists[k];
    if (a && b) {
      const int pair = pick_category(rng.next_double(), dist.joint.data(), 4);
      specimen.outcomes[*a] = pair < 2 ? +1 : -1;
      specimen.outcomes[*b] = pair % 2 == 0 ? +1 : -1;
    } else if (a || b) {
      specimen.outcomes[a ? *a : *b] = rng.next_double() < dist.p_plus ? +1 : -1;
    }
    support.specimens.push_back(std::move(specimen));
  }
  return support;
}

std::vector<int> extension(const Support& support, const std::string& label,
                           ExtensionFilter filter) {
  support.config.by_label(label);  // UnknownLabel on bad names
  std::vector<int> ids;
  for (const Specimen& s : support.specimens) {
    const auto it = s.outcomes.find(label);
    if (it == s.outcomes.end()) continue;
    if (filter == ExtensionFilter::Plus && it->second != +1) continue;
    if (filter == ExtensionFilter::Minus && it->second != -1) continue;
    ids.push_back(s.id);
  }
  return ids;
}

bool AxiomReport::all_hold() const {
  return std::none_of(entries.begin(), entries.end(),
                      [](const AxiomEntry& e) { return e.status == AxiomStatus::Fail; });
}

const AxiomEntry& AxiomReport::by_id(const std::string& id) const {
  for (const AxiomEntry& e : entries)
    if (e.id == id) return e;
  throw UnknownLabel("unknown axiom id: " + id);
}

AxiomReport check_kinematic_axioms(const Support& support) {
  AxiomReport report;
  const std::array<std::string, 4> labels = {"D1", "D2", "B1", "B2"};

  // 2.ii: outcomes are signs, so D+ and D- partition D. Checkable exactly.
  AxiomEntry partition{"2.ii", AxiomStatus::Pass, "every outcome is -1 or +1", std::nullopt};
  for (const Specimen& s : support.specimens)
    for (const auto& [label, outcome] : s.outcomes)
      if (outcome != -1 && outcome != +1) {
        partition.status = AxiomStatus::Fail;
        partition.detail = "outcome for " + label + " is neither -1 nor +1";
        partition.specimen = s.id;
      }
  report.entries.push_back(std::move(partition));

  // 2.iv: non-commuting same-side pairs are never measured together.
  for (const auto& [x, y] : {std::pair{std::string("D1"), std::string("D2")},
                             std::pair{std::string("B1"), std::string("B2")}}) {
    AxiomEntry entry{"2.iv(" + x + "," + y + ")", AxiomStatus::Pass,
                     "extensions of the non-commuting pair are disjoint", std::nullopt};
    for (const Specimen& s : support.specimens)
      if (s.outcomes.count(x) && s.outcomes.count(y)) {
        entry.status = AxiomStatus::Fail;
        entry.detail = "specimen measures both " + x + " and " + y;
        entry.specimen = s.id;
        break;
      }
    report.entries.push_back(std::move(entry));
  }

  // 2.i: existential per observable -- witnessed when the extension is
  // nonempty in this support.
  for (const std::string& label : labels) {
    const std::vector<int> all = extension(support, label, ExtensionFilter::All);
    report.entries.push_back({"2.i(" + label + ")",
                              all.empty() ? AxiomStatus::NotWitnessed : AxiomStatus::Witnessed,
                              all.empty() ? "no specimen measures " + label
                                          : std::to_string(all.size()) + " specimens measure " + label,
                              all.empty() ? std::nullopt : std::optional<int>(all.front())});
  }

  // 2.iii: when the expectation keeps an outcome sign possible, some support
  // realizes it; witnessed when this support realizes every possible sign.
  for (const std::string& label : labels) {
    const double e = expectation(support.config.psi, support.config.by_label(label));
    const bool plus_possible = e > -1.0 + 1e-12, minus_possible = e < 1.0 - 1e-12;
    const std::vector<int> plus = extension(support, label, ExtensionFilter::Plus);
    const std::vector<int> minus = extension(support, label, ExtensionFilter::Minus);
    const bool witnessed =
        (!plus_possible || !plus.empty()) && (!minus_possible || !minus.empty());
    report.entries.push_back({"2.iii(" + label + ")",
                              witnessed ? AxiomStatus::Witnessed : AxiomStatus::NotWitnessed,
                              witnessed ? "every possible outcome sign of " + label + " realized"
                                        : "some possible outcome sign of " + label + " unrealized",
                              witnessed && !plus.empty() ? std::optional<int>(plus.front())
                                                         : std::nullopt});
  }

  // 2.v: commuting cross pairs can be measured together; witnessed when some
  // specimen does.
  for (const std::string& d : {std::string("D1"), std::string("D2")})
    for (const std::string& b : {std::string("B1"), std::string("B2")}) {
      std::optional<int> witness;
      for (const Specimen& s : support.specimens)
        if (s.outcomes.count(d) && s.outcomes.count(b)) {
          witness = s.id;
          break;
        }
      report.entries.push_back({"2.v(" + d + "," + b + ")",
                                witness ? AxiomStatus::Witnessed : AxiomStatus::NotWitnessed,
                                witness ? "specimen measures " + d + " and " + b + " together"
                                        : "no specimen measures " + d + " and " + b + " together",
                                witness});
    }
  return report;
}

namespace {

/// One link of the correlation chain (q.iii), with the rule faces that may
/// traverse it during closure.
struct ChainLink {
  const char* from;
  const char* to;
  const char* condition;  // q.iii.a / q.iii.b / q.iii.c
  bool from_alpha;        // antecedent confined in the earlier region
};

constexpr ChainLink kChain[] = {{"D1", "B1", "q.iii.a", true},
                                {"B1", "D2", "q.iii.b", false},
                                {"D2", "B2", "q.iii.c", true}};

bool has_plus_mark(const Specimen& s, const std::string& label) {
  const auto it = s.predictions.find(label);
  return it != s.predictions.end() && it->second.plus;
}

void add_plus_mark(Specimen& s, const std::string& label, const std::string& rule,
                   std::vector<std::string>& chain) {
  chain.push_back(rule);
  const auto out = s.outcomes.find(label);
  if (out != s.outcomes.end() && out->second == -1)
    throw ConsistencyViolation("closure would predict +1 for " + label +
                                   " on a specimen with actual outcome -1 (5.ii)",
                               s.id, chain);
  PredMarks& marks = s.predictions[label];
  if (marks.minus)
    throw ConsistencyViolation(
        "closure would predict +1 for " + label + " against an existing -1 mark (5.i)", s.id,
        chain);
  marks.plus = true;
}

}  // namespace

Support apply_prediction_closure(const Support& support, bool strengthened) {
  const ConditionReport conditions = verify_config(support.config, support.config.tol);
  if (!conditions.by_id("q.i").pass || !conditions.by_id("q.ii").pass)
    throw ConfigRejected("closure requires a structurally valid configuration (q.i, q.ii)");

  Support closed = support;
  for (Specimen& s : closed.specimens) {
    std::vector<std::string> applied;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const ChainLink& link : kChain) {
        // 5.iii: actual outcome +1 in the earlier region, correlation
        // link.from -> link.to.
        const auto out = s.outcomes.find(link.from);
        if (link.from_alpha && out != s.outcomes.end() && out->second == +1 &&
            !has_plus_mark(s, link.to)) {
          add_plus_mark(s, link.to,
                        std::string("5.iii via ") + link.condition + ": " + link.from +
                            " measured +1 -> PredPlus(" + link.to + ")",
                        applied);
          changed = true;
        }
        // 5.iv (only when strengthened): a mark alone propagates.
        if (strengthened && has_plus_mark(s, link.from) && !has_plus_mark(s, link.to)) {
          add_plus_mark(s, link.to,
                        std::string("5.iv via ") + link.condition + ": PredPlus(" + link.from +
                            ") -> PredPlus(" + link.to + ")",
                        applied);
          changed = true;
        }
      }
    }
  }
  return closed;
}

AxiomReport check_prediction_consistency(const Support& support) {
  AxiomReport report;
  AxiomEntry both{"5.i", AxiomStatus::Pass, "no label carries both prediction marks", std::nullopt};
  AxiomEntry contra{"5.ii", AxiomStatus::Pass, "no prediction mark contradicts an actual outcome",
                    std::nullopt};
  for (const Specimen& s : support.specimens) {
    for (const auto& [label, marks] : s.predictions) {
      if (marks.plus && marks.minus && both.status == AxiomStatus::Pass) {
        both.status = AxiomStatus::Fail;
        both.detail = "both PredPlus and PredMinus on " + label;
        both.specimen = s.id;
      }
      const auto out = s.outcomes.find(label);
      if (out != s.outcomes.end() && contra.status == AxiomStatus::Pass) {
        if ((marks.plus && out->second == -1) || (marks.minus && out->second == +1)) {
          contra.status = AxiomStatus::Fail;
          contra.detail = "prediction mark on " + label + " contradicts actual outcome " +
                          std::to_string(out->second);
          contra.specimen = s.id;
        }
      }
    }
  }
  report.entries.push_back(std::move(both));
  report.entries.push_back(std::move(contra));
  return report;
}

}  // namespace locaudit
