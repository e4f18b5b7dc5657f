#include "locaudit/serialize.hpp"

#include <fstream>
#include <sstream>

#include "locaudit/errors.hpp"

namespace locaudit {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw Error(std::string("missing field \"") + name + "\"");
  return *it;
}

void check_schema_version(const json& j) {
  if (field(j, "schema_version").get<int>() != kSchemaVersion)
    throw Error("unsupported schema_version (expected 1)");
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("a complex number must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string region_to_string(Region region) { return region == Region::Alpha ? "Alpha" : "Beta"; }

Region region_from_string(const std::string& s) {
  if (s == "Alpha") return Region::Alpha;
  if (s == "Beta") return Region::Beta;
  throw Error("unknown region \"" + s + "\" (expected Alpha or Beta)");
}

std::string axiom_status_to_string(AxiomStatus status) {
  switch (status) {
    case AxiomStatus::Pass: return "Pass";
    case AxiomStatus::Fail: return "Fail";
    case AxiomStatus::Witnessed: return "Witnessed";
    case AxiomStatus::NotWitnessed: return "NotWitnessed";
  }
  return "?";
}

AxiomStatus axiom_status_from_string(const std::string& s) {
  if (s == "Pass") return AxiomStatus::Pass;
  if (s == "Fail") return AxiomStatus::Fail;
  if (s == "Witnessed") return AxiomStatus::Witnessed;
  if (s == "NotWitnessed") return AxiomStatus::NotWitnessed;
  throw Error("unknown axiom status \"" + s + "\"");
}

const std::array<std::pair<AtomKind, const char*>, 10> kAtomKindNames = {{
    {AtomKind::MeasuredIn, "MeasuredIn"},
    {AtomKind::NotMeasuredIn, "NotMeasuredIn"},
    {AtomKind::OutcomePlus, "OutcomePlus"},
    {AtomKind::NotOutcomePlus, "NotOutcomePlus"},
    {AtomKind::OutcomeMinus, "OutcomeMinus"},
    {AtomKind::NotOutcomeMinus, "NotOutcomeMinus"},
    {AtomKind::PredPlus, "PredPlus"},
    {AtomKind::NotPredPlus, "NotPredPlus"},
    {AtomKind::PredMinus, "PredMinus"},
    {AtomKind::NotPredMinus, "NotPredMinus"},
}};

std::string atom_kind_to_string(AtomKind kind) {
  for (const auto& [k, name] : kAtomKindNames)
    if (k == kind) return name;
  return "?";
}

AtomKind atom_kind_from_string(const std::string& s) {
  for (const auto& [k, name] : kAtomKindNames)
    if (s == name) return k;
  throw Error("unknown atom kind \"" + s + "\"");
}

const std::array<RuleId, 16> kAllRuleIds = {
    RuleId::A2i,   RuleId::A2ii, RuleId::A2iii, RuleId::A2iv,  RuleId::A2v,   RuleId::A3i,
    RuleId::A5i,   RuleId::A5ii, RuleId::A5iii, RuleId::A5iv,  RuleId::Qi,    RuleId::Qii,
    RuleId::QiiiA, RuleId::QiiiB, RuleId::QiiiC, RuleId::Qiv};

RuleId rule_id_from_string(const std::string& s) {
  for (RuleId id : kAllRuleIds)
    if (to_string(id) == s) return id;
  throw Error("unknown rule id \"" + s + "\"");
}

std::string step_status_from_json_check(const std::string& s) {
  if (s != "Valid" && s != "Invalid" && s != "Existential")
    throw Error("unknown step status \"" + s + "\"");
  return s;
}

json atom_to_json(const Atom& atom) {
  return {{"specimen", atom.specimen}, {"label", atom.label}, {"kind", atom_kind_to_string(atom.kind)}};
}

Atom atom_from_json(const json& j) {
  return {field(j, "specimen").get<std::string>(), field(j, "label").get<std::string>(),
          atom_kind_from_string(field(j, "kind").get<std::string>())};
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(complex_to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error("a matrix must be a nonempty array of rows");
  const int dim = static_cast<int>(j.size());
  ComplexMatrix m(dim);
  for (int r = 0; r < dim; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
      throw Error("matrix row " + std::to_string(r) + " does not have " + std::to_string(dim) +
                  " entries");
    for (int c = 0; c < dim; ++c) m.at(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

json to_json(const StateVector& psi) {
  json amps = json::array();
  for (const Complex& a : psi.amplitudes()) amps.push_back(complex_to_json(a));
  return amps;
}

StateVector state_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error("a state must be a nonempty array of [re, im] pairs");
  std::vector<Complex> amps;
  amps.reserve(j.size());
  for (const json& a : j) amps.push_back(complex_from_json(a));
  return StateVector(std::move(amps));
}

json config_to_json(const HardyConfiguration& config, const std::string& provenance) {
  json observables = json::array();
  for (const TwoValueObservable* obs : config.observables())
    observables.push_back({{"label", obs->label()},
                           {"region", region_to_string(obs->region())},
                           {"matrix", to_json(obs->matrix())}});
  return {{"schema_version", kSchemaVersion},
          {"state", to_json(config.psi)},
          {"observables", std::move(observables)},
          {"provenance", provenance}};
}

HardyConfiguration config_from_json(const json& j, double tol) {
  check_schema_version(j);
  StateVector psi = state_from_json(field(j, "state"));

  const json& observables = field(j, "observables");
  if (!observables.is_array() || observables.size() != 4)
    throw Error("\"observables\" must list exactly the four observables");
  std::map<std::string, TwoValueObservable> by_label;
  for (const json& entry : observables) {
    std::string label = field(entry, "label").get<std::string>();
    TwoValueObservable obs =
        validate_observable(matrix_from_json(field(entry, "matrix")),
                            region_from_string(field(entry, "region").get<std::string>()), label);
    if (!by_label.emplace(std::move(label), std::move(obs)).second)
      throw Error("duplicate observable label in \"observables\"");
  }
  for (const char* label : {"D1", "D2", "B1", "B2"})
    if (!by_label.count(label)) throw Error(std::string("missing observable \"") + label + "\"");

  return HardyConfiguration{std::move(psi),
                            std::move(by_label.at("D1")),
                            std::move(by_label.at("D2")),
                            std::move(by_label.at("B1")),
                            std::move(by_label.at("B2")),
                            tol};
}

json to_json(const ConditionReport& report) {
  json entries = json::array();
  for (const ConditionEntry& e : report.entries)
    entries.push_back({{"id", e.id},
                       {"pass", e.pass},
                       {"measured", e.measured},
                       {"threshold", e.threshold},
                       {"detail", e.detail}});
  return {{"entries", std::move(entries)}};
}

ConditionReport condition_report_from_json(const json& j) {
  const json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != 6)
    throw Error("a condition report has exactly six entries");
  ConditionReport report;
  for (std::size_t i = 0; i < 6; ++i) {
    const json& e = entries[i];
    report.entries[i] = {field(e, "id").get<std::string>(), field(e, "pass").get<bool>(),
                         field(e, "measured").get<double>(), field(e, "threshold").get<double>(),
                         field(e, "detail").get<std::string>()};
  }
  return report;
}

json to_json(const AxiomReport& report) {
  json entries = json::array();
  for (const AxiomEntry& e : report.entries) {
    json entry = {{"id", e.id},
                  {"status", axiom_status_to_string(e.status)},
                  {"detail", e.detail},
                  {"specimen", nullptr}};
    if (e.specimen) entry["specimen"] = *e.specimen;
    entries.push_back(std::move(entry));
  }
  return {{"entries", std::move(entries)}};
}

AxiomReport axiom_report_from_json(const json& j) {
  AxiomReport report;
  for (const json& e : field(j, "entries")) {
    AxiomEntry entry{field(e, "id").get<std::string>(),
                     axiom_status_from_string(field(e, "status").get<std::string>()),
                     field(e, "detail").get<std::string>(), std::nullopt};
    if (!field(e, "specimen").is_null()) entry.specimen = field(e, "specimen").get<int>();
    report.entries.push_back(std::move(entry));
  }
  return report;
}

json to_json(const AuditReport& report) {
  json steps = json::array();
  for (const DerivationStep& step : report.steps) {
    json claimed = json::array(), missing = json::array();
    for (const Atom& a : step.claimed_atoms) claimed.push_back(atom_to_json(a));
    for (const Atom& a : step.missing_premises) missing.push_back(atom_to_json(a));
    steps.push_back({{"step_id", step.step_id},
                     {"claimed_atoms", std::move(claimed)},
                     {"cited_rule", step.cited_rule ? json(to_string(*step.cited_rule)) : json()},
                     {"status", to_string(step.status)},
                     {"missing_premises", std::move(missing)},
                     {"missing_facts", step.missing_facts},
                     {"note", step.note}});
  }
  json witness;
  if (report.witness)
    witness = {{"specimen", report.witness->first}, {"probability", report.witness->second}};
  return {{"proposition", to_string(report.proposition)},
          {"steps", std::move(steps)},
          {"verdict", to_string(report.verdict)},
          {"witness", std::move(witness)}};
}

AuditReport audit_report_from_json(const json& j) {
  AuditReport report;
  const std::string prop = field(j, "proposition").get<std::string>();
  if (prop == "Prop1") report.proposition = WhichProof::Prop1;
  else if (prop == "Prop2") report.proposition = WhichProof::Prop2;
  else if (prop == "Remark32") report.proposition = WhichProof::Remark32;
  else throw Error("unknown proposition \"" + prop + "\"");

  for (const json& s : field(j, "steps")) {
    DerivationStep step;
    step.step_id = field(s, "step_id").get<std::string>();
    for (const json& a : field(s, "claimed_atoms")) step.claimed_atoms.push_back(atom_from_json(a));
    if (!field(s, "cited_rule").is_null())
      step.cited_rule = rule_id_from_string(field(s, "cited_rule").get<std::string>());
    const std::string status = step_status_from_json_check(field(s, "status").get<std::string>());
    step.status = status == "Valid" ? StepStatus::Valid
                  : status == "Invalid" ? StepStatus::Invalid
                                        : StepStatus::Existential;
    for (const json& a : field(s, "missing_premises"))
      step.missing_premises.push_back(atom_from_json(a));
    step.missing_facts = field(s, "missing_facts").get<std::vector<std::string>>();
    step.note = field(s, "note").get<std::string>();
    report.steps.push_back(std::move(step));
  }

  const std::string verdict = field(j, "verdict").get<std::string>();
  if (verdict == "ProofValid") report.verdict = Verdict::ProofValid;
  else if (verdict == "ProofInvalid") report.verdict = Verdict::ProofInvalid;
  else if (verdict == "ContradictionDerived") report.verdict = Verdict::ContradictionDerived;
  else throw Error("unknown verdict \"" + verdict + "\"");

  if (!field(j, "witness").is_null())
    report.witness = {{field(field(j, "witness"), "specimen").get<std::string>(),
                       field(field(j, "witness"), "probability").get<double>()}};
  return report;
}

json to_json(const Specimen& specimen) {
  const auto a = alpha_label(specimen.context), b = beta_label(specimen.context);
  json outcomes = json::object(), predictions = json::object();
  for (const auto& [label, outcome] : specimen.outcomes) outcomes[label] = outcome;
  for (const auto& [label, marks] : specimen.predictions)
    predictions[label] = {{"plus", marks.plus}, {"minus", marks.minus}};
  return {{"id", specimen.id},
          {"context", {{"alpha", a ? json(*a) : json()}, {"beta", b ? json(*b) : json()}}},
          {"outcomes", std::move(outcomes)},
          {"predictions", std::move(predictions)}};
}

Specimen specimen_from_json(const json& j) {
  Specimen specimen;
  specimen.id = field(j, "id").get<int>();
  const json& context = field(j, "context");
  const json& a = field(context, "alpha");
  const json& b = field(context, "beta");
  if (a.is_null()) specimen.context.alpha = AlphaChoice::NoneAlpha;
  else if (a.get<std::string>() == "D1") specimen.context.alpha = AlphaChoice::D1;
  else if (a.get<std::string>() == "D2") specimen.context.alpha = AlphaChoice::D2;
  else throw Error("unknown alpha choice \"" + a.get<std::string>() + "\"");
  if (b.is_null()) specimen.context.beta = BetaChoice::NoneBeta;
  else if (b.get<std::string>() == "B1") specimen.context.beta = BetaChoice::B1;
  else if (b.get<std::string>() == "B2") specimen.context.beta = BetaChoice::B2;
  else throw Error("unknown beta choice \"" + b.get<std::string>() + "\"");

  for (const auto& [label, outcome] : field(j, "outcomes").items()) {
    const int value = outcome.get<int>();
    if (value != -1 && value != +1) throw Error("outcomes must be -1 or +1");
    specimen.outcomes[label] = value;
  }
  for (const auto& [label, marks] : field(j, "predictions").items())
    specimen.predictions[label] = {field(marks, "plus").get<bool>(),
                                   field(marks, "minus").get<bool>()};
  return specimen;
}

json support_to_json(const Support& support) {
  json specimens = json::array();
  for (const Specimen& s : support.specimens) specimens.push_back(to_json(s));
  return {{"schema_version", kSchemaVersion},
          {"seed", support.seed},
          {"specimens", std::move(specimens)}};
}

Support support_from_json(const json& j, const HardyConfiguration& config) {
  check_schema_version(j);
  Support support{config, {}, field(j, "seed").get<std::uint64_t>()};
  for (const json& s : field(j, "specimens")) support.specimens.push_back(specimen_from_json(s));
  return support;
}

SampleStats compute_sample_stats(const Support& support) {
  SampleStats stats;
  stats.n = static_cast<long long>(support.specimens.size());

  std::map<std::string, long long> outcome_counts;
  for (const Specimen& s : support.specimens) {
    const std::string context = to_string(s.context);
    ++stats.context_counts[context];
    if (s.outcomes.empty()) continue;
    std::string key = context;
    const auto a = alpha_label(s.context), b = beta_label(s.context);
    if (a) key += " " + *a + "=" + (s.outcomes.at(*a) > 0 ? "+1" : "-1");
    if (b) key += " " + *b + "=" + (s.outcomes.at(*b) > 0 ? "+1" : "-1");
    ++outcome_counts[key];
  }

  // One row per possible outcome combination of every realized context,
  // including combinations that never occurred (their exact probability is
  // shown next to the zero count).
  const HardyConfiguration& config = support.config;
  for (const auto& [context_name, total] : stats.context_counts) {
    Context context{};
    for (int k = 0; k < 9; ++k)
      if (to_string(context_from_index(k)) == context_name) context = context_from_index(k);
    const auto a = alpha_label(context), b = beta_label(context);
    if (!a && !b) continue;

    const auto row = [&](const std::string& key, double probability) {
      const auto it = outcome_counts.find(key);
      const long long count = it == outcome_counts.end() ? 0 : it->second;
      stats.outcomes[key] = {count, total > 0 ? static_cast<double>(count) / total : 0.0,
                             probability};
    };
    if (a && b) {
      const TwoValueObservable& oa = config.by_label(*a);
      const TwoValueObservable& ob = config.by_label(*b);
      for (const Sign sa : {Sign::Plus, Sign::Minus})
        for (const Sign sb : {Sign::Plus, Sign::Minus})
          row(context_name + " " + *a + "=" + (sa == Sign::Plus ? "+1" : "-1") + " " + *b + "=" +
                  (sb == Sign::Plus ? "+1" : "-1"),
              joint_probability(config.psi, oa, sa, ob, sb));
    } else {
      const std::string label = a ? *a : *b;
      const double p_plus = (1.0 + expectation(config.psi, config.by_label(label))) / 2.0;
      row(context_name + " " + label + "=+1", p_plus);
      row(context_name + " " + label + "=-1", 1.0 - p_plus);
    }
  }
  return stats;
}

json to_json(const SampleStats& stats) {
  json contexts = json::object(), outcomes = json::object();
  for (const auto& [name, count] : stats.context_counts) contexts[name] = count;
  for (const auto& [key, row] : stats.outcomes)
    outcomes[key] = {{"count", row.count},
                     {"frequency", row.frequency},
                     {"probability", row.probability}};
  return {{"n", stats.n},
          {"context_counts", std::move(contexts)},
          {"outcomes", std::move(outcomes)}};
}

SampleStats sample_stats_from_json(const json& j) {
  SampleStats stats;
  stats.n = field(j, "n").get<long long>();
  for (const auto& [name, count] : field(j, "context_counts").items())
    stats.context_counts[name] = count.get<long long>();
  for (const auto& [key, row] : field(j, "outcomes").items())
    stats.outcomes[key] = {field(row, "count").get<long long>(),
                           field(row, "frequency").get<double>(),
                           field(row, "probability").get<double>()};
  return stats;
}

std::string serialize_report(const ReportFile& report) {
  const json j = {{"schema_version", report.schema_version},
                  {"kind", report.kind},
                  {"settings", report.settings},
                  {"payload", report.payload}};
  return j.dump(2) + "\n";
}

ReportFile parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    check_schema_version(j);
    ReportFile report{field(j, "schema_version").get<int>(), field(j, "kind").get<std::string>(),
                      field(j, "settings"), field(j, "payload")};
    if (report.kind != "condition" && report.kind != "axiom" && report.kind != "audit" &&
        report.kind != "sample-stats")
      throw Error("unknown report kind \"" + report.kind + "\"");
    return report;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open \"" + path + "\" for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write to \"" + path + "\" failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open \"" + path + "\" for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("read from \"" + path + "\" failed");
  return buffer.str();
}

void save_config(const std::string& path, const HardyConfiguration& config,
                 const std::string& provenance) {
  write_text_file(path, config_to_json(config, provenance).dump(2) + "\n");
}

HardyConfiguration load_config(const std::string& path, double tol) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("\"" + path + "\" is not valid JSON: " + e.what());
  }
  try {
    return config_from_json(j, tol);
  } catch (const json::exception& e) {
    throw Error("\"" + path + "\" is malformed: " + e.what());
  }
}

void save_support(const std::string& path, const Support& support) {
  write_text_file(path, support_to_json(support).dump(2) + "\n");
}

Support load_support(const std::string& path, const HardyConfiguration& config) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("\"" + path + "\" is not valid JSON: " + e.what());
  }
  try {
    return support_from_json(j, config);
  } catch (const json::exception& e) {
    throw Error("\"" + path + "\" is malformed: " + e.what());
  }
}

void save_report(const std::string& path, const ReportFile& report) {
  write_text_file(path, serialize_report(report));
}

ReportFile load_report(const std::string& path) { return parse_report(read_text_file(path)); }

}  // namespace locaudit
