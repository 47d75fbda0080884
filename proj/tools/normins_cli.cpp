// normins: generation, insertion, verification and statistics over symbol
// stream files. Reports are JSON, one object per line.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "normins/analysis.hpp"
#include "normins/liberal_insert.hpp"
#include "normins/necklace_gen.hpp"
#include "normins/one_symbol.hpp"
#include "normins/stream_io.hpp"

using json = nlohmann::ordered_json;
using namespace normins;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

struct Usage : Error {
  using Error::Error;
};

struct Config {
  std::string kind;
  std::string alphabet = "01";
  char sigma = 's';
  std::size_t n = 0, k = 0, r = 1, dmax = 3, d_start = 0, length = 0, alpha = 1, beta = 0;
  std::size_t l = 1, max_len = 3, N = 0, upto = 0, m = 2;
  bool stream = false, nested_input = false, circular = false, strict = false;
  std::optional<double> bound;
  std::optional<std::size_t> theorem;
  std::string schedule = "paper";
  std::vector<std::string> t;
  std::string in, out, sub;
};

std::string read_all(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Usage("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Usage("cannot write " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_symbols(const Config& c, const Alphabet& a, std::span<const Symbol> s) {
  Output o(c.out);
  StreamWriter w(o.os(), a);
  w.put(s);
}

bool g_text = false;

// JSON object per line, or "key: value" lines with --format text
void report(const json& j, std::ostream& os = std::cout) {
  if (!g_text) {
    os << j.dump() << '\n';
    return;
  }
  for (auto& [key, v] : j.items()) os << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

Alphabet alphabet_of(const Config& c) { return Alphabet(c.alphabet); }

void need(bool ok, const std::string& what) {
  if (!ok) throw Usage(what);
}

// ---------------------------------------------------------------- gen

int run_gen(const Config& c) {
  Alphabet a = alphabet_of(c);
  if (c.kind == "ordered") {
    need(c.n >= 1, "--n is required");
    write_symbols(c, a, ordered_necklace(a, c.n).word.symbols());
  } else if (c.kind == "arith") {
    need(c.n >= 1, "--n is required");
    write_symbols(c, a, arithmetic_necklace(a, c.n, c.r).word.symbols());
  } else if (c.kind == "eulerian") {
    need(c.n >= 1 && c.k >= 1, "--n and --k are required");
    write_symbols(c, a, eulerian_perfect_necklace(a, c.n, c.k).necklace.word.symbols());
  } else if (c.kind == "nested") {
    need(c.n >= 1 && c.k >= 1, "--n and --k are required");
    write_symbols(c, a, nested_perfect(a, c.n, c.k).word.symbols());
  } else if (c.kind == "stream-perfect") {
    need(c.length >= 1, "--length is required");
    PerfectStream s(a, 0, c.alpha, c.beta);
    write_symbols(c, a, s.take(c.length));
  } else if (c.kind == "stream-nested") {
    NestedStream s(a, c.dmax, c.d_start, std::max(c.dmax, kNestedStreamMaxD));
    auto v = s.take(c.length ? c.length : SIZE_MAX);
    write_symbols(c, a, v);
  } else {
    throw Usage("unknown generator " + c.kind);
  }
  return kOk;
}

// ---------------------------------------------------------------- insert

int run_insert_liberal(const Config& c) {
  Alphabet a = alphabet_of(c);
  Alphabet ahat = a.with_sigma(c.sigma);
  if (!c.stream) {
    need(c.n >= 1 && c.k >= 1, "--n and --k are required (or --stream --length)");
    // without --in the Eulerian (n,k) necklace is the input
    Word v = c.in.empty() ? eulerian_perfect_necklace(a, c.n, c.k).necklace.word
                          : parse_stream(read_all(c.in), a);
    auto r = liberal_insert(v, c.n, c.k, c.sigma);
    write_symbols(c, ahat, r.output.symbols());
    auto& p = r.report;
    report({{"check", "liberal"},
            {"method", r.method},
            {"perfect", p.perfect},
            {"max_gap", p.max_gap},
            {"bound", p.bound},
            {"subsequence", p.subsequence},
            {"skipped_all_sigma", p.skipped_all_sigma},
            {"skipped_non_sigma", p.skipped_non_sigma},
            {"edges_covered", p.edges_covered},
            {"edges_total", p.edges_total}},
           std::cerr);
    return p.perfect && p.subsequence ? kOk : kCheckFailed;
  }
  need(c.length >= 1, "--stream needs --length");
  std::vector<Symbol> out;
  bool perfect = true, gaps_ok = true, sub = true;
  std::size_t blocks = 0, max_gap = 0;
  for (std::size_t n = 1; out.size() < c.length; ++n, ++blocks) {
    std::size_t k = c.alpha * n + c.beta;
    auto r = liberal_insert(eulerian_perfect_necklace(a, n, k).necklace.word, n, k, c.sigma);
    perfect &= r.report.perfect;
    gaps_ok &= r.report.gap_ok;
    sub &= r.report.subsequence;
    max_gap = std::max(max_gap, r.report.max_gap);
    auto s = r.output.symbols();
    out.insert(out.end(), s.begin(), s.end());
  }
  out.resize(c.length);
  write_symbols(c, ahat, out);
  auto t = check_stream_gap_bound(out, ahat.sigma(), a.size(), a.size() + 1);
  report({{"check", "liberal-stream"},
          {"blocks", blocks},
          {"perfect", perfect},
          {"max_gap", max_gap},
          {"block_bounds_ok", gaps_ok},
          {"subsequence", sub},
          {"theorem_bound_ok", t.pass},
          {"theorem_worst_margin", t.worst_margin},
          {"theorem_positions_checked", t.checked}},
         std::cerr);
  return perfect && sub && t.pass ? kOk : kCheckFailed;
}

ExpansionSchedule schedule_of(const Config& c, std::size_t b) {
  if (c.schedule == "paper") return ExpansionSchedule::paper(b);
  if (c.schedule == "scaled") {
    need(!c.t.empty(), "--schedule scaled needs --t");
    std::vector<BigInt> t;
    for (auto& x : c.t) {
      try {
        t.emplace_back(x);
      } catch (...) {
        throw Usage("bad --t value " + x);
      }
    }
    return ExpansionSchedule::scaled(b, std::move(t));
  }
  throw Usage("--schedule must be paper or scaled");
}

int run_insert_one_symbol(const Config& c) {
  Alphabet a = alphabet_of(c);
  need(c.length >= 1, "--length is required");
  auto sched = schedule_of(c, a.size());
  Word file_input;
  std::unique_ptr<SymbolSource> src;
  bool from_file = !c.in.empty() && !c.nested_input;
  if (from_file) {
    file_input = parse_stream(read_all(c.in), a);
    src = std::make_unique<SpanSource>(file_input.alphabet(), file_input.symbols());
  } else {
    src = std::make_unique<NestedStream>(a, c.dmax, c.d_start, std::max(c.dmax, kNestedStreamMaxD));
  }
  OneSymbolStream os(*src, sched, c.sigma);
  std::vector<Symbol> out;
  out.reserve(c.length);
  for (std::size_t i = 0; i < c.length; ++i) out.push_back(*os.next());
  write_symbols(c, os.alphabet(), out);
  auto lc = check_schedule_log(sched, 1);
  report({{"check", "one-symbol"},
          {"schedule", c.schedule},
          {"input", from_file ? "file" : "nested"},
          {"input_is_nested_stream", !from_file},
          {"emitted", os.emitted()},
          {"consumed", os.consumed()},
          {"stage", os.stage()},
          {"stage1_log_base2_holds", lc.holds_base2},
          {"stage1_log_base_ahat_holds", lc.holds_base_ahat}},
         std::cerr);
  return kOk;
}

int run_sigma_positions(const Config& c) {
  Alphabet a = alphabet_of(c);
  need(c.upto >= 1, "--upto is required");
  auto sched = schedule_of(c, a.size());
  Output o(c.out);
  for (auto p : sigma_positions(sched, c.upto)) o.os() << p << '\n';
  return kOk;
}

// ---------------------------------------------------------------- verify

json violation_json(const PerfectnessReport& r) {
  json j = nullptr;
  if (r.violation_word) j = {{"word", r.violation_word->str()}, {"residues", r.violation_residues}};
  return j;
}

int run_verify(const Config& c) {
  std::string raw = read_all(c.in);
  if (c.kind == "gaps") {
    // any symbols; only sigma matters
    std::vector<Symbol> w;
    std::size_t pos = 0;
    for (char ch : raw) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      ++pos;
      if (!c.alphabet.empty() && ch != c.sigma && c.alphabet.find(ch) == std::string::npos)
        throw BadSymbol(ch, pos);
      w.push_back(ch == c.sigma ? 1 : 0);
    }
    auto g = sigma_gaps(w, 1, c.circular, c.bound);
    json j{{"check", "gaps"},
           {"length", w.size()},
           {"sigma_count", g.positions.size()},
           {"insufficient", g.insufficient},
           {"max_gap", g.max_gap},
           {"bound", c.bound ? json(*c.bound) : json(nullptr)},
           {"circular", c.circular}};
    bool ok = !g.insufficient && g.pass;
    if (c.theorem) {
      auto t = check_stream_gap_bound(w, 1, *c.theorem, *c.theorem + 1);
      j["theorem_bound_ok"] = t.pass;
      j["theorem_worst_margin"] = t.worst_margin;
      j["theorem_first_violation"] = t.first_violation;
      ok = ok && t.pass;
    }
    j["pass"] = ok;
    report(j);
    return ok ? kOk : kCheckFailed;
  }
  Alphabet a = alphabet_of(c);
  if (c.kind == "perfect") {
    need(c.n >= 1 && c.k >= 1, "--n and --k are required");
    Word w = parse_stream(raw, a);
    auto r = is_perfect(w, c.n, c.k);
    report({{"check", "perfect"}, {"n", c.n}, {"k", c.k}, {"is_perfect", r.is_perfect},
            {"first_violation", violation_json(r)}});
    return r.is_perfect ? kOk : kCheckFailed;
  }
  if (c.kind == "nested") {
    need(c.n >= 1 && c.k >= 1, "--n and --k are required");
    Word w = parse_stream(raw, a);
    bool ok = is_nested(w, c.n, c.k);
    report({{"check", "nested"}, {"n", c.n}, {"k", c.k}, {"is_nested", ok}});
    return ok ? kOk : kCheckFailed;
  }
  if (c.kind == "crucial") {
    need(c.n >= 1 && c.k >= 1, "--n and --k are required");
    Word w = parse_stream(raw, a);
    need(w.size() == ipow(a.size(), c.n) * c.k, "length must be k*b^n");
    auto r = check_crucial(w, c.n, c.k, c.nested_input);
    report({{"check", "crucial"},
            {"point1", r.point1},
            {"point2", r.point2},
            {"point3", r.point3},
            {"point3_checked", r.point3_checked},
            {"slack1", r.slack1},
            {"slack2", r.slack2},
            {"slack3", r.point3_checked ? json(r.slack3) : json(nullptr)},
            {"failing_lengths", r.failing_lengths},
            {"witness", r.witness}});
    return r.ok() ? kOk : kCheckFailed;
  }
  if (c.kind == "subsequence") {
    need(!c.sub.empty(), "--sub <file> is required");
    Alphabet ahat = a.with_sigma(c.sigma);
    Word v = parse_stream(read_all(c.sub), a);
    Word w = parse_stream(raw, ahat);
    auto r = subsequence_report(v.symbols(), w.symbols(), ahat.sigma());
    report({{"check", "subsequence"},
            {"subsequence", r.subsequence},
            {"skipped", r.skipped},
            {"skipped_non_sigma", r.skipped_non_sigma},
            {"skipped_all_sigma", r.skipped_all_sigma}});
    bool ok = r.subsequence && (!c.strict || r.skipped_all_sigma);
    return ok ? kOk : kCheckFailed;
  }
  throw Usage("unknown check " + c.kind);
}

// ---------------------------------------------------------------- stats

int run_stats(const Config& c) {
  Alphabet a = alphabet_of(c);
  Word w = parse_stream(read_all(c.in), a);
  if (c.kind == "delta") {
    auto r = discrete_discrepancy(w, c.l);
    report({{"stat", "delta"},
            {"l", r.l},
            {"delta", to_string(r.delta)},
            {"delta_float", r.value()},
            {"argmax", r.argmax.str()}});
  } else if (c.kind == "ps") {
    auto r = ps_statistic(w, c.max_len);
    report({{"stat", "ps"}, {"value", r.value}, {"per_length", r.per_length}, {"argmax", r.argmax.str()}});
  } else if (c.kind == "stard") {
    std::size_t N = c.N ? c.N : (w.size() > kStarGuardDigits ? w.size() - kStarGuardDigits : 0);
    double d = star_discrepancy(w.symbols(), a.size(), N);
    double ln = std::log(static_cast<double>(N));
    report({{"stat", "stard"}, {"N", N}, {"D", d}, {"N_D_over_log2N", N > 1 ? N * d / (ln * ln) : 0.0}});
  } else {
    throw Usage("unknown statistic " + c.kind);
  }
  return kOk;
}

int run_retract(const Config& c) {
  Alphabet ahat = alphabet_of(c).with_sigma(c.sigma);
  Word w = parse_stream(read_all(c.in), ahat);
  Word r = retract(w);
  write_symbols(c, r.alphabet(), r.symbols());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"normins: perfect necklaces, symbol insertion and checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string sigma_str = "s", format = "json";
  app.add_option("--format", format, "report format")->capture_default_str()->check(CLI::IsMember({"json", "text"}));

  auto add_common = [&](CLI::App* s) {
    s->add_option("--alphabet", c.alphabet, "symbols of A, in order")->capture_default_str();
    s->add_option("--in", c.in, "input file (default stdin)");
    s->add_option("--out", c.out, "output file (default stdout)");
  };
  auto add_sigma = [&](CLI::App* s) {
    s->add_option("--sigma", sigma_str, "the extra symbol")->capture_default_str();
  };
  auto add_nk = [&](CLI::App* s) {
    s->add_option("--n", c.n, "word length n");
    s->add_option("--k", c.k, "multiplicity k");
  };
  auto add_schedule = [&](CLI::App* s) {
    s->add_option("--schedule", c.schedule, "paper or scaled")->capture_default_str();
    s->add_option("--t", c.t, "t_i values for the scaled schedule (the last repeats)")->delimiter(',');
  };

  auto* gen = app.add_subcommand("gen", "generate a necklace or stream");
  gen->add_option("kind", c.kind, "ordered|arith|eulerian|nested|stream-perfect|stream-nested")
      ->required()
      ->check(CLI::IsMember({"ordered", "arith", "eulerian", "nested", "stream-perfect", "stream-nested"}));
  add_common(gen);
  add_nk(gen);
  gen->add_option("--r", c.r, "step of the arithmetic necklace")->capture_default_str();
  gen->add_option("--dmax", c.dmax, "last nested level d")->capture_default_str();
  gen->add_option("--d-start", c.d_start, "first nested level d")->capture_default_str();
  gen->add_option("--length", c.length, "symbols to emit");
  gen->add_option("--alpha", c.alpha, "k_n = alpha*n + beta")->capture_default_str();
  gen->add_option("--beta", c.beta, "k_n = alpha*n + beta")->capture_default_str();

  auto* ins = app.add_subcommand("insert", "insert a new symbol");
  ins->add_option("kind", c.kind, "liberal|one-symbol")
      ->required()
      ->check(CLI::IsMember({"liberal", "one-symbol"}));
  add_common(ins);
  add_sigma(ins);
  add_nk(ins);
  add_schedule(ins);
  ins->add_flag("--stream", c.stream, "liberal: transform the perfect stream");
  ins->add_option("--length", c.length, "output symbols");
  ins->add_flag("--nested", c.nested_input, "one-symbol: read the nested stream");
  ins->add_option("--dmax", c.dmax, "nested stream: last level")->capture_default_str();
  ins->add_option("--d-start", c.d_start, "nested stream: first level")->capture_default_str();
  ins->add_option("--alpha", c.alpha, "k_n = alpha*n + beta")->capture_default_str();
  ins->add_option("--beta", c.beta, "k_n = alpha*n + beta")->capture_default_str();

  auto* sp = app.add_subcommand("sigma-positions", "sigma positions of the one-symbol stream");
  sp->add_option("--alphabet", c.alphabet, "symbols of A")->capture_default_str();
  sp->add_option("--upto", c.upto, "last position")->required();
  sp->add_option("--out", c.out, "output file");
  add_schedule(sp);

  auto* ver = app.add_subcommand("verify", "run a checker; exit 1 on violation");
  ver->add_option("kind", c.kind, "perfect|nested|crucial|gaps|subsequence")
      ->required()
      ->check(CLI::IsMember({"perfect", "nested", "crucial", "gaps", "subsequence"}));
  add_common(ver);
  add_sigma(ver);
  add_nk(ver);
  ver->add_option("--bound", c.bound, "gaps: maximum allowed gap");
  ver->add_option("--theorem", c.theorem, "gaps: also check ceil(2b + log_(b+1) N) for |A| = b");
  ver->add_flag("--circular", c.circular, "gaps: wrap around");
  ver->add_flag("--nested", c.nested_input, "crucial: also check the nested split");
  ver->add_option("--sub", c.sub, "subsequence: file with the shorter word");
  ver->add_flag("--strict", c.strict, "subsequence: fail unless every skipped symbol is sigma");

  auto* st = app.add_subcommand("stats", "statistics");
  st->add_option("kind", c.kind, "delta|ps|stard")->required()->check(CLI::IsMember({"delta", "ps", "stard"}));
  add_common(st);
  st->add_option("--l", c.l, "delta: window length")->capture_default_str();
  st->add_option("--max-len", c.max_len, "ps: longest word")->capture_default_str();
  st->add_option("--N", c.N, "stard: number of points (default: all but the guard digits)");

  auto* ret = app.add_subcommand("retract", "delete every sigma");
  add_common(ret);
  add_sigma(ret);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (sigma_str.size() != 1) throw Usage("--sigma must be a single character");
    c.sigma = sigma_str[0];
    g_text = format == "text";
    if (*gen) return run_gen(c);
    if (*ins) {
      if (c.alphabet.find(c.sigma) != std::string::npos) throw Usage("sigma must not be in the alphabet");
      return c.kind == "liberal" ? run_insert_liberal(c) : run_insert_one_symbol(c);
    }
    if (*sp) return run_sigma_positions(c);
    if (*ver) return run_verify(c);
    if (*st) return run_stats(c);
    if (*ret) return run_retract(c);
  } catch (const BadSymbol& e) {
    report({{"error", "bad symbol"}, {"symbol", std::string(1, e.symbol)}, {"position", e.position}},
           std::cerr);
    return kUsage;
  } catch (const Error& e) {
    report({{"error", e.what()}}, std::cerr);
    return kUsage;
  }
  return kUsage;
}
