#include "stoprule/cli.hpp"

#include "stoprule/asymptotics.hpp"
#include "stoprule/multithreshold.hpp"
#include "stoprule/oracle.hpp"
#include "stoprule/parallel.hpp"
#include "stoprule/variants.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace stoprule::cli {

Command command_from_name(const std::string& name) {
  if (name == "solve") return Command::solve;
  if (name == "asymptotic") return Command::asymptotic;
  if (name == "verify") return Command::verify;
  if (name == "sweep") return Command::sweep;
  if (name == "oracle") return Command::oracle;
  if (name == "conjecture") return Command::conjecture;
  if (name == "two-threshold") return Command::two_threshold;
  throw ValidationError("unknown command '" + name + "'");
}

Format format_from_name(const std::string& name) {
  if (name == "text") return Format::text;
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  throw ValidationError("unknown format '" + name + "' (known: text, json, csv)");
}

const char* to_string(Command command) {
  switch (command) {
    case Command::solve: return "solve";
    case Command::asymptotic: return "asymptotic";
    case Command::verify: return "verify";
    case Command::sweep: return "sweep";
    case Command::oracle: return "oracle";
    case Command::conjecture: return "conjecture";
    case Command::two_threshold: return "two-threshold";
  }
  return "?";
}

const char* to_string(Format format) {
  switch (format) {
    case Format::text: return "text";
    case Format::json: return "json";
    case Format::csv: return "csv";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------- rendering

std::string num15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string jesc(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

/// One serialized field; `quoted` marks JSON strings.
struct Field {
  std::string key;
  std::string rendered;
  bool quoted = false;
};

using Row = std::vector<Field>;

Field fnum(const std::string& key, double v) { return {key, num15(v), false}; }
Field fint(const std::string& key, long long v) { return {key, std::to_string(v), false}; }
Field fuint(const std::string& key, std::uint64_t v) { return {key, std::to_string(v), false}; }
Field fstr(const std::string& key, const std::string& v) { return {key, v, true}; }
Field fbool(const std::string& key, bool v) { return {key, v ? "true" : "false", false}; }

std::string json_body(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += '"' + jesc(row[i].key) + "\":";
    out += row[i].quoted ? '"' + jesc(row[i].rendered) + '"' : row[i].rendered;
  }
  return out;
}

std::string json_object(const Row& row) { return '{' + json_body(row) + '}'; }

void write_text_fields(std::ostream& os, const Row& row) {
  for (const auto& f : row) os << f.key << " = " << f.rendered << '\n';
}

void write_text_row_line(std::ostream& os, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ' ';
    os << row[i].key << '=' << row[i].rendered;
  }
  os << '\n';
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows.front().size(); ++i)
    os << (i ? "," : "") << rows.front()[i].key;
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].rendered;
    os << '\n';
  }
}

void emit_scalar(std::ostream& os, Format format, const Row& row) {
  switch (format) {
    case Format::text: write_text_fields(os, row); break;
    case Format::json: os << json_object(row) << '\n'; break;
    case Format::csv: write_csv(os, {row}); break;
  }
}

void emit_rows(std::ostream& os, Format format, const Row& head,
               const std::vector<Row>& rows) {
  switch (format) {
    case Format::text:
      write_text_fields(os, head);
      for (const auto& row : rows) write_text_row_line(os, row);
      break;
    case Format::json: {
      std::string body = json_body(head) + ",\"rows\":[";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) body += ',';
        body += json_object(rows[i]);
      }
      os << '{' << body << "]}" << '\n';
      break;
    }
    case Format::csv:
      write_csv(os, rows);
      break;
  }
}

// ------------------------------------------------------------------ parsing

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const ValidationError&) {
    throw;
  } catch (...) {
    throw ValidationError("param " + key + ": cannot parse real value '" + text + "'");
  }
}

long long parse_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const ValidationError&) {
    throw;
  } catch (...) {
    throw ValidationError("param " + key + ": cannot parse integer value '" + text + "'");
  }
}

void set_y_profile(VariantParams& vp, const std::string& text) {
  if (text == "identity" || text == "x") {
    vp.Y = nullptr;
    vp.y_name = "identity";
  } else if (text == "square" || text == "x^2") {
    vp.Y = [](double x) { return x * x; };
    vp.y_name = "square";
  } else if (text == "sqrt") {
    vp.Y = [](double x) { return std::sqrt(x); };
    vp.y_name = "sqrt";
  } else {
    throw ValidationError("param Y: unknown profile '" + text +
                          "' (known: identity, x, square, x^2, sqrt)");
  }
}

struct ParsedParams {
  VariantParams vp;
  double mu = 0;
  bool has_mu = false;
  Index threshold = -1;
  bool has_threshold = false;
  LimitSource method = LimitSource::closed_form;
};

const char* allowed_params(Command command) {
  switch (command) {
    case Command::asymptotic: return "p, c, alpha, beta, gamma, m, b, Y, method";
    case Command::oracle: return "p, c, alpha, beta, gamma, m, b, Y, threshold";
    case Command::conjecture: return "mu";
    case Command::two_threshold: return "(none)";
    default: return "p, c, alpha, beta, gamma, m, b, Y";
  }
}

ParsedParams parse_params(Command command,
                          const std::vector<std::pair<std::string, std::string>>& kv) {
  ParsedParams out;
  for (const auto& [key, value] : kv) {
    const bool variant_key = key == "p" || key == "c" || key == "alpha" ||
                             key == "beta" || key == "gamma" || key == "m" ||
                             key == "b" || key == "Y";
    const bool ok =
        (command == Command::conjecture && key == "mu") ||
        (command == Command::asymptotic && (variant_key || key == "method")) ||
        (command == Command::oracle && (variant_key || key == "threshold")) ||
        (command != Command::conjecture && command != Command::two_threshold &&
         command != Command::asymptotic && command != Command::oracle && variant_key);
    if (!ok)
      throw ValidationError("unknown param '" + key + "' for command '" +
                            to_string(command) + "' (allowed: " + allowed_params(command) + ")");
    if (key == "p") out.vp.p = parse_real(key, value);
    else if (key == "c") out.vp.c = parse_real(key, value);
    else if (key == "alpha") out.vp.alpha = parse_real(key, value);
    else if (key == "beta") out.vp.beta = parse_real(key, value);
    else if (key == "gamma") out.vp.gamma = parse_real(key, value);
    else if (key == "m") out.vp.m = static_cast<long>(parse_integer(key, value));
    else if (key == "b") out.vp.b = parse_real(key, value);
    else if (key == "Y") set_y_profile(out.vp, value);
    else if (key == "mu") { out.mu = parse_real(key, value); out.has_mu = true; }
    else if (key == "threshold") {
      out.threshold = static_cast<Index>(parse_integer(key, value));
      out.has_threshold = true;
    } else if (key == "method") {
      if (value == "closed-form") out.method = LimitSource::closed_form;
      else if (value == "ode-numeric") out.method = LimitSource::ode_numeric;
      else throw ValidationError("param method: unknown value '" + value +
                                 "' (known: closed-form, ode-numeric)");
    }
  }
  return out;
}

Index need_n(const RunRequest& req, Index least) {
  if (req.n < least)
    throw ValidationError(std::string(to_string(req.command)) + ": requires --n >= " +
                          std::to_string(least));
  return req.n;
}

std::vector<Index> need_n_list(const RunRequest& req, Index least) {
  std::vector<Index> ns = req.n_list;
  if (ns.empty() && req.n > 0) ns.push_back(req.n);
  if (ns.empty())
    throw ValidationError(std::string(to_string(req.command)) +
                          ": requires --n-list (or --n)");
  for (Index n : ns)
    if (n < least)
      throw ValidationError(std::string(to_string(req.command)) +
                            ": every n must be >= " + std::to_string(least));
  return ns;
}

// ----------------------------------------------------------------- commands

void cmd_solve(const RunRequest& req, const ParsedParams& pp, std::ostream& os) {
  const VariantId id = variant_from_name(req.variant);
  const Index n = need_n(req, 2);
  const auto inst = make_variant<long double>(id, n, pp.vp);
  const auto res = solve_variant(inst);
  Row row{fstr("command", "solve"),
          fstr("variant", variant_info(id).name),
          fint("n", n),
          fint("kappa", res.kappa),
          fnum("payoff", static_cast<double>(res.payoff)),
          fstr("certified_by", to_string(res.certified_by)),
          fbool("no_crossing", res.no_crossing)};
  emit_scalar(os, req.format, row);
}

void cmd_asymptotic(const RunRequest& req, const ParsedParams& pp, std::ostream& os) {
  const VariantId id = variant_from_name(req.variant);
  const auto res = asymptotic_limits(id, pp.vp, pp.method);
  Row row{fstr("command", "asymptotic"), fstr("variant", variant_info(id).name),
          fnum("theta", res.theta), fnum("payoff", res.limit_payoff),
          fstr("source", to_string(res.source))};
  emit_scalar(os, req.format, row);
}

void cmd_verify(const RunRequest& req, const ParsedParams& pp, std::ostream& os) {
  const VariantId id = variant_from_name(req.variant);
  const auto ns = need_n_list(req, 3);
  const LimitCurve curve = closed_limit_curve(id, pp.vp);
  std::vector<Row> rows(ns.size());
  detail::parallel_for_index(static_cast<Index>(ns.size()), [&](Index i) {
    const Index n = ns[static_cast<std::size_t>(i)];
    const auto inst = make_variant<double>(id, n, pp.vp);
    const HypothesisReport hyp = check_hypotheses_at(inst.spec, curve);
    const GapReport gap = measure_gap(solve_backward(inst.spec), curve);
    rows[static_cast<std::size_t>(i)] =
        Row{fint("n", n),
            fnum("max_abs_H", hyp.max_abs_H),
            fnum("terminal_drift", hyp.terminal_drift),
            fnum("v_sum", hyp.v_sum),
            fnum("m_sum", hyp.m_sum),
            fnum("boundary_drift", hyp.boundary_drift),
            fnum("sup_gap", gap.sup_gap),
            fnum("interior_gap", gap.interior_gap)};
  });
  emit_rows(os, req.format,
            Row{fstr("command", "verify"), fstr("variant", variant_info(id).name)}, rows);
}

void cmd_sweep(const RunRequest& req, const ParsedParams& pp, std::ostream& os) {
  const VariantId id = variant_from_name(req.variant);
  const auto ns = need_n_list(req, 2);
  std::vector<Row> rows(ns.size());
  detail::parallel_for_index(static_cast<Index>(ns.size()), [&](Index i) {
    const Index n = ns[static_cast<std::size_t>(i)];
    const auto inst = make_variant<long double>(id, n, pp.vp);
    const auto res = solve_variant(inst);
    rows[static_cast<std::size_t>(i)] =
        Row{fint("n", n),
            fnum("kappa_over_n",
                 static_cast<double>(res.kappa) / static_cast<double>(n)),
            fnum("payoff", static_cast<double>(res.payoff))};
  });
  emit_rows(os, req.format,
            Row{fstr("command", "sweep"), fstr("variant", variant_info(id).name)}, rows);
}

void cmd_oracle(const RunRequest& req, const ParsedParams& pp, std::ostream& os) {
  const VariantId id = variant_from_name(req.variant);
  const Index n = need_n(req, 2);
  const auto inst = make_variant<double>(id, n, pp.vp);
  const auto table = solve_backward(inst.spec);
  Index threshold = pp.threshold;
  if (pp.has_threshold) {
    if (threshold < 0 || threshold > n)
      throw ValidationError("oracle: threshold must be in [0, n]");
  } else {
    threshold = certify_table(inst, table).kappa;
  }
  const double dp = inst.objective(threshold, table.values[threshold]);
  const bool exact_ok =
      n <= 10 && (id != VariantId::multicriteria || pp.vp.m <= 2);
  if (!exact_ok && req.trials == 0)
    throw ValidationError(
        "oracle: exact enumeration needs n <= 10 (and m <= 2 for multicriteria); "
        "pass --trials for a Monte Carlo check instead");
  Row row{fstr("command", "oracle"), fstr("variant", variant_info(id).name),
          fint("n", n), fint("threshold", threshold), fnum("dp_value", dp)};
  if (exact_ok) {
    const double exact = oracle::enumerate_exact(id, n, pp.vp, threshold);
    row.push_back(fnum("exact", exact));
    row.push_back(fnum("exact_delta", std::abs(exact - dp)));
  }
  if (req.trials > 0) {
    const auto rep = oracle::simulate(id, n, pp.vp, threshold, req.trials, req.seed);
    row.push_back(fint("trials", rep.trials));
    row.push_back(fuint("seed", rep.seed));
    row.push_back(fnum("mc_estimate", rep.estimate));
    row.push_back(fnum("mc_std_error", rep.std_error));
    row.push_back(fnum("mc_sigmas", rep.std_error > 0
                                        ? (rep.estimate - dp) / rep.std_error
                                        : 0.0));
  }
  emit_scalar(os, req.format, row);
}

void cmd_conjecture(const RunRequest& req, const ParsedParams& pp, std::ostream& os) {
  const ConjectureId id = conjecture_from_name(req.variant);
  const auto ns = need_n_list(req, 3);
  const double mu = pp.has_mu ? pp.mu : conjecture_default_mu(id);
  const auto series = run_conjecture_experiment(id, mu, ns);

  const Row head{fstr("command", "conjecture"), fstr("example", to_string(id)),
                 fnum("mu", mu)};
  auto summary_row = [](const ConjectureSeries& s) {
    return Row{fint("n", s.n),
               fnum("sup_gap", s.sup_gap),
               fnum("interior_gap", s.interior_gap),
               fnum("terminal_drift", s.terminal_drift),
               fint("argmax", s.argmax),
               fnum("max_value", s.max_value)};
  };

  switch (req.format) {
    case Format::text: {
      write_text_fields(os, head);
      for (const auto& s : series) write_text_row_line(os, summary_row(s));
      break;
    }
    case Format::json: {
      std::string body = json_body(head) + ",\"rows\":[";
      for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (i) body += ',';
        body += '{' + json_body(summary_row(s)) + ",\"points\":[";
        for (std::size_t j = 0; j < s.dump_k.size(); ++j) {
          if (j) body += ',';
          body += json_object(Row{fint("k", s.dump_k[j]), fnum("x", s.dump_x[j]),
                                  fnum("f_n", s.dump_f_n[j]),
                                  fnum("f_ref", s.dump_f_ref[j])});
        }
        body += "]}";
      }
      os << '{' << body << "]}" << '\n';
      break;
    }
    case Format::csv: {
      std::vector<Row> rows;
      for (const auto& s : series)
        for (std::size_t j = 0; j < s.dump_k.size(); ++j)
          rows.push_back(Row{fstr("example", to_string(id)), fnum("mu", mu),
                             fint("n", s.n), fint("k", s.dump_k[j]),
                             fnum("x", s.dump_x[j]), fnum("f_n", s.dump_f_n[j]),
                             fnum("f_ref", s.dump_f_ref[j])});
      write_csv(os, rows);
      break;
    }
  }
}

void cmd_two_threshold(const RunRequest& req, std::ostream& os) {
  const Index n = need_n(req, 5);
  const auto res = solve_two_threshold(n);
  const auto lim = two_threshold_asymptotics();
  Row row{fstr("command", "two-threshold"),
          fint("n", n),
          fint("r", res.r),
          fint("s", res.s),
          fnum("payoff", res.payoff),
          fnum("r_over_n", static_cast<double>(res.r) / static_cast<double>(n)),
          fnum("s_over_n", static_cast<double>(res.s) / static_cast<double>(n)),
          fnum("r_limit", lim.r),
          fnum("s_limit", lim.s),
          fnum("payoff_limit", lim.payoff)};
  emit_scalar(os, req.format, row);
}

}  // namespace

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!request.out.empty()) {
      file.open(request.out);
      if (!file) throw ValidationError("cannot open output file '" + request.out + "'");
      sink = &file;
    }
    const ParsedParams pp = parse_params(request.command, request.params);
    switch (request.command) {
      case Command::solve: cmd_solve(request, pp, *sink); break;
      case Command::asymptotic: cmd_asymptotic(request, pp, *sink); break;
      case Command::verify: cmd_verify(request, pp, *sink); break;
      case Command::sweep: cmd_sweep(request, pp, *sink); break;
      case Command::oracle: cmd_oracle(request, pp, *sink); break;
      case Command::conjecture: cmd_conjecture(request, pp, *sink); break;
      case Command::two_threshold: cmd_two_threshold(request, *sink); break;
    }
    sink->flush();
    return 0;
  } catch (const ValidationError& e) {
    err << "error: validation: " << e.what() << '\n';
    return 1;
  } catch (const DiagnosticError& e) {
    err << "error: diagnostic: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace stoprule::cli
