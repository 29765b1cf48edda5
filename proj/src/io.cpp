#include "pcirc/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "pcirc/errors.hpp"

namespace pcirc {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

}  // namespace

std::optional<SemanticsTag> parse_semantics(const std::string& text) {
  if (text == "likelihood") return tag_likelihood();
  if (text == "network") return tag_network();
  if (text == "generating") return tag_generating();
  if (text == "likelihood_pm") return tag_likelihood_pm();
  if (text == "fourier") return tag_fourier();
  if (text == "fourier_ind") return tag_fourier_ind();
  if (text == "raw") return tag_raw();
  if (text == "categorical_generating") return tag_categorical(0);  // k supplied separately
  return std::nullopt;
}

namespace {

struct Parser {
  std::istream& in;
  BuildOptions opts;
  int lineno = 0;

  [[noreturn]] void fail(const std::string& what) const { throw parse_error(lineno, what); }

  bool next_tokens(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      tokens = tokenize(line);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  Rational parse_rational(const std::string& text) {
    auto q = Rational::parse(text);
    if (!q) fail("bad rational '" + text + "'");
    return *q;
  }

  long parse_int(const std::string& text) {
    try {
      std::size_t pos = 0;
      long v = std::stol(text, &pos);
      if (pos != text.size()) fail("bad integer '" + text + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad integer '" + text + "'");
    }
  }

  VarRef parse_var(const std::string& text, int n) {
    std::string body = text;
    Polarity pol = Polarity::plain;
    if (!body.empty() && body[0] == '~') {
      pol = Polarity::bar;
      body.erase(0, 1);
    }
    if (body.size() < 2 || body[0] != 'x') fail("bad variable '" + text + "'");
    long i = parse_int(body.substr(1));
    if (i < 1 || i > n) fail("variable " + text + " out of range for vars " + std::to_string(n));
    return {static_cast<int>(i), pol};
  }

  Circuit run() {
    std::vector<std::string> tokens;
    if (!next_tokens(tokens) || tokens.size() != 2 || tokens[0] != "pcirc" || tokens[1] != "1")
      fail("expected header 'pcirc 1'");

    if (!next_tokens(tokens) || tokens[0] != "semantics" || tokens.size() < 2)
      fail("expected 'semantics <tag>'");
    auto tag = parse_semantics(tokens[1]);
    if (!tag) fail("unknown semantics '" + tokens[1] + "'");
    if (tag->kind == Semantics::categorical_generating) {
      if (tokens.size() != 3 || tokens[2].rfind("k=", 0) != 0)
        fail("categorical_generating requires 'k=<int>'");
      long k = parse_int(tokens[2].substr(2));
      if (k < 2) fail("categorical_generating requires k >= 2");
      tag->categories = static_cast<int>(k);
    } else if (tokens.size() != 2) {
      fail("unexpected tokens after semantics");
    }

    if (!next_tokens(tokens) || tokens.size() != 2 || tokens[0] != "vars")
      fail("expected 'vars <n>'");
    long n = parse_int(tokens[1]);
    if (n < 0) fail("vars must be >= 0");

    CircuitBuilder builder(opts);
    std::unordered_map<std::string, NodeId> names;
    bool has_div = false;

    auto lookup = [&](const std::string& name) -> NodeId {
      auto it = names.find(name);
      if (it == names.end()) fail("node '" + name + "' not defined yet");
      return it->second;
    };

    while (true) {
      if (!next_tokens(tokens)) fail("missing 'output' line");
      if (tokens[0] == "output") {
        if (tokens.size() != 2) fail("expected 'output n<id>'");
        NodeId root = lookup(tokens[1]);
        return builder.finish(root, static_cast<int>(n), *tag, has_div);
      }
      if (tokens.size() < 2) fail("expected node definition");
      const std::string& name = tokens[0];
      if (name.size() < 2 || name[0] != 'n') fail("bad node id '" + name + "'");
      if (names.count(name)) fail("node '" + name + "' defined twice");
      const std::string& kind = tokens[1];
      NodeId id;
      if (kind == "const") {
        if (tokens.size() != 3) fail("expected 'const <rational>'");
        id = builder.constant(parse_rational(tokens[2]));
      } else if (kind == "var") {
        if (tokens.size() != 3) fail("expected 'var x<i>' or 'var ~x<i>'");
        id = builder.var(parse_var(tokens[2], static_cast<int>(n)));
      } else if (kind == "sum") {
        if (tokens.size() < 3) fail("sum node needs at least one child");
        std::vector<WeightedChild> children;
        for (std::size_t i = 2; i < tokens.size(); ++i) {
          auto colon = tokens[i].find(':');
          if (colon == std::string::npos) fail("sum child must be '<w>:n<id>'");
          children.push_back(
              {parse_rational(tokens[i].substr(0, colon)), lookup(tokens[i].substr(colon + 1))});
        }
        id = builder.sum(std::move(children));
      } else if (kind == "mul") {
        if (tokens.size() < 3) fail("mul node needs at least one child");
        std::vector<NodeId> children;
        for (std::size_t i = 2; i < tokens.size(); ++i) children.push_back(lookup(tokens[i]));
        id = builder.product(std::move(children));
      } else if (kind == "div") {
        if (tokens.size() != 4) fail("expected 'div n<num> n<den>'");
        id = builder.div(lookup(tokens[2]), lookup(tokens[3]));
        has_div = true;
      } else {
        fail("unknown node kind '" + kind + "'");
      }
      names.emplace(name, id);
    }
  }
};

}  // namespace

Circuit read_pcirc(std::istream& in, BuildOptions opts) {
  Parser p{in, opts};
  try {
    return p.run();
  } catch (const parse_error&) {
    throw;
  } catch (const error& e) {
    // construction errors get the current line for context
    throw parse_error(p.lineno, e.what());
  }
}

Circuit read_pcirc_file(const std::string& path, BuildOptions opts) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path);
  return read_pcirc(in, opts);
}

Circuit read_pcirc_string(const std::string& text, BuildOptions opts) {
  std::istringstream in(text);
  return read_pcirc(in, opts);
}

void write_pcirc(std::ostream& out, const Circuit& c) {
  out << "pcirc 1\n";
  out << "semantics " << semantics_name(c.semantics()) << "\n";
  out << "vars " << c.var_count() << "\n";
  for (NodeId id = 0; id < c.nodes().size(); ++id) {
    const Node& node = c.node(id);
    out << "n" << id << " ";
    if (const auto* s = std::get_if<SumNode>(&node)) {
      out << "sum";
      for (const auto& wc : s->children) out << " " << wc.weight.str() << ":n" << wc.child;
    } else if (const auto* p = std::get_if<ProductNode>(&node)) {
      out << "mul";
      for (NodeId ch : p->children) out << " n" << ch;
    } else if (const auto* d = std::get_if<DivNode>(&node)) {
      out << "div n" << d->num << " n" << d->den;
    } else if (const auto* v = std::get_if<VarNode>(&node)) {
      out << "var " << (v->ref.pol == Polarity::bar ? "~" : "") << "x" << v->ref.index;
    } else {
      out << "const " << std::get<ConstNode>(node).value.str();
    }
    out << "\n";
  }
  out << "output n" << c.root() << "\n";
}

void write_pcirc_file(const std::string& path, const Circuit& c) {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path + " for writing");
  write_pcirc(out, c);
}

std::string to_pcirc(const Circuit& c) {
  std::ostringstream out;
  write_pcirc(out, c);
  return out.str();
}

}  // namespace pcirc
