#include <cctype>
#include <charconv>
#include <string>

#include "symmkit/gauge.hpp"
#include "symmkit/kfs.hpp"

namespace symmkit {
namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("spec parse error at offset " + std::to_string(i) + ": " + msg);
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip();
    size_t j = i;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      ++j;
    if (j == i) fail("expected a name");
    std::string out = s.substr(i, j - i);
    i = j;
    return out;
  }
  double number() {
    skip();
    if (s.compare(i, 3, "inf") == 0) {
      i += 3;
      return kInf;
    }
    double v = 0.0;
    auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (res.ec != std::errc()) fail("expected a number");
    i = static_cast<size_t>(res.ptr - s.data());
    return v;
  }
  int integer() {
    skip();
    int v = 0;
    auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (res.ec != std::errc()) fail("expected an integer");
    i = static_cast<size_t>(res.ptr - s.data());
    return v;
  }
  void end() {
    skip();
    if (i != s.size()) fail("trailing input");
  }
};

GaugeSpec parse_gauge(Cursor& c) {
  const std::string id = c.ident();
  if (id == "lp") {
    c.expect(':');
    return GaugeSpec::lp(c.number());
  }
  if (id == "kyfan") {
    c.expect(':');
    return GaugeSpec::ky_fan(c.integer());
  }
  if (id == "dual") {
    c.expect('(');
    GaugeSpec g = parse_gauge(c);
    c.expect(')');
    return GaugeSpec::dual(g);
  }
  if (id == "conv" || id == "conc") {
    c.expect('(');
    GaugeSpec g = parse_gauge(c);
    c.expect(',');
    double r = c.number();
    c.expect(')');
    return id == "conv" ? GaugeSpec::convexify(g, r) : GaugeSpec::concavify(g, r);
  }
  if (id == "prod") {
    c.expect('(');
    GaugeSpec g = parse_gauge(c);
    c.expect(',');
    GaugeSpec h = parse_gauge(c);
    c.expect(')');
    return GaugeSpec::product(g, h);
  }
  c.fail("unknown gauge combinator '" + id + "'");
}

KfsSpec parse_kfs(Cursor& c) {
  const std::string id = c.ident();
  if (id == "mixed") {
    c.expect('(');
    GaugeSpec g = parse_gauge(c);
    c.expect(',');
    double p = c.number();
    c.expect(')');
    return KfsSpec::mixed_row(g, p);
  }
  if (id == "t") {
    c.expect('(');
    KfsSpec x = parse_kfs(c);
    c.expect(')');
    return KfsSpec::transpose(x);
  }
  if (id == "sum" || id == "cap") {
    c.expect('(');
    KfsSpec x = parse_kfs(c);
    c.expect(',');
    KfsSpec y = parse_kfs(c);
    c.expect(')');
    return id == "sum" ? KfsSpec::sum(x, y) : KfsSpec::intersect(x, y);
  }
  if (id == "lpgrid") {
    c.expect(':');
    return KfsSpec::lp_grid(c.number());
  }
  if (id == "l2grid") return KfsSpec::lp_grid(2.0);
  c.fail("unknown space combinator '" + id + "'");
}

}  // namespace

GaugeSpec parse_gauge_spec(const std::string& text) {
  Cursor c{text};
  GaugeSpec g = parse_gauge(c);
  c.end();
  return g;
}

KfsSpec parse_kfs_spec(const std::string& text) {
  Cursor c{text};
  KfsSpec x = parse_kfs(c);
  c.end();
  return x;
}

}  // namespace symmkit
