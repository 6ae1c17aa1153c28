// Tiny closed-form growth models n(eps, d), evaluated in the log domain.

#include <cctype>
#include <cmath>

#include "tractlab/criteria.hpp"

namespace tractlab {

struct GrowthModel::Node {
  enum class Op { Num, D, X, Add, Mul, Div, Pow, Exp, Log, Sqrt } op;
  double num = 0.0;
  std::shared_ptr<const Node> l, r;

  // natural log of the (positive) value
  double logv(double x, double d) const {
    switch (op) {
      case Op::Num: return std::log(num);
      case Op::D: return std::log(d);
      case Op::X: return std::log(x);
      case Op::Add: {
        const double a = l->logv(x, d), b = r->logv(x, d);
        const double m = std::max(a, b);
        if (m == -INFINITY) return m;
        return m + std::log(std::exp(a - m) + std::exp(b - m));
      }
      case Op::Mul: return l->logv(x, d) + r->logv(x, d);
      case Op::Div: return l->logv(x, d) - r->logv(x, d);
      case Op::Pow: {
        const double e = std::exp(r->logv(x, d));
        return e == 0.0 ? 0.0 : e * l->logv(x, d);
      }
      case Op::Exp: return std::exp(l->logv(x, d));
      case Op::Log: {
        const double v = l->logv(x, d);
        if (v < 0.0) throw InvalidParameter("growth model: log of a value below 1");
        return std::log(v);
      }
      case Op::Sqrt: return 0.5 * l->logv(x, d);
    }
    return NAN;
  }
};

namespace {

using Node = GrowthModel::Node;
using NodeP = std::shared_ptr<const Node>;

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidParameter("growth model '" + s + "' at position " + std::to_string(i) + ": " + msg);
  }
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  static NodeP mk(Node::Op op, NodeP l = nullptr, NodeP r = nullptr, double num = 0.0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->l = std::move(l);
    n->r = std::move(r);
    n->num = num;
    return n;
  }
  NodeP expr() {
    NodeP a = term();
    while (eat('+')) a = mk(Node::Op::Add, a, term());
    return a;
  }
  NodeP term() {
    NodeP a = power();
    while (true) {
      if (eat('*'))
        a = mk(Node::Op::Mul, a, power());
      else if (eat('/'))
        a = mk(Node::Op::Div, a, power());
      else
        return a;
    }
  }
  NodeP power() {
    NodeP a = atom();
    if (eat('^')) return mk(Node::Op::Pow, a, power());
    return a;
  }
  NodeP atom() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    if (eat('(')) {
      NodeP e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.') {
      std::size_t used = 0;
      const double v = std::stod(s.substr(i), &used);
      i += used;
      if (!(v > 0.0)) fail("constants must be positive");
      return mk(Node::Op::Num, nullptr, nullptr, v);
    }
    std::size_t j = i;
    while (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
    const std::string id = s.substr(i, j - i);
    if (id.empty()) fail("unexpected character");
    i = j;
    if (id == "d") return mk(Node::Op::D);
    if (id == "x" || id == "inv_eps") return mk(Node::Op::X);
    Node::Op op;
    if (id == "exp")
      op = Node::Op::Exp;
    else if (id == "log")
      op = Node::Op::Log;
    else if (id == "sqrt")
      op = Node::Op::Sqrt;
    else
      fail("unknown name '" + id + "'");
    if (!eat('(')) fail("expected '(' after " + id);
    NodeP e = expr();
    if (!eat(')')) fail("expected ')'");
    return mk(op, e);
  }
};

}  // namespace

GrowthModel GrowthModel::parse(const std::string& expr) {
  Parser p{expr};
  GrowthModel g;
  g.expr_ = expr;
  g.root_ = p.expr();
  p.ws();
  if (p.i != expr.size()) p.fail("trailing input");
  return g;
}

double GrowthModel::log_eval(double inv_eps, double d) const {
  if (!(inv_eps > 0.0) || !(d >= 1.0)) throw InvalidParameter("growth model needs 1/eps > 0 and d >= 1");
  return root_->logv(inv_eps, d);
}

double GrowthModel::log10_eval(double inv_eps, double d) const { return log_eval(inv_eps, d) / std::log(10.0); }

namespace {

constexpr int kDecades = 15;

bool decaying(const std::vector<GrowthPathPoint>& path) {
  const double last = path.back().ratio, prev = path[path.size() - 2].ratio;
  return last < 1e-3 || last <= 0.5 * prev;
}

// local exponent between the last two decades, and its change from the decade before
std::pair<double, double> local_exponent(const GrowthModel& g, bool along_d) {
  auto at = [&](int k) {
    const double v = std::pow(10.0, k);
    return along_d ? g.log_eval(1.0, v) : g.log_eval(v, 1.0);
  };
  const double l10 = std::log(10.0);
  const double e1 = (at(kDecades) - at(kDecades - 1)) / l10;
  const double e0 = (at(kDecades - 1) - at(kDecades - 2)) / l10;
  return {e1, e1 - e0};
}

}  // namespace

GrowthDiagnostics growth_model_diagnostics(const GrowthModel& gm, const std::vector<GrowthModel>& compare,
                                           const std::vector<std::pair<double, int>>& points) {
  GrowthDiagnostics r;
  for (int k = 0; k <= kDecades; ++k) {
    const double v = std::pow(10.0, k);
    r.d_axis.push_back({1.0, v, gm.log_eval(1.0, v) / (v + 1.0)});
    r.eps_axis.push_back({v, 1.0, gm.log_eval(v, 1.0) / (1.0 + v)});
    r.diagonal.push_back({v, v, gm.log_eval(v, v) / (2.0 * v)});
  }
  r.diagonal_limit = r.diagonal.back().ratio;
  r.wt_passes = decaying(r.d_axis) && decaying(r.eps_axis) && decaying(r.diagonal);

  const auto [q, dq] = local_exponent(gm, true);
  const auto [p, dp] = local_exponent(gm, false);
  if (std::fabs(dq) < 1e-3 * std::max(1.0, std::fabs(q)) && std::fabs(dp) < 1e-3 * std::max(1.0, std::fabs(p))) {
    r.q = q;
    r.p = p;
    r.pt_fit = "polynomial: q = " + std::to_string(q) + ", p = " + std::to_string(p);
  } else {
    r.pt_fit = "no finite (q, p): local exponents keep growing";
  }

  for (const auto& [eps, d] : points) {
    GrowthDiagnostics::Crossover c;
    c.eps = eps;
    c.d = d;
    c.log10_values.push_back(gm.log10_eval(1.0 / eps, d));
    for (const auto& g : compare) c.log10_values.push_back(g.log10_eval(1.0 / eps, d));
    r.crossover.push_back(std::move(c));
  }
  return r;
}

}  // namespace tractlab
