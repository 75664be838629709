#include "hgtrack/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hgtrack/rng.hpp"

namespace hgtrack {

using nlohmann::json;

namespace {

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// Numerically stable BCE from the logit.
double bce_from_logit(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

AffineLayer make_affine(int in, int out, Rng& rng, double scale) {
  AffineLayer a;
  a.in = in;
  a.out = out;
  a.W.resize(static_cast<size_t>(in) * out);
  a.b.assign(out, 0.0);
  for (double& w : a.W) w = rng.uniform(-scale, scale);
  return a;
}

// y = W x + b
void affine_apply(const AffineLayer& a, const double* x, double* y) {
  for (int r = 0; r < a.out; ++r) {
    double acc = a.b[r];
    const double* row = a.W.data() + static_cast<size_t>(r) * a.in;
    for (int c = 0; c < a.in; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

// Backward through y = W x + b given dy and the relu mask applied outside.
void affine_backward(const AffineLayer& a, const double* x, const double* dy, AffineLayer& grad,
                     double* dx) {
  for (int r = 0; r < a.out; ++r) {
    double g = dy[r];
    if (g == 0.0) continue;
    double* grow = grad.W.data() + static_cast<size_t>(r) * a.in;
    const double* row = a.W.data() + static_cast<size_t>(r) * a.in;
    for (int c = 0; c < a.in; ++c) {
      grow[c] += g * x[c];
      if (dx) dx[c] += g * row[c];
    }
    grad.b[r] += g;
  }
}

void relu_inplace(double* v, int n) {
  for (int i = 0; i < n; ++i) v[i] = v[i] > 0 ? v[i] : 0.0;
}

struct Adjacency {
  std::vector<std::vector<int>> in_edges;
  std::vector<std::vector<int>> out_edges;
};

// Contribution order keyed by the far endpoint's first detection (unique per
// node within a graph), so aggregation sums do not depend on node order.
Adjacency build_adjacency(const AssocGraph& g) {
  Adjacency adj;
  adj.in_edges.resize(g.nodes.size());
  adj.out_edges.resize(g.nodes.size());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    adj.in_edges[g.edges[i].dst].push_back(static_cast<int>(i));
    adj.out_edges[g.edges[i].src].push_back(static_cast<int>(i));
  }
  for (auto& lst : adj.in_edges)
    std::stable_sort(lst.begin(), lst.end(), [&](int a, int b) {
      return g.nodes[g.edges[a].src].first_det < g.nodes[g.edges[b].src].first_det;
    });
  for (auto& lst : adj.out_edges)
    std::stable_sort(lst.begin(), lst.end(), [&](int a, int b) {
      return g.nodes[g.edges[a].dst].first_det < g.nodes[g.edges[b].dst].first_det;
    });
  return adj;
}

void check_graph(const AssocGraph& g, const ScorerWeights& w) {
  if (g.level < 1 || g.level > w.levels)
    throw std::invalid_argument("score_edges: graph level " + std::to_string(g.level) +
                                " outside scorer levels 1.." + std::to_string(w.levels));
  for (const GraphEdge& e : g.edges)
    if (static_cast<int>(e.features.size()) != w.feature_dim)
      throw std::invalid_argument("score_edges: edge feature dimension " +
                                  std::to_string(e.features.size()) + " != scorer feature_dim " +
                                  std::to_string(w.feature_dim));
}

struct MpnCache {
  // he[m], hv[m], ain[m], aout[m] for rounds m = 0..M (aggregates from 1).
  std::vector<std::vector<double>> he, hv, ain, aout;
  std::vector<double> z;
};

// Shared forward pass. For the logistic kind the head reads the encoded edge
// features directly (equivalently: zero message-passing rounds).
MpnCache forward(const AssocGraph& g, const ScorerWeights& w, const Adjacency* adj) {
  const int H = w.hidden;
  const int E = static_cast<int>(g.edges.size());
  const int V = static_cast<int>(g.nodes.size());
  const int M = w.kind == ScorerKind::MessagePassing ? w.rounds : 0;
  const AffineLayer& enc = w.encoders[g.level - 1];

  MpnCache c;
  c.he.assign(M + 1, std::vector<double>(static_cast<size_t>(E) * H, 0.0));
  c.hv.assign(M + 1, std::vector<double>(static_cast<size_t>(V) * H, 0.0));
  c.ain.assign(M + 1, std::vector<double>(static_cast<size_t>(V) * H, 0.0));
  c.aout.assign(M + 1, std::vector<double>(static_cast<size_t>(V) * H, 0.0));
  c.z.assign(E, 0.0);

  std::vector<double> fx(w.feature_dim);
  for (int e = 0; e < E; ++e) {
    for (int i = 0; i < w.feature_dim; ++i) fx[i] = g.edges[e].features[i];
    affine_apply(enc, fx.data(), c.he[0].data() + static_cast<size_t>(e) * H);
    relu_inplace(c.he[0].data() + static_cast<size_t>(e) * H, H);
  }

  std::vector<double> xe(4 * H), xv(3 * H);
  for (int m = 1; m <= M; ++m) {
    for (int e = 0; e < E; ++e) {
      const GraphEdge& edge = g.edges[e];
      const double* hs = c.hv[m - 1].data() + static_cast<size_t>(edge.src) * H;
      const double* hd = c.hv[m - 1].data() + static_cast<size_t>(edge.dst) * H;
      const double* hp = c.he[m - 1].data() + static_cast<size_t>(e) * H;
      const double* h0 = c.he[0].data() + static_cast<size_t>(e) * H;
      std::copy(hs, hs + H, xe.data());
      std::copy(hd, hd + H, xe.data() + H);
      std::copy(hp, hp + H, xe.data() + 2 * H);
      std::copy(h0, h0 + H, xe.data() + 3 * H);
      double* out = c.he[m].data() + static_cast<size_t>(e) * H;
      affine_apply(w.edge_update, xe.data(), out);
      relu_inplace(out, H);
    }
    for (int v = 0; v < V; ++v) {
      double* ain = c.ain[m].data() + static_cast<size_t>(v) * H;
      double* aout = c.aout[m].data() + static_cast<size_t>(v) * H;
      const auto& ins = adj->in_edges[v];
      const auto& outs = adj->out_edges[v];
      for (int e : ins) {
        const double* he = c.he[m].data() + static_cast<size_t>(e) * H;
        for (int i = 0; i < H; ++i) ain[i] += he[i];
      }
      for (int i = 0; i < H && !ins.empty(); ++i) ain[i] /= static_cast<double>(ins.size());
      for (int e : outs) {
        const double* he = c.he[m].data() + static_cast<size_t>(e) * H;
        for (int i = 0; i < H; ++i) aout[i] += he[i];
      }
      for (int i = 0; i < H && !outs.empty(); ++i) aout[i] /= static_cast<double>(outs.size());

      const double* hv = c.hv[m - 1].data() + static_cast<size_t>(v) * H;
      std::copy(hv, hv + H, xv.data());
      std::copy(ain, ain + H, xv.data() + H);
      std::copy(aout, aout + H, xv.data() + 2 * H);
      double* out = c.hv[m].data() + static_cast<size_t>(v) * H;
      affine_apply(w.node_update, xv.data(), out);
      relu_inplace(out, H);
    }
  }

  for (int e = 0; e < E; ++e) {
    const double* hfinal = c.he[M].data() + static_cast<size_t>(e) * H;
    double z = w.head_b;
    for (int i = 0; i < H; ++i) z += w.head_w[i] * hfinal[i];
    c.z[e] = z;
  }
  return c;
}

struct GradAcc {
  ScorerWeights g;  // same shape as the weights, entries are gradients

  explicit GradAcc(const ScorerWeights& w) {
    g = w;
    for (AffineLayer& a : g.encoders) {
      std::fill(a.W.begin(), a.W.end(), 0.0);
      std::fill(a.b.begin(), a.b.end(), 0.0);
    }
    std::fill(g.head_w.begin(), g.head_w.end(), 0.0);
    g.head_b = 0.0;
    std::fill(g.edge_update.W.begin(), g.edge_update.W.end(), 0.0);
    std::fill(g.edge_update.b.begin(), g.edge_update.b.end(), 0.0);
    std::fill(g.node_update.W.begin(), g.node_update.W.end(), 0.0);
    std::fill(g.node_update.b.begin(), g.node_update.b.end(), 0.0);
  }
};

// Backward through forward() given dL/dz per edge.
void backward(const AssocGraph& g, const ScorerWeights& w, const Adjacency& adj,
              const MpnCache& c, const std::vector<double>& dz, GradAcc& acc) {
  const int H = w.hidden;
  const int E = static_cast<int>(g.edges.size());
  const int V = static_cast<int>(g.nodes.size());
  const int M = w.kind == ScorerKind::MessagePassing ? w.rounds : 0;
  AffineLayer& genc = acc.g.encoders[g.level - 1];

  std::vector<std::vector<double>> dhe(M + 1, std::vector<double>(static_cast<size_t>(E) * H, 0.0));
  std::vector<std::vector<double>> dhv(M + 1, std::vector<double>(static_cast<size_t>(V) * H, 0.0));
  std::vector<double> dhe0(static_cast<size_t>(E) * H, 0.0);  // extra skip-connection path

  // Head.
  for (int e = 0; e < E; ++e) {
    const double* hfinal = c.he[M].data() + static_cast<size_t>(e) * H;
    double* d = dhe[M].data() + static_cast<size_t>(e) * H;
    for (int i = 0; i < H; ++i) {
      acc.g.head_w[i] += dz[e] * hfinal[i];
      d[i] += dz[e] * w.head_w[i];
    }
    acc.g.head_b += dz[e];
  }

  std::vector<double> xe(4 * H), dxe(4 * H), xv(3 * H), dxv(3 * H), dpre(H);
  std::vector<double> dain(static_cast<size_t>(V) * H), daout(static_cast<size_t>(V) * H);
  for (int m = M; m >= 1; --m) {
    std::fill(dain.begin(), dain.end(), 0.0);
    std::fill(daout.begin(), daout.end(), 0.0);
    // Node update backward.
    for (int v = 0; v < V; ++v) {
      const double* out = c.hv[m].data() + static_cast<size_t>(v) * H;
      const double* dout = dhv[m].data() + static_cast<size_t>(v) * H;
      for (int i = 0; i < H; ++i) dpre[i] = out[i] > 0 ? dout[i] : 0.0;
      const double* hv = c.hv[m - 1].data() + static_cast<size_t>(v) * H;
      const double* ain = c.ain[m].data() + static_cast<size_t>(v) * H;
      const double* aout = c.aout[m].data() + static_cast<size_t>(v) * H;
      std::copy(hv, hv + H, xv.data());
      std::copy(ain, ain + H, xv.data() + H);
      std::copy(aout, aout + H, xv.data() + 2 * H);
      std::fill(dxv.begin(), dxv.end(), 0.0);
      affine_backward(w.node_update, xv.data(), dpre.data(), acc.g.node_update, dxv.data());
      double* dhvp = dhv[m - 1].data() + static_cast<size_t>(v) * H;
      for (int i = 0; i < H; ++i) {
        dhvp[i] += dxv[i];
        dain[static_cast<size_t>(v) * H + i] += dxv[H + i];
        daout[static_cast<size_t>(v) * H + i] += dxv[2 * H + i];
      }
    }
    // Edge update backward (aggregation means included).
    for (int e = 0; e < E; ++e) {
      const GraphEdge& edge = g.edges[e];
      const double* out = c.he[m].data() + static_cast<size_t>(e) * H;
      double in_count = static_cast<double>(adj.in_edges[edge.dst].size());
      double out_count = static_cast<double>(adj.out_edges[edge.src].size());
      for (int i = 0; i < H; ++i) {
        double d = dhe[m][static_cast<size_t>(e) * H + i];
        d += dain[static_cast<size_t>(edge.dst) * H + i] / in_count;
        d += daout[static_cast<size_t>(edge.src) * H + i] / out_count;
        dpre[i] = out[i] > 0 ? d : 0.0;
      }
      const double* hs = c.hv[m - 1].data() + static_cast<size_t>(edge.src) * H;
      const double* hd = c.hv[m - 1].data() + static_cast<size_t>(edge.dst) * H;
      const double* hp = c.he[m - 1].data() + static_cast<size_t>(e) * H;
      const double* h0 = c.he[0].data() + static_cast<size_t>(e) * H;
      std::copy(hs, hs + H, xe.data());
      std::copy(hd, hd + H, xe.data() + H);
      std::copy(hp, hp + H, xe.data() + 2 * H);
      std::copy(h0, h0 + H, xe.data() + 3 * H);
      std::fill(dxe.begin(), dxe.end(), 0.0);
      affine_backward(w.edge_update, xe.data(), dpre.data(), acc.g.edge_update, dxe.data());
      double* dhs = dhv[m - 1].data() + static_cast<size_t>(edge.src) * H;
      double* dhd = dhv[m - 1].data() + static_cast<size_t>(edge.dst) * H;
      double* dhp = dhe[m - 1].data() + static_cast<size_t>(e) * H;
      double* dh0 = dhe0.data() + static_cast<size_t>(e) * H;
      for (int i = 0; i < H; ++i) {
        dhs[i] += dxe[i];
        dhd[i] += dxe[H + i];
        dhp[i] += dxe[2 * H + i];
        dh0[i] += dxe[3 * H + i];
      }
    }
  }

  // Encoder backward; dhe[0] and the skip path both feed the encoded output.
  std::vector<double> fx(w.feature_dim);
  const AffineLayer& enc = w.encoders[g.level - 1];
  for (int e = 0; e < E; ++e) {
    const double* out = c.he[0].data() + static_cast<size_t>(e) * H;
    for (int i = 0; i < H; ++i) {
      double d = dhe[0][static_cast<size_t>(e) * H + i] + dhe0[static_cast<size_t>(e) * H + i];
      dpre[i] = out[i] > 0 ? d : 0.0;
    }
    for (int i = 0; i < w.feature_dim; ++i) fx[i] = g.edges[e].features[i];
    affine_backward(enc, fx.data(), dpre.data(), genc, nullptr);
  }
}

double loss_over(const ScorerWeights& w, const std::vector<const LabeledGraph*>& batch,
                 GradAcc* acc) {
  size_t total = 0;
  for (const LabeledGraph* lg : batch) {
    if (lg->labels.size() != lg->graph.edges.size())
      throw std::invalid_argument("labeled graph: label count != edge count");
    total += lg->labels.size();
  }
  if (total == 0) return 0.0;
  double loss_sum = 0.0;
  for (const LabeledGraph* lg : batch) {
    const AssocGraph& g = lg->graph;
    if (g.edges.empty()) continue;
    check_graph(g, w);
    Adjacency adj = build_adjacency(g);
    MpnCache c = forward(g, w, &adj);
    std::vector<double> dz(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
      double y = lg->labels[e];
      loss_sum += bce_from_logit(c.z[e], y);
      dz[e] = (sigmoid(c.z[e]) - y) / static_cast<double>(total);
    }
    if (acc) backward(g, w, adj, c, dz, *acc);
  }
  return loss_sum / static_cast<double>(total);
}

}  // namespace

ScorerWeights init_scorer_weights(ScorerKind kind, int levels, int feature_dim, int hidden,
                                  int rounds, const std::string& feature_layout,
                                  std::uint64_t seed) {
  if (levels < 1) throw std::invalid_argument("init_scorer_weights: levels must be >= 1");
  Rng rng(seed);
  ScorerWeights w;
  w.kind = kind;
  w.levels = levels;
  w.feature_dim = feature_dim;
  w.hidden = hidden;
  w.rounds = kind == ScorerKind::MessagePassing ? rounds : 0;
  w.feature_layout = feature_layout;
  double scale = 0.1;
  for (int l = 0; l < levels; ++l) w.encoders.push_back(make_affine(feature_dim, hidden, rng, scale));
  w.head_w.resize(hidden);
  for (double& v : w.head_w) v = rng.uniform(-scale, scale);
  w.head_b = 0.0;
  if (kind == ScorerKind::MessagePassing) {
    w.edge_update = make_affine(4 * hidden, hidden, rng, scale);
    w.node_update = make_affine(3 * hidden, hidden, rng, scale);
  }
  return w;
}

std::vector<double> score_edges(const AssocGraph& g, const ScorerWeights& w) {
  check_graph(g, w);
  if (g.edges.empty()) return {};
  Adjacency adj = build_adjacency(g);
  MpnCache c = forward(g, w, &adj);
  std::vector<double> scores(g.edges.size());
  for (size_t e = 0; e < scores.size(); ++e) scores[e] = sigmoid(c.z[e]);
  return scores;
}

void score_graph(AssocGraph& g, const ScorerWeights& w) {
  std::vector<double> s = score_edges(g, w);
  for (size_t i = 0; i < s.size(); ++i) g.edges[i].score = s[i];
}

double scorer_loss(const ScorerWeights& w, const std::vector<LabeledGraph>& batch,
                   std::vector<double>* grad_out) {
  std::vector<const LabeledGraph*> ptrs;
  ptrs.reserve(batch.size());
  for (const LabeledGraph& lg : batch) ptrs.push_back(&lg);
  if (!grad_out) return loss_over(w, ptrs, nullptr);
  GradAcc acc(w);
  double loss = loss_over(w, ptrs, &acc);
  *grad_out = flatten_weights(acc.g);
  return loss;
}

std::vector<double> flatten_weights(const ScorerWeights& w) {
  std::vector<double> flat;
  for (const AffineLayer& a : w.encoders) {
    flat.insert(flat.end(), a.W.begin(), a.W.end());
    flat.insert(flat.end(), a.b.begin(), a.b.end());
  }
  flat.insert(flat.end(), w.head_w.begin(), w.head_w.end());
  flat.push_back(w.head_b);
  if (w.kind == ScorerKind::MessagePassing) {
    flat.insert(flat.end(), w.edge_update.W.begin(), w.edge_update.W.end());
    flat.insert(flat.end(), w.edge_update.b.begin(), w.edge_update.b.end());
    flat.insert(flat.end(), w.node_update.W.begin(), w.node_update.W.end());
    flat.insert(flat.end(), w.node_update.b.begin(), w.node_update.b.end());
  }
  return flat;
}

void unflatten_weights(ScorerWeights& w, const std::vector<double>& flat) {
  size_t p = 0;
  auto take = [&](std::vector<double>& dst) {
    if (p + dst.size() > flat.size())
      throw std::invalid_argument("unflatten_weights: size mismatch");
    std::copy(flat.begin() + p, flat.begin() + p + dst.size(), dst.begin());
    p += dst.size();
  };
  for (AffineLayer& a : w.encoders) {
    take(a.W);
    take(a.b);
  }
  take(w.head_w);
  if (p >= flat.size()) throw std::invalid_argument("unflatten_weights: size mismatch");
  w.head_b = flat[p++];
  if (w.kind == ScorerKind::MessagePassing) {
    take(w.edge_update.W);
    take(w.edge_update.b);
    take(w.node_update.W);
    take(w.node_update.b);
  }
  if (p != flat.size()) throw std::invalid_argument("unflatten_weights: size mismatch");
}

namespace {

struct Adam {
  std::vector<double> m, v;
  int t = 0;
  double lr;

  Adam(size_t n, double lr_) : m(n, 0.0), v(n, 0.0), lr(lr_) {}

  void step(std::vector<double>& theta, const std::vector<double>& grad) {
    ++t;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double c1 = 1.0 - std::pow(b1, t);
    double c2 = 1.0 - std::pow(b2, t);
    for (size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (1 - b1) * grad[i];
      v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
      theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  }
};

// One training phase on a fixed subset with a fresh optimizer.
double run_phase(ScorerWeights& w, const std::vector<const LabeledGraph*>& subset, int iters,
                 double lr, const std::string& tag, std::ostream* log, int& steps) {
  std::vector<double> theta = flatten_weights(w);
  Adam adam(theta.size(), lr);
  double loss = 0.0;
  for (int it = 1; it <= iters; ++it) {
    GradAcc acc(w);
    loss = loss_over(w, subset, &acc);
    if (std::isnan(loss) || std::isinf(loss))
      throw std::runtime_error("train_scorer: loss diverged (" + tag + " iteration " +
                               std::to_string(it) + ")");
    std::vector<double> grad = flatten_weights(acc.g);
    adam.step(theta, grad);
    unflatten_weights(w, theta);
    ++steps;
    if (log) (*log) << tag << ' ' << it << " loss " << loss << '\n';
  }
  return loss;
}

}  // namespace

TrainResult train_scorer(const std::vector<LabeledGraph>& data, ScorerWeights init,
                         const TrainOptions& opts) {
  size_t total_edges = 0;
  for (const LabeledGraph& lg : data) total_edges += lg.graph.edges.size();
  if (total_edges == 0) throw std::invalid_argument("train_scorer: no training edges");

  TrainResult res;
  res.weights = std::move(init);
  ScorerWeights& w = res.weights;

  // Levels unfreeze one at a time: stage l sees graphs of level <= l.
  for (int stage = 1; stage <= w.levels; ++stage) {
    std::vector<const LabeledGraph*> subset;
    size_t subset_edges = 0;
    for (const LabeledGraph& lg : data) {
      if (lg.graph.level <= stage) {
        subset.push_back(&lg);
        subset_edges += lg.graph.edges.size();
      }
    }
    if (subset_edges == 0) {
      if (opts.log) (*opts.log) << "stage " << stage << " skipped (no edges)\n";
      continue;
    }
    run_phase(w, subset, opts.level_iters, opts.learning_rate,
              "stage " + std::to_string(stage), opts.log, res.steps);
  }

  std::vector<const LabeledGraph*> all;
  for (const LabeledGraph& lg : data) all.push_back(&lg);
  res.final_loss =
      run_phase(w, all, opts.joint_epochs, opts.learning_rate, "joint", opts.log, res.steps);
  if (opts.joint_epochs == 0) res.final_loss = loss_over(w, all, nullptr);
  return res;
}

double gradient_check(const ScorerWeights& w, const std::vector<LabeledGraph>& batch,
                      double epsilon, std::uint64_t seed, int max_coords) {
  if (epsilon < 1e-6 || epsilon > 1e-3)
    throw std::invalid_argument("gradient_check: epsilon must be in [1e-6, 1e-3]");
  std::vector<double> analytic;
  scorer_loss(w, batch, &analytic);
  std::vector<double> theta = flatten_weights(w);

  std::vector<size_t> coords(theta.size());
  for (size_t i = 0; i < coords.size(); ++i) coords[i] = i;
  if (static_cast<int>(coords.size()) > max_coords) {
    Rng rng(seed);
    for (int i = 0; i < max_coords; ++i) {
      size_t j = i + static_cast<size_t>(rng.uniform_int(static_cast<int>(coords.size() - i)));
      std::swap(coords[i], coords[j]);
    }
    coords.resize(max_coords);
  }

  ScorerWeights probe = w;
  double max_rel = 0.0;
  for (size_t i : coords) {
    double keep = theta[i];
    theta[i] = keep + epsilon;
    unflatten_weights(probe, theta);
    double lp = scorer_loss(probe, batch, nullptr);
    theta[i] = keep - epsilon;
    unflatten_weights(probe, theta);
    double lm = scorer_loss(probe, batch, nullptr);
    theta[i] = keep;
    double numeric = (lp - lm) / (2.0 * epsilon);
    double rel = std::abs(analytic[i] - numeric) /
                 std::max({1.0, std::abs(analytic[i]), std::abs(numeric)});
    max_rel = std::max(max_rel, rel);
  }
  unflatten_weights(probe, theta);
  return max_rel;
}

namespace {

constexpr const char* kWeightsFormat = "hgtrack-weights";
constexpr int kWeightsVersion = 1;

void affine_arrays(const std::string& prefix, const AffineLayer& a, json& arrays) {
  arrays[prefix + ".W"] = a.W;
  arrays[prefix + ".b"] = a.b;
}

std::vector<double> need_array(const json& arrays, const std::string& name) {
  if (!arrays.contains(name))
    throw std::runtime_error("weights file: missing array '" + name + "'");
  std::vector<double> v = arrays.at(name).get<std::vector<double>>();
  for (double x : v)
    if (!std::isfinite(x)) throw std::runtime_error("weights file: non-finite entry in '" + name + "'");
  return v;
}

AffineLayer load_affine(const json& arrays, const std::string& prefix, int in, int out) {
  AffineLayer a;
  a.in = in;
  a.out = out;
  a.W = need_array(arrays, prefix + ".W");
  a.b = need_array(arrays, prefix + ".b");
  if (a.W.size() != static_cast<size_t>(in) * out || a.b.size() != static_cast<size_t>(out))
    throw std::runtime_error("weights file: bad dimensions for '" + prefix + "'");
  return a;
}

}  // namespace

void save_weights(const ScorerWeights& w, const std::string& path) {
  json arrays = json::object();
  for (int l = 0; l < w.levels; ++l)
    affine_arrays("enc" + std::to_string(l + 1), w.encoders[l], arrays);
  arrays["head.w"] = w.head_w;
  arrays["head.b"] = std::vector<double>{w.head_b};
  if (w.kind == ScorerKind::MessagePassing) {
    affine_arrays("edge", w.edge_update, arrays);
    affine_arrays("node", w.node_update, arrays);
  }
  json j{{"format", kWeightsFormat},
         {"version", kWeightsVersion},
         {"kind", w.kind == ScorerKind::Logistic ? "logistic" : "mpn"},
         {"levels", w.levels},
         {"feature_dim", w.feature_dim},
         {"hidden", w.hidden},
         {"rounds", w.rounds},
         {"feature_layout", w.feature_layout},
         {"arrays", arrays}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << j.dump(1) << '\n';
}

ScorerWeights load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad weights file " + path + ": " + e.what());
  }
  if (j.value("format", "") != kWeightsFormat)
    throw std::runtime_error("weights file: not a recognized weights file");
  if (j.value("version", -1) != kWeightsVersion)
    throw std::runtime_error("weights file: unsupported version");
  ScorerWeights w;
  std::string kind = j.value("kind", "");
  if (kind == "logistic") w.kind = ScorerKind::Logistic;
  else if (kind == "mpn") w.kind = ScorerKind::MessagePassing;
  else throw std::runtime_error("weights file: unknown kind '" + kind + "'");
  w.levels = j.at("levels").get<int>();
  w.feature_dim = j.at("feature_dim").get<int>();
  w.hidden = j.at("hidden").get<int>();
  w.rounds = j.at("rounds").get<int>();
  w.feature_layout = j.at("feature_layout").get<std::string>();
  if (w.levels < 1 || w.feature_dim < 1 || w.hidden < 1 || w.rounds < 0)
    throw std::runtime_error("weights file: bad metadata");
  const json& arrays = j.at("arrays");
  for (int l = 0; l < w.levels; ++l)
    w.encoders.push_back(load_affine(arrays, "enc" + std::to_string(l + 1), w.feature_dim, w.hidden));
  w.head_w = need_array(arrays, "head.w");
  std::vector<double> hb = need_array(arrays, "head.b");
  if (w.head_w.size() != static_cast<size_t>(w.hidden) || hb.size() != 1)
    throw std::runtime_error("weights file: bad dimensions for 'head'");
  w.head_b = hb[0];
  if (w.kind == ScorerKind::MessagePassing) {
    w.edge_update = load_affine(arrays, "edge", 4 * w.hidden, w.hidden);
    w.node_update = load_affine(arrays, "node", 3 * w.hidden, w.hidden);
  }
  return w;
}

}  // namespace hgtrack
