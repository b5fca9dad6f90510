#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scene/nn/adam.hpp"
#include "scene/nn/lstm.hpp"

using namespace scene;
using namespace scene::nn;

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

/// Scalar evaluation of the five gate equations for a single-unit cell.
struct ScalarCell {
  double wxi, whi, wci, bi;
  double wxf, whf, wcf, bf;
  double wxc, whc, bc;
  double wxo, who, wco, bo;

  std::pair<double, double> step(double x, double h_prev, double c_prev) const {
    const double i = sigmoid(wxi * x + whi * h_prev + wci * c_prev + bi);
    const double f = sigmoid(wxf * x + whf * h_prev + wcf * c_prev + bf);
    const double c = f * c_prev + i * std::tanh(wxc * x + whc * h_prev + bc);
    const double o = sigmoid(wxo * x + who * h_prev + wco * c + bo);
    return {o * std::tanh(c), c};
  }
};

LstmLayer<double> single_unit_cell(const ScalarCell& s) {
  LstmLayer<double> layer(LayerSpec::lstm(1, true), {1, 1});
  std::vector<ParamRef<double>> params;
  layer.collect_params("p", params);
  auto set = [&](const char* suffix, double v) {
    for (auto& p : params) {
      if (p.name.ends_with(suffix)) {
        p.value->fill(v);
        return;
      }
    }
    FAIL("missing parameter ", suffix);
  };
  set(".Wxi", s.wxi);
  set(".Whi", s.whi);
  set(".wci", s.wci);
  set(".bi", s.bi);
  set(".Wxf", s.wxf);
  set(".Whf", s.whf);
  set(".wcf", s.wcf);
  set(".bf", s.bf);
  set(".Wxc", s.wxc);
  set(".Whc", s.whc);
  set(".bc", s.bc);
  set(".Wxo", s.wxo);
  set(".Who", s.who);
  set(".wco", s.wco);
  set(".bo", s.bo);
  return layer;
}

}  // namespace

TEST_CASE("all-zero cell settles at sigma(0) gates and zero state") {
  LstmLayer<double> layer(LayerSpec::lstm(3, true), {1, 2});
  // params default to zero
  const auto out = layer.forward(TensorT<double>({1, 2}), Mode::Eval, nullptr);
  // i = f = o = 0.5, c = 0.5*tanh(0) = 0, h = 0.5*tanh(0) = 0
  for (double v : out.data) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("single-unit cell matches the scalar gate-equation oracle") {
  ScalarCell s{0.6, -0.4, 0.3, 0.1,   // input gate
               0.5, 0.2, -0.2, 0.7,   // forget gate
               1.1, -0.8, 0.05,       // candidate
               -0.3, 0.9, 0.4, -0.1}; // output gate
  LstmLayer<double> layer = single_unit_cell(s);

  const std::vector<double> xs = {0.8, -0.5, 0.3, 1.2};
  TensorT<double> x({4, 1}, xs);
  const auto out = layer.forward(x, Mode::Eval, nullptr);

  double h = 0.0, c = 0.0;
  for (int t = 0; t < 4; ++t) {
    auto [h_new, c_new] = s.step(xs[static_cast<std::size_t>(t)], h, c);
    h = h_new;
    c = c_new;
    CHECK(out(t, 0) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("saturated forget gate approximates a perfect integrator") {
  ScalarCell s{0.6, -0.4, 0.3, 0.1, 0.5, 0.2, -0.2, 100.0,  // bf = 100 -> f ~ 1
               1.1, -0.8, 0.05, -0.3, 0.9, 0.4, -0.1};
  LstmLayer<double> layer = single_unit_cell(s);
  const std::vector<double> xs = {0.4, 0.4, 0.4};
  TensorT<double> x({3, 1}, xs);
  layer.forward(x, Mode::Eval, nullptr);

  // scalar oracle with the same saturation: with f ~ 1 the cell integrates,
  // c_t ~ c_{t-1} + i_t * tanh(candidate_t)
  double h = 0.0, c = 0.0;
  for (double xv : xs) {
    const double c_prev = c;
    const double i_gate = sigmoid(s.wxi * xv + s.whi * h + s.wci * c_prev + s.bi);
    const double cand = std::tanh(s.wxc * xv + s.whc * h + s.bc);
    auto [h_new, c_new] = s.step(xv, h, c);
    h = h_new;
    c = c_new;
    CHECK(c == doctest::Approx(c_prev + i_gate * cand).epsilon(1e-6));
  }
}

TEST_CASE("peephole-free cell ignores the cell state in its gates") {
  LstmLayer<double> with_peep(LayerSpec::lstm(2, true, true), {3, 2});
  LstmLayer<double> without_peep(LayerSpec::lstm(2, true, false), {3, 2});
  Rng rng(40);
  with_peep.init_params(rng);
  Rng rng2(40);
  without_peep.init_params(rng2);

  // same non-peephole weights; peepholes of the first are forced nonzero
  std::vector<ParamRef<double>> pw, po;
  with_peep.collect_params("p", pw);
  without_peep.collect_params("p", po);
  CHECK(pw.size() == po.size() + 3);
  for (auto& p : pw) {
    if (p.name.ends_with(".wci") || p.name.ends_with(".wcf") || p.name.ends_with(".wco")) {
      p.value->fill(2.0);
    }
  }

  TensorT<double> x({3, 2});
  oracles::fill_uniform(x, rng, -1.0, 1.0);
  const auto a = with_peep.forward(x, Mode::Eval, nullptr);
  const auto b = without_peep.forward(x, Mode::Eval, nullptr);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (std::abs(a.data[i] - b.data[i]) > 1e-9) any_differs = true;
  }
  CHECK(any_differs);  // peepholes participate when enabled...

  for (auto& p : pw) {
    if (p.name.ends_with(".wci") || p.name.ends_with(".wcf") || p.name.ends_with(".wco")) {
      p.value->fill(0.0);
    }
  }
  const auto a0 = with_peep.forward(x, Mode::Eval, nullptr);
  for (std::size_t i = 0; i < a0.data.size(); ++i) {
    CHECK(a0.data[i] == doctest::Approx(b.data[i]).epsilon(1e-12));  // ...and vanish at zero
  }
}

TEST_CASE("T=1 equals a single cell step from zero state") {
  Rng rng(41);
  LstmLayer<double> layer(LayerSpec::lstm(5, true), {1, 3});
  layer.init_params(rng);
  TensorT<double> x({1, 3});
  oracles::fill_uniform(x, rng, -1.0, 1.0);
  const auto seq = layer.forward(x, Mode::Eval, nullptr);

  LstmLayer<double> last(LayerSpec::lstm(5, false), {1, 3});
  Rng rng2(41);
  last.init_params(rng2);
  const auto single = last.forward(x, Mode::Eval, nullptr);
  for (int u = 0; u < 5; ++u) {
    CHECK(seq(0, u) == doctest::Approx(single(u)).epsilon(1e-12));
  }
}

TEST_CASE("return_sequence rows equal prefix-forward final states") {
  Rng rng(42);
  LstmLayer<double> layer(LayerSpec::lstm(4, true), {6, 3});
  layer.init_params(rng);
  TensorT<double> x({6, 3});
  oracles::fill_uniform(x, rng, -1.0, 1.0);
  const auto seq = layer.forward(x, Mode::Eval, nullptr);

  for (int prefix = 1; prefix <= 6; ++prefix) {
    LstmLayer<double> head(LayerSpec::lstm(4, false), {prefix, 3});
    Rng rng2(42);
    head.init_params(rng2);
    TensorT<double> xp({prefix, 3});
    for (int t = 0; t < prefix; ++t) {
      for (int j = 0; j < 3; ++j) xp(t, j) = x(t, j);
    }
    const auto h = head.forward(xp, Mode::Eval, nullptr);
    for (int u = 0; u < 4; ++u) {
      CHECK(seq(prefix - 1, u) == doctest::Approx(h(u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("return_sequence=false equals the last row of the full sequence exactly") {
  Rng rng(43);
  LstmLayer<double> seq_layer(LayerSpec::lstm(7, true), {5, 4});
  LstmLayer<double> last_layer(LayerSpec::lstm(7, false), {5, 4});
  seq_layer.init_params(rng);
  Rng rng2(43);
  last_layer.init_params(rng2);
  TensorT<double> x({5, 4});
  oracles::fill_uniform(x, rng, -1.0, 1.0);
  const auto seq = seq_layer.forward(x, Mode::Eval, nullptr);
  const auto last = last_layer.forward(x, Mode::Eval, nullptr);
  for (int u = 0; u < 7; ++u) CHECK(seq(4, u) == last(u));
}

TEST_CASE("empty sequence is rejected") {
  LstmLayer<double> layer(LayerSpec::lstm(2, true), {4, 3});
  CHECK_THROWS_AS(TensorT<double>({0, 3}), std::invalid_argument);
  // shape validation happens at tensor construction; a mismatched T is fine,
  // but a wrong feature width is not
  CHECK_THROWS_AS(layer.forward(TensorT<double>({4, 2}), Mode::Eval, nullptr),
                  std::invalid_argument);
}

TEST_CASE("lstm BPTT gradients pass finite differences (T=5, units=3)") {
  for (const bool return_seq : {true, false}) {
    for (const bool peepholes : {true, false}) {
      Rng rng(44);
      LstmLayer<double> layer(LayerSpec::lstm(3, return_seq, peepholes), {5, 2});
      layer.init_params(rng);
      // nonzero peepholes so their gradient paths are exercised
      std::vector<ParamRef<double>> params;
      layer.collect_params("p", params);
      for (auto& p : params) {
        if (p.name.ends_with(".wci") || p.name.ends_with(".wcf") ||
            p.name.ends_with(".wco")) {
          oracles::fill_uniform(*p.value, rng, -0.5, 0.5);
        }
      }

      TensorT<double> x({5, 2});
      oracles::fill_uniform(x, rng, -1.0, 1.0);
      const auto out = layer.forward(x, Mode::Eval, nullptr);
      TensorT<double> c(out.shape);
      oracles::fill_uniform(c, rng, -1.0, 1.0);

      auto loss = [&]() {
        const auto y = layer.forward(x, Mode::Eval, nullptr);
        double l = 0.0;
        for (std::size_t i = 0; i < y.data.size(); ++i) l += c.data[i] * y.data[i];
        return l;
      };

      zero_gradients(params);
      layer.forward(x, Mode::Eval, nullptr);
      const auto grad_x = layer.backward(c);

      double worst = oracles::max_rel_error_finite_diff(x, grad_x, loss);
      for (auto& p : params) {
        worst = std::max(worst, oracles::max_rel_error_finite_diff(*p.value, *p.grad, loss));
      }
      CAPTURE(return_seq);
      CAPTURE(peepholes);
      CHECK(worst < 1e-4);
    }
  }
}

TEST_CASE("three stacked lstm layers pass finite differences end to end") {
  Rng rng(45);
  LstmLayer<double> l1(LayerSpec::lstm(3, true), {5, 2});
  LstmLayer<double> l2(LayerSpec::lstm(3, true), {5, 3});
  LstmLayer<double> l3(LayerSpec::lstm(3, false), {5, 3});
  l1.init_params(rng);
  l2.init_params(rng);
  l3.init_params(rng);

  TensorT<double> x({5, 2});
  oracles::fill_uniform(x, rng, -1.0, 1.0);
  TensorT<double> c({3});
  oracles::fill_uniform(c, rng, -1.0, 1.0);

  auto loss = [&]() {
    const auto y = l3.forward(l2.forward(l1.forward(x, Mode::Eval, nullptr), Mode::Eval,
                                         nullptr),
                              Mode::Eval, nullptr);
    double l = 0.0;
    for (int i = 0; i < 3; ++i) l += c(i) * y(i);
    return l;
  };

  std::vector<ParamRef<double>> params;
  l1.collect_params("l1", params);
  l2.collect_params("l2", params);
  l3.collect_params("l3", params);
  zero_gradients(params);

  l3.forward(l2.forward(l1.forward(x, Mode::Eval, nullptr), Mode::Eval, nullptr), Mode::Eval,
             nullptr);
  const auto grad_x = l1.backward(l2.backward(l3.backward(c)));

  double worst = oracles::max_rel_error_finite_diff(x, grad_x, loss);
  for (auto& p : params) {
    worst = std::max(worst, oracles::max_rel_error_finite_diff(*p.value, *p.grad, loss));
  }
  CHECK(worst < 1e-4);
}
