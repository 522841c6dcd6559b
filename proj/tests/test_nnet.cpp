#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>

#include <nlohmann/json.hpp>

#include "groundnav/error.hpp"
#include "groundnav/nnet/layers.hpp"
#include "groundnav/nnet/optim.hpp"
#include "groundnav/nnet/tape.hpp"

using namespace groundnav;
using namespace groundnav::nnet;

namespace {

Matrix random_matrix(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// The GRU recurrence written out directly for one step from h = 0.
Vector reference_gru_step(const std::vector<const Parameter*>& p, const Vector& x) {
  // Parameter order: w_z u_z b_z w_r u_r b_r w_h u_h b_h.
  const Vector h = Vector::Zero(p[1]->value.rows());
  const Vector z = (p[0]->value * x + p[1]->value * h + p[2]->value).unaryExpr(&sig);
  const Vector r = (p[3]->value * x + p[4]->value * h + p[5]->value).unaryExpr(&sig);
  const Vector c = (p[6]->value * x + p[7]->value * r.cwiseProduct(h) + p[8]->value)
                       .unaryExpr([](double v) { return std::tanh(v); });
  return (Vector::Ones(h.size()) - z).cwiseProduct(h) + z.cwiseProduct(c);
}

}  // namespace

TEST_CASE("zero GRU maps every input to the zero state") {
  GruEncoder gru("g", 4, 8);
  std::mt19937_64 rng(1);
  const Vector h = gru.run(random_matrix(5, 4, rng));
  CHECK(h.size() == 8);
  CHECK(h.isZero());
}

TEST_CASE("single step matches the written-out recurrence") {
  GruEncoder gru("g", 3, 5);
  std::mt19937_64 rng(2);
  gru.initialize(rng);
  const Matrix x = random_matrix(1, 3, rng);
  const Vector ref = reference_gru_step(std::as_const(gru).parameters(), x.row(0).transpose());
  CHECK(gru.run(x).isApprox(ref, 1e-12));
}

TEST_CASE("GRU is order sensitive") {
  GruEncoder gru("g", 3, 8);
  std::mt19937_64 rng(3);
  gru.initialize(rng);
  const Matrix north = random_matrix(1, 3, rng);
  const Matrix exit = random_matrix(1, 3, rng);
  Matrix a(2, 3), b(2, 3);
  a << north, exit;
  b << exit, north;
  CHECK((gru.run(a) - gru.run(b)).norm() > 1e-6);
}

TEST_CASE("GRU input validation") {
  GruEncoder gru("g", 3, 4);
  CHECK_THROWS_AS(gru.run(Matrix(0, 3)), std::invalid_argument);
  CHECK_THROWS_AS(gru.run(Matrix::Zero(2, 4)), std::invalid_argument);
}

TEST_CASE("tape gradients on elementary graphs") {
  SUBCASE("w . x") {
    Parameter w("w", Matrix{{1.0, -2.0, 0.5}});
    Tape t;
    Matrix x(3, 1);
    x << 3.0, 4.0, -1.0;
    t.backward(t.matmul(t.param(w), t.constant(x)));
    CHECK(w.grad.transpose().isApprox(x));
  }
  SUBCASE("constant has zero gradient") {
    Parameter w("w", Matrix::Ones(2, 1));
    Tape t;
    t.param(w);
    t.backward(t.scalar(4.0));
    CHECK(w.grad.isZero());
  }
  SUBCASE("non scalar root") {
    Tape t;
    CHECK_THROWS_AS(t.backward(t.constant(Matrix::Ones(2, 1))), std::invalid_argument);
  }
}

TEST_CASE("random three token classifier passes the finite difference check") {
  for (std::uint64_t seed : {1, 2, 3}) {
    std::mt19937_64 rng(seed);
    Parameter table("emb", random_matrix(6, 4, rng));
    GruEncoder gru("g", 4, 8);
    LinearHead head("h", 8, 4);
    gru.initialize(rng);
    head.initialize(rng);
    std::vector<Parameter*> params{&table};
    for (auto* p : gru.parameters()) params.push_back(p);
    for (auto* p : head.parameters()) params.push_back(p);
    const int tokens[] = {2, 5, 1};
    auto loss = [&](bool backward) {
      Tape t;
      std::vector<Var> xs;
      for (int tok : tokens) xs.push_back(t.row(table, tok));
      const Var l = t.softmax_cross_entropy(head.forward(t, gru.forward(t, xs)), 2);
      if (backward) t.backward(l);
      return t.scalar_value(l);
    };
    const GradCheckResult r = finite_diff_check(loss, params);
    INFO("seed " << seed << " worst " << r.worst_parameter);
    CHECK(r.max_relative_error < 1e-3);
    CHECK(r.checked > 100);
  }
}

TEST_CASE("every tape op matches finite differences") {
  std::mt19937_64 rng(5);
  Parameter a("a", random_matrix(3, 1, rng));
  Parameter b("b", random_matrix(3, 1, rng));
  std::vector<Parameter*> params{&a, &b};
  auto loss = [&](bool backward) {
    Tape t;
    const Var x = t.param(a);
    const Var y = t.param(b);
    Var v = t.add(t.mul(t.sigmoid(x), t.tanh(y)), t.sub(t.exp(t.scale(x, 0.3)), t.sin(y)));
    v = t.add(v, t.cos(t.shift(x, 0.2)));
    v = t.add(v, t.log(t.shift(t.mul(x, x), 1.0)));
    v = t.add(v, t.relu(t.shift(y, 0.1)));
    v = t.add(v, t.mul(t.element(v, 1), t.scalar(0.5)));
    const Var root = t.add(t.sum(v), t.bce_with_logits(t.element(x, 0), 0.3));
    if (backward) t.backward(root);
    return t.scalar_value(root);
  };
  CHECK(finite_diff_check(loss, params).max_relative_error < 1e-3);
}

TEST_CASE("adam") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    Parameter p("p", Matrix::Constant(2, 2, 0.7));
    AdamState adam({&p});
    for (int i = 0; i < 10; ++i) adam.step();
    CHECK(p.value.isApprox(Matrix::Constant(2, 2, 0.7)));
  }
  SUBCASE("constant gradient moves against its sign") {
    Parameter p("p", Matrix::Zero(2, 1));
    AdamState adam({&p}, {1e-2});
    for (int i = 0; i < 100; ++i) {
      p.grad << 3.0, -0.5;
      adam.step();
    }
    CHECK(p.value(0, 0) < 0.0);
    CHECK(p.value(1, 0) > 0.0);
  }
  SUBCASE("one dimensional quadratic converges") {
    Parameter p("p", Matrix::Constant(1, 1, 2.0));
    AdamState adam({&p}, {1e-2});
    int steps = 0;
    double loss = 1.0;
    while (steps < 5000 && loss >= 1e-6) {
      const double x = p.value(0, 0) - 0.5;
      loss = x * x;
      p.grad(0, 0) = 2.0 * x;
      adam.step();
      ++steps;
    }
    CHECK(loss < 1e-6);
    CHECK(steps <= 5000);
  }
  SUBCASE("non finite gradient aborts without modifying") {
    Parameter p("p", Matrix::Constant(1, 2, 1.0));
    Parameter q("q", Matrix::Constant(1, 1, 1.0));
    AdamState adam({&p, &q});
    p.grad(0, 0) = 1.0;
    q.grad(0, 0) = std::nan("");
    CHECK_THROWS_AS(adam.step(), NumericError);
    CHECK(p.value(0, 0) == 1.0);
  }
}

TEST_CASE("parameter serialization round trip") {
  std::mt19937_64 rng(9);
  LinearHead head("h", 3, 2);
  head.initialize(rng);
  nlohmann::json j;
  const auto cparams = static_cast<const LinearHead&>(head).parameters();
  write_parameters(j, cparams);
  LinearHead other("h", 3, 2);
  const auto params = other.parameters();
  read_parameters(j, params);
  CHECK(other.parameters()[0]->value == head.parameters()[0]->value);
  LinearHead wrong("h", 4, 2);
  const auto wp = wrong.parameters();
  CHECK_THROWS_AS(read_parameters(j, wp), std::invalid_argument);
}

TEST_CASE("forward is deterministic") {
  std::mt19937_64 r1(4), r2(4);
  GruEncoder a("g", 3, 8), b("g", 3, 8);
  a.initialize(r1);
  b.initialize(r2);
  std::mt19937_64 rng(1);
  const Matrix x = random_matrix(4, 3, rng);
  CHECK(a.run(x) == b.run(x));
}
