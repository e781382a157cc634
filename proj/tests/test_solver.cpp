#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "leo/concave_solver.hpp"

using namespace leo;

namespace {

opt::CellTerm cell(double m, double b, std::vector<opt::Var> vars) {
  opt::CellTerm c;
  c.weight = m;
  c.offset = b;
  c.vars = std::move(vars);
  return c;
}

double total(const opt::Solution& s, int cell) {
  double t = 0.0;
  for (double v : s.x[static_cast<std::size_t>(cell)]) t += v;
  return t;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("single cell takes the whole budget") {
    opt::Problem p;
    p.n_sats = 1;
    p.cap = {3.0};
    p.cells = {cell(10.0, 1.0, {{0, 2.0, 0.0, 0.0, 5.0}})};
    const auto s = opt::solve(p);
    CHECK(s.x[0][0] == doctest::Approx(3.0).epsilon(1e-6));
    p.cap = {8.0};
    CHECK(opt::solve(p).x[0][0] == doctest::Approx(5.0).epsilon(1e-6));
  }

  TEST_CASE("symmetric cells split evenly") {
    opt::Problem p;
    p.n_sats = 1;
    p.cap = {10.0};
    p.cells = {cell(5.0, 1.0, {{0, 1.0, 0.0, 0.0, 10.0}}), cell(5.0, 1.0, {{0, 1.0, 0.0, 0.0, 10.0}})};
    const auto s = opt::solve(p);
    CHECK(s.x[0][0] == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(s.x[1][0] == doctest::Approx(5.0).epsilon(1e-6));
  }

  TEST_CASE("two cells with unequal weights match a grid search") {
    opt::Problem p;
    p.n_sats = 1;
    p.cap = {4.0};
    p.cells = {cell(30.0, 1.0, {{0, 0.8, 0.0, 0.0, 4.0}}), cell(70.0, 0.5, {{0, 0.3, 0.0, 0.0, 4.0}})};
    const auto s = opt::solve(p);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 40000; ++i) {
      const double x1 = 4.0 * i / 40000.0;
      best = std::max(best, 30.0 * std::log(1.0 + 0.8 * x1) + 70.0 * std::log(0.5 + 0.3 * (4.0 - x1)));
    }
    CHECK(std::abs(s.objective - best) <= 1e-3 * std::abs(best));
    CHECK(s.objective >= best - 1e-9 * std::abs(best));
    CHECK(total(s, 0) + total(s, 1) <= 4.0 + 1e-9);
  }

  TEST_CASE("penalized cell matches a grid search over x and the slack") {
    opt::Problem p;
    p.n_sats = 1;
    p.cap = {6.0};
    opt::CellTerm c = cell(4.0, 1.0, {{0, 1.5, 0.4, 0.0, 6.0}});
    c.penalized = true;
    c.p = 3.0;
    c.lambda = 0.7;
    p.cells = {c};
    const auto s = opt::solve(p);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 6000; ++i) {
      const double x = 6.0 * i / 6000.0;
      for (int j = 0; j <= 1000; ++j) {
        const double sg = -1.0 * j / 1000.0;
        const double z = 0.4 * x + sg;
        best = std::max(best, 4.0 * std::log(1.0 + 1.5 * x) - (1.5 * z * z + 0.7 * z));
      }
    }
    CHECK(std::abs(s.objective - best) <= 1e-3 * std::abs(best));
    CHECK(s.sigma[0] <= 0.0);
    CHECK(s.sigma[0] >= -1.0);
  }

  TEST_CASE("random problems beat random feasible points") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      opt::Problem p;
      p.n_sats = 3;
      p.cap = {5.0 + 10 * u(rng), 5.0 + 10 * u(rng), 5.0 + 10 * u(rng)};
      const int cells = 2 + static_cast<int>(u(rng) * 6);
      for (int c = 0; c < cells; ++c) {
        std::vector<opt::Var> vars;
        for (int s = 0; s < 3; ++s)
          if (u(rng) < 0.7) vars.push_back({s, 0.1 + u(rng), 0.1 + u(rng), 0.0, 8.0});
        if (vars.empty()) vars.push_back({0, 0.5, 0.5, 0.0, 8.0});
        opt::CellTerm ct = cell(1.0 + 50 * u(rng), 1.0, vars);
        ct.penalized = u(rng) < 0.5;
        ct.p = 5 * u(rng);
        ct.lambda = u(rng);
        p.cells.push_back(ct);
      }
      const auto sol = opt::solve(p);
      std::vector<double> load(3, 0.0);
      for (std::size_t c = 0; c < p.cells.size(); ++c)
        for (std::size_t j = 0; j < p.cells[c].vars.size(); ++j) {
          const auto& v = p.cells[c].vars[j];
          CHECK(sol.x[c][j] >= v.lo - 1e-9);
          CHECK(sol.x[c][j] <= v.hi + 1e-9);
          load[static_cast<std::size_t>(v.sat)] += sol.x[c][j];
        }
      for (int s = 0; s < 3; ++s) CHECK(load[static_cast<std::size_t>(s)] <= p.cap[static_cast<std::size_t>(s)] + 1e-7);

      for (int k = 0; k < 300; ++k) {
        std::vector<std::vector<double>> x(p.cells.size());
        std::vector<double> sigma(p.cells.size());
        std::vector<double> l(3, 0.0);
        for (std::size_t c = 0; c < p.cells.size(); ++c) {
          for (const auto& v : p.cells[c].vars) {
            x[c].push_back(v.hi * u(rng) * 0.4);
            l[static_cast<std::size_t>(v.sat)] += x[c].back();
          }
          sigma[c] = p.cells[c].penalized ? -u(rng) : 0.0;
        }
        bool ok = true;
        for (int s = 0; s < 3; ++s) ok = ok && l[static_cast<std::size_t>(s)] <= p.cap[static_cast<std::size_t>(s)];
        if (!ok) continue;
        CHECK(opt::evaluate(p, x, sigma) <= sol.objective + 1e-7 * (1.0 + std::abs(sol.objective)));
      }
    }
  }

  TEST_CASE("infeasible and degenerate inputs") {
    opt::Problem p;
    p.n_sats = 1;
    p.cap = {2.0};
    p.cells = {cell(1.0, -1.0, {{0, 1.0, 0.0, 3.0, 2.0}})};
    CHECK_THROWS_AS(opt::solve(p), opt::InfeasibleError);

    p.cells = {cell(1.0, -1.0, {{0, 1.0, 0.0, 1.5, 4.0}}), cell(1.0, -1.0, {{0, 1.0, 0.0, 1.5, 4.0}})};
    CHECK_THROWS_AS(opt::solve(p), opt::InfeasibleError);

    opt::Problem q;
    q.n_sats = 1;
    q.cap = {2.0};
    q.cells = {cell(1.0, 1.0, {{0, 1.0, 0.0, 0.0, 2.0}})};
    CHECK(opt::evaluate(q, {{-5.0}}, {0.0}) == -std::numeric_limits<double>::infinity());
    CHECK(opt::evaluate(q, {{1.0}}, {0.0}) == doctest::Approx(std::log(2.0)));
  }
}
