#include <cmath>

#include "doctest.h"
#include "leo/alloc.hpp"
#include "leo/oracle.hpp"

using namespace leo;

namespace {

alloc::RateInput make_input(int S, int C, int n_comm, int beams) {
  alloc::RateInput in;
  for (int s = 0; s < S; ++s) in.sat_ids.push_back(10 + s);
  for (int c = 0; c < C; ++c) in.cell_ids.push_back(c);
  in.users = Eigen::VectorXd::Constant(C, 10.0);
  in.rho = Eigen::MatrixXd::Constant(S, C, 100e6);
  in.handover = Eigen::MatrixXd::Zero(S, C);
  in.n_comm = n_comm;
  in.beams = beams;
  in.ofdma_s = 0.01;
  in.frame_s = 0.01 * n_comm;
  return in;
}

double violation(const alloc::LagrangianState& st, const Eigen::MatrixXd& x) {
  const Eigen::VectorXd g = (st.w.array() * x.array()).colwise().sum().transpose();
  return (g.array() - 1.0).max(0.0).sum();
}

}  // namespace

TEST_SUITE("alloc") {
  TEST_CASE("per-user throughput") {
    CHECK(alloc::per_user_throughput(50, true, 100e6, 0.05, 100, 0.01, 10.0) ==
          doctest::Approx(45e3));
    CHECK(alloc::per_user_throughput(0, false, 100e6, 0.05, 100, 0.01, 10.0) == 0.0);
    const double r1 = alloc::per_user_throughput(10, true, 1e6, 0.0, 5, 0.01, 1.0);
    const double r2 = alloc::per_user_throughput(20, true, 1e6, 0.0, 5, 0.01, 1.0);
    CHECK(r2 == doctest::Approx(2 * r1));
  }

  TEST_CASE("objective, rates and feasibility") {
    auto in = make_input(2, 3, 4, 1);
    alloc::AllocationMatrix X;
    X.x = alloc::IntMatrix::Zero(2, 3);
    CHECK(alloc::objective_p1(X, in) == 0.0);
    CHECK(alloc::check_feasibility(X, in).ok());

    X.x(0, 0) = 2;
    X.x(0, 1) = 2;
    X.x(1, 2) = 4;
    CHECK(alloc::check_feasibility(X, in).ok());
    const auto r = alloc::cell_rates(X, in);
    CHECK(r(2) == doctest::Approx(2 * r(0)));
    CHECK(alloc::objective_p1(X, in) ==
          doctest::Approx(10 * (2 * std::log(1 + r(0)) + std::log(1 + r(2)))));
    CHECK(X.serving(2) == 1);
    CHECK(X.load(0) == 4);

    X.x(1, 0) = 1;
    CHECK_FALSE(alloc::check_feasibility(X, in).single_serving);
    X.x(1, 0) = 0;
    X.x(0, 2) = 1;
    CHECK_FALSE(alloc::check_feasibility(X, in).budget);
    X.x(0, 2) = 0;
    X.x(1, 2) = 5;
    CHECK_FALSE(alloc::check_feasibility(X, in).integral_bounds);

    in.handover.setConstant(0.05);
    alloc::AllocationMatrix Y;
    Y.x = alloc::IntMatrix::Zero(2, 3);
    Y.x(0, 0) = 1;
    int neg = 0;
    CHECK(alloc::cell_rates(Y, in, &neg)(0) == 0.0);
    CHECK(neg == 1);
  }

  TEST_CASE("rounding") {
    Eigen::MatrixXd xh(1, 4);
    xh << 0.49, 0.5, 2.5, 7.2;
    const auto X = alloc::round_allocation(xh, 5);
    CHECK(X.x(0, 0) == 0);
    CHECK(X.x(0, 1) == 1);
    CHECK(X.x(0, 2) == 3);
    CHECK(X.x(0, 3) == 5);
  }

  TEST_CASE("subproblem corner cases") {
    SUBCASE("one satellite and one cell take the whole budget") {
      auto in = make_input(1, 1, 5, 3);
      alloc::LagrangianState st{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1),
                                Eigen::VectorXd::Zero(1)};
      const auto r = alloc::solve_subproblem(st, in, {});
      CHECK(r.x_hat(0, 0) == doctest::Approx(5.0).epsilon(1e-6));
    }
    SUBCASE("two identical cells split evenly") {
      auto in = make_input(1, 2, 6, 1);
      alloc::LagrangianState st{Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(2),
                                Eigen::VectorXd::Zero(2)};
      const auto r = alloc::solve_subproblem(st, in, {});
      CHECK(r.x_hat(0, 0) == doctest::Approx(3.0).epsilon(1e-6));
      CHECK(r.x_hat(0, 1) == doctest::Approx(3.0).epsilon(1e-6));
    }
  }

  TEST_CASE("a larger penalty never increases the violation") {
    auto in = make_input(3, 4, 10, 2);
    in.rho << 100e6, 50e6, 80e6, 10e6,   //
        90e6, 70e6, 20e6, 60e6,          //
        30e6, 95e6, 75e6, 85e6;
    in.users << 12, 40, 7, 25;
    for (double wv : {0.1, 0.3}) {
      for (double lam : {0.0, 2.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double p : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
          alloc::LagrangianState st{Eigen::MatrixXd::Constant(3, 4, wv),
                                    Eigen::VectorXd::Constant(4, lam),
                                    Eigen::VectorXd::Constant(4, p)};
          const auto r = alloc::solve_subproblem(st, in, {});
          const double v = violation(st, r.x_hat);
          CHECK(v <= prev + 1e-6);
          prev = v;
        }
      }
    }
  }

  TEST_CASE("adjust_allocation") {
    auto in = make_input(2, 3, 4, 1);
    in.rho(1, 1) = 200e6;
    alloc::AllocationMatrix X;
    X.x = alloc::IntMatrix::Zero(2, 3);
    X.x(0, 0) = 2;
    X.x(1, 1) = 2;
    const Eigen::MatrixXd xh = X.x.cast<double>();
    CHECK(alloc::adjust_allocation(X, xh, in).x == X.x);

    X.x(0, 1) = 2;  // cell 1 also on satellite 0 with a lower rate
    const auto Y = alloc::adjust_allocation(X, X.x.cast<double>(), in);
    CHECK(Y.x(0, 1) == 0);
    CHECK(Y.x(1, 1) == 2);

    // One satellite, three cells, two frames over budget. The largest
    // rounding surpluses (0.4 and 0.3) are trimmed.
    auto one = make_input(1, 3, 4, 1);
    alloc::AllocationMatrix Z;
    Z.x = alloc::IntMatrix::Zero(1, 3);
    Z.x << 2, 2, 2;
    Eigen::MatrixXd zh(1, 3);
    zh << 1.6, 1.9, 1.7;
    const auto R = alloc::adjust_allocation(Z, zh, one);
    CHECK(R.x(0, 0) == 1);
    CHECK(R.x(0, 1) == 2);
    CHECK(R.x(0, 2) == 1);
    CHECK(R.load(0) == 4);
  }

  TEST_CASE("dmrab matching and tie-break") {
    auto in = make_input(2, 2, 4, 1);
    in.rho(1, 1) = 150e6;
    alloc::DmrabTelemetry t;
    const auto X = alloc::dmrab(in, {}, &t);
    CHECK(t.feasible);
    CHECK(X.serving(0) == 0);  // tie goes to the lower id
    CHECK(X.serving(1) == 1);
    CHECK(alloc::check_feasibility(X, in).ok());
  }

  TEST_CASE("dmrab reports satellites that cannot pay the handover") {
    auto in = make_input(2, 2, 4, 1);
    in.rho(1, 1) = 150e6;
    in.handover.row(1).setConstant(0.05);  // more than N_C * T = 40 ms
    alloc::DmrabTelemetry t;
    const auto X = alloc::dmrab(in, {}, &t);
    CHECK_FALSE(t.feasible);
    REQUIRE(t.infeasible_sats.size() == 1);
    CHECK(t.infeasible_sats[0] == 11);
    CHECK(X.load(1) == 0);
  }

  TEST_CASE("jmra and dmrab coincide with one satellite") {
    auto in = make_input(1, 4, 20, 1);
    in.rho << 100e6, 50e6, 80e6, 10e6;
    in.users << 12, 40, 7, 25;
    const auto a = alloc::jmra(in, {});
    const auto b = alloc::dmrab(in, {});
    CHECK(a.x == b.x);
  }

  TEST_CASE("brute force") {
    auto zero = make_input(1, 2, 2, 1);
    zero.rho.setZero();
    CHECK(alloc::brute_force_p1(zero).objective == 0.0);

    auto in = make_input(1, 2, 2, 1);
    in.rho << 100e6, 30e6;
    in.users << 10, 30;
    const auto bf = alloc::brute_force_p1(in);
    double best = -1.0;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b) {
        const double r1 = a * 0.01 * 100e6 / (0.02 * 10), r2 = b * 0.01 * 30e6 / (0.02 * 30);
        best = std::max(best, 10 * std::log(1 + r1) + 30 * std::log(1 + r2));
      }
    CHECK(bf.objective == doctest::Approx(best));
    CHECK(bf.objective == doctest::Approx(alloc::objective_p1(bf.x, in)));

    auto big = make_input(4, 8, 50, 2);
    CHECK_THROWS_AS(alloc::brute_force_p1(big), alloc::TooLargeError);
  }

  TEST_CASE("toy instances stay feasible and near the optimum on average") {
    oracle::ToySpec spec;
    Rng rng(2024);
    double ratio = 0.0;
    const int n = 30;
    for (int i = 0; i < n; ++i) {
      const auto in = oracle::random_instance(spec, rng);
      const auto X = alloc::jmra(in, {});
      CHECK(alloc::check_feasibility(X, in).ok());
      const auto bf = alloc::brute_force_p1(in);
      CHECK(alloc::objective_p1(X, in) <= bf.objective + 1e-9);
      ratio += alloc::objective_p1(X, in) / bf.objective;
    }
    CHECK(ratio / n >= 0.95);
  }
}
