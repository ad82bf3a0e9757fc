#include <clocale>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "parallel.hpp"
#include "verification.hpp"

using namespace curvatura;
using namespace curvatura::verify;

namespace {

SuiteReport quick_run(SuiteId id, std::uint64_t seed = 20240611) {
  SuiteConfig cfg;
  cfg.id = id;
  cfg.seed = seed;
  cfg.apply_quick();
  return run_suite(cfg);
}

struct ThreadGuard {
  ~ThreadGuard() { set_thread_count(0); }
};

}  // namespace

TEST_CASE("suite names round-trip") {
  for (auto id : all_suites()) CHECK(parse_suite(suite_name(id)) == id);
  CHECK_FALSE(parse_suite("everything").has_value());
  CHECK(all_suites().size() == 5);
}

TEST_CASE("case generators are reproducible and stream-separated") {
  CaseRng a(1, 2), b(1, 2), c(1, 3), d(2, 2);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(CaseRng(1, 2).uniform() != c.uniform());
  CHECK(CaseRng(1, 2).uniform() != d.uniform());
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("pairwise sum and parallel_for") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (i + 1);
  const double s = pairwise_sum(v);
  double plain = 0.0;
  for (double x : v) plain += x;
  CHECK(s == doctest::Approx(plain).epsilon(1e-14));
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);

  ThreadGuard guard;
  set_thread_count(4);
  std::vector<int> hit(257, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);

  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 80) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

TEST_CASE("suite output does not depend on the thread count") {
  ThreadGuard guard;
  for (auto id : {SuiteId::Algebra, SuiteId::Pointwise, SuiteId::Asymptotic}) {
    set_thread_count(1);
    const auto one = report_csv_rows(quick_run(id));
    set_thread_count(4);
    const auto four = report_csv_rows(quick_run(id));
    CHECK(one == four);
  }
}

TEST_CASE("a different seed changes the random cases") {
  const auto a = report_csv_rows(quick_run(SuiteId::Algebra, 1));
  const auto b = report_csv_rows(quick_run(SuiteId::Algebra, 2));
  CHECK(a != b);
}

TEST_CASE("quick suites pass") {
  for (auto id : {SuiteId::Algebra, SuiteId::Pointwise, SuiteId::Inequality, SuiteId::Asymptotic}) {
    const auto rep = quick_run(id);
    CAPTURE(suite_name(id));
    CHECK(rep.pass);
    CHECK(rep.failures() == 0);
    CHECK_FALSE(rep.cases.empty());
  }
}

TEST_CASE("pointwise suite covers every model, field and order") {
  const auto rep = quick_run(SuiteId::Pointwise);
  std::set<std::string> seen;
  for (const auto& c : rep.cases)
    if (c.check == "reilly2") seen.insert(c.model + "/" + c.field + "/" + std::to_string(c.n));
  CHECK(seen.size() >= 3 * 4 * 4);
  for (const auto& c : rep.cases) CHECK(c.check != "coverage");
}

TEST_CASE("CSV rows use 17 significant digits regardless of locale") {
  SuiteReport rep;
  rep.id = SuiteId::Algebra;
  CaseRecord c;
  c.check = "x";
  c.family = "algebra";
  c.inputs = "n=2;k=1";
  c.measured = 0.1;
  c.expected = 1.0 / 3;
  c.pass = true;
  rep.cases.push_back(c);
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = previous ? previous : "C";
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  const auto row = report_csv_rows(rep);
  std::setlocale(LC_NUMERIC, saved.c_str());
  CHECK(row.find("0.10000000000000001") != std::string::npos);
  CHECK(row.find("0.33333333333333331") != std::string::npos);
  CHECK(row.find("0,1") == std::string::npos);
  CHECK(report_csv_header().rfind("suite,case,check,", 0) == 0);
}
