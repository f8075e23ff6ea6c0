// Copyright 2026 The realite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <complex>
#include <numbers>
#include <random>

#include "realite/scoring.hpp"
#include "test_support.hpp"

namespace realite {
namespace {

using cd = std::complex<double>;
using Vec = std::vector<double>;

// Direct transcriptions of the five score functions.
double oracle_score(ModelKind m, const Vec& h, const Vec& r, const Vec& t, const Tensor& core,
                    int norm = 2) {
  switch (m) {
    case ModelKind::kTransE: {
      double s = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double d = h[i] + r[i] - t[i];
        s += norm == 1 ? std::abs(d) : d * d;
      }
      return norm == 1 ? -s : -std::sqrt(s);
    }
    case ModelKind::kDistMult: {
      double s = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * r[i] * t[i];
      return s;
    }
    case ModelKind::kComplEx: {
      const std::size_t n = h.size() / 2;
      cd s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += cd(h[i], h[n + i]) * cd(r[i], r[n + i]) * std::conj(cd(t[i], t[n + i]));
      }
      return s.real();
    }
    case ModelKind::kRotatE: {
      const std::size_t n = h.size() / 2;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += std::norm(cd(h[i], h[n + i]) * std::polar(1.0, r[i]) - cd(t[i], t[n + i]));
      }
      return -std::sqrt(s);
    }
    case ModelKind::kTuckER: {
      const std::size_t de = h.size(), dr = r.size();
      double s = 0.0;
      for (std::size_t i = 0; i < de; ++i)
        for (std::size_t j = 0; j < dr; ++j)
          for (std::size_t k = 0; k < de; ++k)
            s += core.data[(i * dr + j) * de + k] * h[i] * r[j] * t[k];
      return s;
    }
  }
  return 0.0;
}

struct Setup {
  ModelKind model;
  std::size_t de, dr;
};

constexpr Setup kSetups[] = {{ModelKind::kTransE, 4, 4},
                             {ModelKind::kDistMult, 4, 4},
                             {ModelKind::kComplEx, 6, 6},
                             {ModelKind::kRotatE, 6, 3},
                             {ModelKind::kTuckER, 4, 3}};

Vec random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Tensor random_core(std::mt19937_64& rng, const Setup& s) {
  if (s.model != ModelKind::kTuckER) return {};
  Tensor c({s.de, s.dr, s.de});
  c.data = random_vec(rng, c.size());
  return c;
}

TEST_CASE("score examples") {
  Scorer transe(ModelKind::kTransE, 2, 2);
  Tensor none;
  CHECK(transe.score(Vec{0, 0}, Vec{0, 0}, Vec{0, 0}, none) == 0.0);
  CHECK(transe.score(Vec{1, 0}, Vec{0, 1}, Vec{1, 1}, none) == 0.0);
  CHECK(transe.score(Vec{0, 0}, Vec{0, 0}, Vec{3, 4}, none) == -5.0);
  Scorer transe_l1(ModelKind::kTransE, 2, 2, 1);
  CHECK(transe_l1.score(Vec{0, 0}, Vec{0, 0}, Vec{3, -4}, none) == -7.0);
  Scorer distmult(ModelKind::kDistMult, 2, 2);
  CHECK(distmult.score(Vec{1, 2}, Vec{3, 4}, Vec{5, 6}, none) == 63.0);
}

TEST_CASE("scores match direct formulas") {
  std::mt19937_64 rng(2);
  for (const auto& s : kSetups) {
    CAPTURE(to_string(s.model));
    Scorer scorer(s.model, s.de, s.dr);
    auto core = random_core(rng, s);
    for (int rep = 0; rep < 10; ++rep) {
      auto h = random_vec(rng, s.de), r = random_vec(rng, s.dr), t = random_vec(rng, s.de);
      CHECK(scorer.score(h, r, t, core) ==
            doctest::Approx(oracle_score(s.model, h, r, t, core)).epsilon(1e-12));
    }
  }
  Scorer l1(ModelKind::kTransE, 4, 4, 1);
  auto h = random_vec(rng, 4), r = random_vec(rng, 4), t = random_vec(rng, 4);
  CHECK(l1.score(h, r, t, Tensor{}) ==
        doctest::Approx(oracle_score(ModelKind::kTransE, h, r, t, Tensor{}, 1)));
}

TEST_CASE("batched scores equal looped scores") {
  std::mt19937_64 rng(4);
  for (const auto& s : kSetups) {
    CAPTURE(to_string(s.model));
    Scorer scorer(s.model, s.de, s.dr);
    auto core = random_core(rng, s);
    Tensor ents({5, s.de});
    ents.data = random_vec(rng, ents.size());
    auto anchor = random_vec(rng, s.de), r = random_vec(rng, s.dr);
    Vec tails(5), heads(5);
    scorer.score_all_tails(anchor, r, ents, core, tails);
    scorer.score_all_heads(anchor, r, ents, core, heads);
    for (std::size_t e = 0; e < 5; ++e) {
      Vec row(ents.row(e), ents.row(e) + s.de);
      CHECK(std::abs(tails[e] - scorer.score(anchor, r, row, core)) <= 1e-9);
      CHECK(std::abs(heads[e] - scorer.score(row, r, anchor, core)) <= 1e-9);
    }
  }
}

TEST_CASE("distmult head and tail scoring are symmetric") {
  std::mt19937_64 rng(6);
  Scorer scorer(ModelKind::kDistMult, 3, 3);
  Tensor ents({4, 3});
  ents.data = random_vec(rng, 12);
  auto x = random_vec(rng, 3), r = random_vec(rng, 3);
  Vec a(4), b(4);
  scorer.score_all_tails(x, r, ents, Tensor{}, a);
  scorer.score_all_heads(x, r, ents, Tensor{}, b);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
}

TEST_CASE("transe candidate at h + r scores maximal") {
  Scorer scorer(ModelKind::kTransE, 2, 2);
  Tensor ents({3, 2});
  ents.data = {0.5, 0.5, 1.0, 2.0, -1.0, 0.0};
  Vec out(3);
  scorer.score_all_tails(Vec{0.5, 1.5}, Vec{0.5, 0.5}, ents, Tensor{}, out);
  CHECK(out[1] == 0.0);
  CHECK(out[1] > out[0]);
  CHECK(out[1] > out[2]);
}

TEST_CASE("rotation preserves modulus and is 2pi periodic") {
  std::mt19937_64 rng(8);
  Scorer scorer(ModelKind::kRotatE, 6, 3);
  auto h = random_vec(rng, 6), r = random_vec(rng, 3);
  // With t = 0 the score is minus the modulus of the rotated head.
  Vec zero(6, 0.0);
  CHECK(scorer.score(h, r, zero, Tensor{}) ==
        doctest::Approx(-testing::l2_norm(h)).epsilon(1e-13));
  auto t = random_vec(rng, 6);
  auto shifted = r;
  for (double& v : shifted) v += 2.0 * std::numbers::pi;
  CHECK(scorer.score(h, shifted, t, Tensor{}) ==
        doctest::Approx(scorer.score(h, r, t, Tensor{})).epsilon(1e-12));
}

TEST_CASE("score gradients match finite differences") {
  std::mt19937_64 rng(10);
  const double eps = 1e-6;
  auto close = [](double a, double n) {
    return std::abs(a - n) <= 1e-5 * std::max(1.0, std::abs(n));
  };
  for (const auto& s : kSetups) {
    for (int norm : {1, 2}) {
      if (norm == 1 && s.model != ModelKind::kTransE) continue;
      CAPTURE(to_string(s.model));
      Scorer scorer(s.model, s.de, s.dr, norm);
      auto core = random_core(rng, s);
      auto h = random_vec(rng, s.de), r = random_vec(rng, s.dr), t = random_vec(rng, s.de);
      Vec dh(s.de), dr(s.dr), dt(s.de);
      Tensor dcore = core.zeros_like();
      scorer.score_backward(h, r, t, core, 1.0, dh, dr, dt, &dcore);
      auto probe = [&](Vec* v, const Vec& g) {
        for (std::size_t i = 0; i < v->size(); ++i) {
          const double saved = (*v)[i];
          (*v)[i] = saved + eps;
          const double up = scorer.score(h, r, t, core);
          (*v)[i] = saved - eps;
          const double down = scorer.score(h, r, t, core);
          (*v)[i] = saved;
          CHECK(close(g[i], (up - down) / (2 * eps)));
        }
      };
      probe(&h, dh);
      probe(&r, dr);
      probe(&t, dt);
      probe(&core.data, dcore.data);
    }
  }
}

TEST_CASE("batched backward matches finite differences") {
  std::mt19937_64 rng(12);
  const double eps = 1e-6;
  for (const auto& s : kSetups) {
    CAPTURE(to_string(s.model));
    Scorer scorer(s.model, s.de, s.dr);
    auto core = random_core(rng, s);
    Tensor ents({4, s.de});
    ents.data = random_vec(rng, ents.size());
    auto anchor = random_vec(rng, s.de), r = random_vec(rng, s.dr);
    Vec w = random_vec(rng, 4);
    for (bool tails : {true, false}) {
      auto objective = [&]() {
        Vec out(4);
        if (tails) {
          scorer.score_all_tails(anchor, r, ents, core, out);
        } else {
          scorer.score_all_heads(anchor, r, ents, core, out);
        }
        double v = 0.0;
        for (std::size_t i = 0; i < 4; ++i) v += w[i] * out[i];
        return v;
      };
      Vec da(s.de), dr(s.dr);
      Tensor de = ents.zeros_like(), dc = core.zeros_like();
      if (tails) {
        scorer.backward_all_tails(anchor, r, ents, core, w, da, dr, &de, &dc);
      } else {
        scorer.backward_all_heads(anchor, r, ents, core, w, da, dr, &de, &dc);
      }
      auto probe = [&](std::vector<double>* v, const std::vector<double>& g) {
        for (std::size_t i = 0; i < v->size(); ++i) {
          const double saved = (*v)[i];
          (*v)[i] = saved + eps;
          const double up = objective();
          (*v)[i] = saved - eps;
          const double down = objective();
          (*v)[i] = saved;
          const double n = (up - down) / (2 * eps);
          CHECK(std::abs(g[i] - n) <= 1e-5 * std::max(1.0, std::abs(n)));
        }
      };
      probe(&anchor, da);
      probe(&r, dr);
      probe(&ents.data, de.data);
      probe(&core.data, dc.data);
    }
  }
}

TEST_CASE("dimension validation") {
  CHECK_THROWS_AS(Scorer(ModelKind::kComplEx, 5, 5), ShapeError);
  CHECK_THROWS_AS(Scorer(ModelKind::kRotatE, 6, 6), ShapeError);
  CHECK_THROWS_AS(Scorer(ModelKind::kDistMult, 4, 3), ShapeError);
  CHECK_NOTHROW(Scorer(ModelKind::kTuckER, 4, 7));
  CHECK_THROWS_AS(Scorer(ModelKind::kTransE, 4, 4, 3), ValidationError);
  Scorer s(ModelKind::kDistMult, 3, 3);
  CHECK_THROWS_AS(s.score(Vec{1, 2}, Vec{1, 2, 3}, Vec{1, 2, 3}, Tensor{}), ShapeError);
  for (auto m : {ModelKind::kTransE, ModelKind::kDistMult, ModelKind::kComplEx,
                 ModelKind::kRotatE, ModelKind::kTuckER}) {
    CHECK(parse_model(to_string(m)) == m);
  }
}

}  // namespace
}  // namespace realite
