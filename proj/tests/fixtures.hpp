#pragma once

#include <tuple>
#include <vector>

#include "tp/tropical_engine.hpp"

namespace fx {

using tp::frac;
using tp::IVec;
using tp::Q;

struct Mono {
  IVec m;
  Q lambda;
  Q re;
  Q im = 0;
};

inline tp::ProblemInstance build(int d, const std::vector<Mono>& ms) {
  std::vector<tp::CoefficientDatum> cs;
  for (auto& x : ms) cs.push_back({x.m, x.lambda, {x.re, x.im}});
  return tp::ProblemInstance::make(d, cs);
}

// Delta = conv{2e1, -e1, +-e2, +-e3}; star of 0 is the cube fan.
inline tp::ProblemInstance cube() {
  return build(2, {{{0, 0, 0}, 0, -1},
                   {{1, 0, 0}, 1, 1},
                   {{2, 0, 0}, 3, 1},
                   {{-1, 0, 0}, 1, 1},
                   {{0, 1, 0}, 1, 1},
                   {{0, -1, 0}, 1, 1},
                   {{0, 0, 1}, 1, 1},
                   {{0, 0, -1}, 1, 1}});
}

// Cubic curve: Delta = conv{(-1,-1),(2,-1),(-1,2)}, cone-over-boundary triangulation.
inline tp::ProblemInstance elliptic() {
  std::vector<Mono> ms{{{0, 0}, 0, -1}};
  for (IVec c : {IVec{-1, -1}, IVec{2, -1}, IVec{-1, 2}}) ms.push_back({c, 1, 1});
  for (IVec e : {IVec{0, -1}, IVec{1, -1}, IVec{-1, 0}, IVec{-1, 1}, IVec{0, 1}, IVec{1, 0}})
    ms.push_back({e, frac(2, 3), 1});
  return build(1, ms);
}

// Genus-2 curve: Delta = [0,3] x [0,2], lambda = x^2 + xy + y^2, real coefficients
// negative exactly at the two interior points.
inline tp::ProblemInstance genus2() {
  std::vector<Mono> ms;
  for (int x = 0; x <= 3; ++x)
    for (int y = 0; y <= 2; ++y) {
      bool inner = y == 1 && (x == 1 || x == 2);
      ms.push_back({{x, y}, Q(x * x + x * y + y * y), Q(inner ? -(1 + x) : 1 + x + 2 * y)});
    }
  return build(1, ms);
}

// d = 2 surface with |c_m| != 1 and one non-real coefficient.
inline tp::ProblemInstance bipyramid() {
  return build(2, {{{-1, 0, 0}, 1, 2},
                   {{0, 0, 0}, 0, -1},
                   {{1, 0, 0}, 1, frac(1, 2)},
                   {{2, 0, 0}, 3, 3},
                   {{3, 0, 0}, 6, 1},
                   {{0, 1, 0}, 1, 1, 1},
                   {{0, -1, 0}, 1, 2},
                   {{0, 0, 1}, 1, 1},
                   {{0, 0, -1}, 1, frac(1, 3)}});
}

inline std::vector<std::pair<const char*, tp::ProblemInstance>> corpus() {
  return {{"cube", cube()}, {"elliptic", elliptic()}, {"genus2", genus2()}, {"bipyramid", bipyramid()}};
}

}  // namespace fx
