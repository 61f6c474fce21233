// Copyright 2026 The KPG Lab Authors. All rights reserved.
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

#include "kpg/joint_params.h"

#include "doctest.h"
#include "kpg/errors.h"

namespace kpg {
namespace {

TEST_CASE("layout offsets and complements") {
  const Layout layout({2, 1, 3});
  CHECK(layout.num_agents() == 3);
  CHECK(layout.total_dim() == 6);
  CHECK(layout.offset(0) == 0);
  CHECK(layout.offset(1) == 2);
  CHECK(layout.offset(2) == 3);
  CHECK(layout.complement_dim(1) == 5);
  CHECK(layout.complement_indices(0) == std::vector<int>{2, 3, 4, 5});
  CHECK(layout.complement_indices(1) == std::vector<int>{0, 1, 3, 4, 5});
  CHECK(layout.complement_indices(2) == std::vector<int>{0, 1, 2});
}

TEST_CASE("layout rejects degenerate shapes") {
  CHECK_THROWS_AS(Layout({3}), InputError);
  CHECK_THROWS_AS(Layout({1, 0}), InputError);
  CHECK_THROWS_AS(Layout(std::vector<int>{}), InputError);
}

TEST_CASE("pack and unpack round trip") {
  const Layout layout({1, 2});
  Vector a(1), b(2);
  a << 1.5;
  b << -2.0, 3.0;
  const Vector flat = pack(layout, {a, b});
  REQUIRE(flat.size() == 3);
  CHECK(flat[0] == 1.5);
  CHECK(flat[2] == 3.0);
  const std::vector<Vector> parts = unpack(layout, flat);
  CHECK(parts[0] == a);
  CHECK(parts[1] == b);
  CHECK_THROWS_AS(pack(layout, {a}), InputError);
  CHECK_THROWS_AS(pack(layout, {b, a}), InputError);
  CHECK_THROWS_AS(unpack(layout, Vector::Zero(4)), InputError);
}

TEST_CASE("complement and splice") {
  const Layout layout({1, 1, 1});
  Vector own(3), others(3);
  own << 1, 2, 3;
  others << 10, 20, 30;
  const Vector c = complement(layout, 1, own);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 1);
  CHECK(c[1] == 3);
  const Vector s = splice(layout, 1, own, others);
  CHECK(s[0] == 10);
  CHECK(s[1] == 2);
  CHECK(s[2] == 30);
}

TEST_CASE("joint params segments") {
  JointParams theta = JointParams::from_segments(
      Layout({2, 1}), {Vector::Constant(2, 1.0), Vector::Constant(1, 4.0)});
  CHECK(theta.segment(1)[0] == 4.0);
  theta.segment(0)[1] = 7.0;
  CHECK(theta.flat()[1] == 7.0);
  CHECK_THROWS_AS(JointParams(Layout({1, 1}), Vector::Zero(3)), InputError);
}

}  // namespace
}  // namespace kpg
