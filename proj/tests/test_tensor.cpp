#include "doctest.h"

#include "fatigue/tensor.hpp"

using fatigue::SymTensor3;

TEST_CASE("full-tensor access mirrors off-diagonal components") {
  const SymTensor3 t{1, 2, 3, 4, 5, 6};
  CHECK(t(0, 0) == 1);
  CHECK(t(1, 1) == 2);
  CHECK(t(2, 2) == 3);
  CHECK(t(1, 2) == 4);
  CHECK(t(2, 1) == 4);
  CHECK(t(0, 2) == 5);
  CHECK(t(2, 0) == 5);
  CHECK(t(0, 1) == 6);
  CHECK(t(1, 0) == 6);
}

TEST_CASE("contraction counts off-diagonal terms twice") {
  const SymTensor3 a{1, 2, 3, 4, 5, 6};
  const SymTensor3 b{2, 1, 0, 1, 1, 1};
  double full = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) full += a(i, j) * b(i, j);
  CHECK(fatigue::contract(a, b) == doctest::Approx(full));
}

TEST_CASE("deviator is trace free and hydrostatic part reconstructs") {
  const SymTensor3 a{3, -1, 7, 0.5, 0.2, -0.3};
  CHECK(a.deviator().trace() == doctest::Approx(0.0).epsilon(1e-15));
  const SymTensor3 back = a.deviator() + a.hydrostatic() * SymTensor3::identity();
  for (std::size_t i = 0; i < 6; ++i) CHECK(back[i] == doctest::Approx(a[i]));
}

TEST_CASE("von Mises of uniaxial and pure shear states") {
  CHECK(fatigue::von_mises(SymTensor3::uniaxial(100.0)) == doctest::Approx(100.0));
  CHECK(fatigue::von_mises(SymTensor3{0, 0, 0, 0, 0, 10.0}) == doctest::Approx(10.0 * std::sqrt(3.0)));
  CHECK(fatigue::von_mises(5.0 * SymTensor3::identity()) == doctest::Approx(0.0));
}
