#include <doctest.h>

#include <algorithm>

#include <curvjac/classify.hpp>
#include <curvjac/generate.hpp>

#include "support.hpp"

using namespace curvjac;

namespace {

std::vector<int> block_dims(const Decomposition& d) {
  std::vector<int> out;
  for (const auto& b : d.blocks) out.push_back(b.dim());
  std::sort(out.begin(), out.end());
  return out;
}

GeneratorSpec constant_spec(int p, int q, double kappa) {
  GeneratorSpec s;
  s.kind = GeneratorKind::Constant;
  s.p = p;
  s.q = q;
  s.kappa = kappa;
  return s;
}

GeneratorSpec flat_spec(int p, int q) {
  GeneratorSpec s;
  s.kind = GeneratorKind::Flat;
  s.p = p;
  s.q = q;
  return s;
}

}  // namespace

TEST_CASE("gen_constant") {
  SUBCASE("unit sphere, dim 4") {
    const Model m = gen_constant(InnerProduct(4, 0), 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) CHECK(m.curvature()(i, j, j, i) == 1.0);
  }
  SUBCASE("negative curvature, dim 3") {
    const Model m = gen_constant(InnerProduct(3, 0), -2.0);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Subspace pi = sample_grassmannian(m.metric(), 2, 0, s);
      const auto y = pi.frame();
      CHECK(oracle::sectional(m, oracle::to_vec(y.column(0)), oracle::to_vec(y.column(1))) ==
            doctest::Approx(-2.0));
    }
  }
  SUBCASE("Lorentzian signature") {
    const Model m = gen_constant(InnerProduct(1, 3), 1.0);
    CHECK(validate_curvature(m.curvature()).pass);
    CHECK(support::diff(oracle::diag({3, 3, 3, 3}), ricci_operator(m)) < 1e-14);
    CHECK(support::diff(oracle::ricci_operator(m), ricci_operator(m)) < 1e-14);
  }
  SUBCASE("matches the defining formula componentwise") {
    const InnerProduct g(2, 3);
    const Model m = gen_constant(g, 0.75);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k)
          for (int l = 0; l < 5; ++l)
            CHECK(m.curvature()(i, j, k, l) == doctest::Approx(oracle::constant_component(g, 0.75, i, j, k, l)));
  }
}

TEST_CASE("gen_r_phi") {
  SUBCASE("phi = g gives constant curvature 1") {
    for (const auto& g : {InnerProduct(4, 0), InnerProduct(2, 2), InnerProduct(1, 4)}) {
      const Model a = gen_r_phi(g, g.gram());
      const Model b = gen_constant(g, 1.0);
      for (std::size_t n = 0; n < a.curvature().size(); ++n)
        CHECK(std::abs(a.curvature().components()[n] - b.curvature().components()[n]) <= 1e-14);
    }
  }
  SUBCASE("phi = diag(1,2,3,4)") {
    const Model m = support::r_phi_diag1234();
    // tr(phi) phi - phi^2 = 10 diag(1,2,3,4) - diag(1,4,9,16).
    CHECK(support::diff(oracle::diag({9, 16, 21, 24}), ricci_operator(m)) < 1e-13);
    CHECK(support::diff(oracle::ricci_operator(m), ricci_operator(m)) < 1e-13);
    CHECK_FALSE(einstein_check(m).lambda);
  }
  SUBCASE("phi = 0") { CHECK(is_flat(gen_r_phi(InnerProduct(3, 0), Matrix::Zero(3, 3))).flat); }
  SUBCASE("non-symmetric phi") {
    Matrix phi = Matrix::Identity(3, 3);
    phi(0, 1) = 1.0;
    try {
      gen_r_phi(InnerProduct(3, 0), phi);
      FAIL("expected NotSymmetric");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::NotSymmetric);
    }
  }
}

TEST_CASE("gen_random_acurv") {
  const InnerProduct g(4, 0);
  const Model one = gen_random_acurv(g, 1, 1);
  CHECK(validate_curvature(one.curvature()).worst.residual <= 1e-12 * (1 + one.curvature().max_abs()));
  CHECK_FALSE(einstein_check(gen_random_acurv(g, 3, 2)).lambda);

  const Model a = gen_random_acurv(InnerProduct(2, 3), 2, 99);
  const Model b = gen_random_acurv(InnerProduct(2, 3), 2, 99);
  CHECK(std::equal(a.curvature().components().begin(), a.curvature().components().end(),
                   b.curvature().components().begin()));
  const Model c = gen_random_acurv(InnerProduct(2, 3), 2, 100);
  CHECK_FALSE(std::equal(a.curvature().components().begin(), a.curvature().components().end(),
                         c.curvature().components().begin()));
}

TEST_CASE("gen_complex_space_form") {
  const Model m4 = gen_complex_space_form(4.0);
  CHECK(oracle::sectional(m4, oracle::unit(4, 0), oracle::unit(4, 1)) == doctest::Approx(4.0));
  CHECK(oracle::sectional(m4, oracle::unit(4, 0), oracle::unit(4, 2)) == doctest::Approx(1.0));

  const Model m1 = gen_complex_space_form(1.0);
  const auto ein = einstein_check(m1);
  REQUIRE(ein.lambda);
  // Oracle: trace of the contraction, rho = (3/2) kappa I in real dimension 4.
  const auto rho = oracle::ricci_operator(m1);
  CHECK(*ein.lambda == doctest::Approx(rho[0][0]));
  CHECK(*ein.lambda == doctest::Approx(1.5));
  CHECK_FALSE(constant_curvature_check(m1).kappa);
  CHECK(decompose(m1).blocks.size() == 1);

  CHECK(is_flat(gen_complex_space_form(0.0)).flat);
}

TEST_CASE("gen_direct_sum") {
  const std::vector<GeneratorSpec> two{constant_spec(2, 0, 1.0), constant_spec(2, 0, 2.0)};
  SUBCASE("unrotated is the canonical product") {
    const GeneratedModel gm = gen_direct_sum(two, false, 0);
    const Model p = support::product_model();
    CHECK(std::equal(gm.model.curvature().components().begin(), gm.model.curvature().components().end(),
                     p.curvature().components().begin()));
    REQUIRE(gm.blocks.size() == 2);
    CHECK(gm.blocks[0].einstein == doctest::Approx(1.0));
    CHECK(gm.blocks[1].einstein == doctest::Approx(2.0));
  }
  SUBCASE("rotation keeps the Ricci spectrum") {
    const GeneratedModel gm = gen_direct_sum(two, true, 9);
    const auto c = eigenvalue_clusters(ricci_operator(gm.model));
    REQUIRE(c.size() == 2);
    CHECK(c[0].value.real() == doctest::Approx(1.0));
    CHECK(c[0].multiplicity == 2);
    CHECK(c[1].value.real() == doctest::Approx(2.0));
    CHECK(c[1].multiplicity == 2);
    // The recorded block bases are invariant subspaces of rho.
    const Matrix rho = ricci_operator(gm.model).matrix();
    for (const auto& b : gm.blocks) {
      const Matrix img = rho * b.basis;
      CHECK((img - *b.einstein * b.basis).norm() < 1e-10);
    }
  }
  SUBCASE("flat + flat + constant recovers dims") {
    const std::vector<GeneratorSpec> three{flat_spec(1, 0), flat_spec(1, 0), constant_spec(2, 0, 1.0)};
    const GeneratedModel gm = gen_direct_sum(three, true, 4);
    CHECK(block_dims(decompose(gm.model)) == std::vector<int>{1, 1, 2});
  }
}

TEST_CASE("special phi families") {
  SUBCASE("nilpotent shift") {
    const InnerProduct g(1, 2);
    const Matrix phi = phi_nilpotent_shift(g, 1.0);
    const Model m = gen_r_phi(g, phi);
    const Matrix rho = ricci_operator(m).matrix();
    const Matrix n = rho - 2.0 * Matrix::Identity(3, 3);
    CHECK(n.norm() > 1e-3);
    CHECK((n * n).norm() < 1e-12);
    CHECK(pseudo_einstein_check(ricci_operator(m)).pseudo_einstein);
  }
  SUBCASE("complex pair") {
    const Model m = gen_r_phi(InnerProduct(2, 2), phi_complex_pair(1.0, 0.5));
    const auto c = eigenvalue_clusters(ricci_operator(m));
    REQUIRE(c.size() == 2);
    CHECK(c[0].value.real() == doctest::Approx(3.25));
    CHECK(std::abs(c[0].value.imag()) == doctest::Approx(1.0));
    CHECK(c[0].multiplicity == 2);
  }
}

TEST_CASE("property: every generator output is valid and deterministic") {
  std::vector<GeneratorSpec> specs;
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{4, 0}, {1, 3}, {2, 2}, {3, 2}}) {
    specs.push_back(flat_spec(p, q));
    specs.push_back(constant_spec(p, q, -1.25));
    GeneratorSpec r;
    r.kind = GeneratorKind::RandomAcurv;
    r.p = p;
    r.q = q;
    r.terms = 3;
    r.seed = 5;
    specs.push_back(r);
    GeneratorSpec ds;
    ds.kind = GeneratorKind::DirectSum;
    ds.p = p;
    ds.q = q;
    ds.rotate = true;
    ds.seed = 6;
    ds.children = {constant_spec(p - 1, q, 1.0), flat_spec(1, 0)};
    specs.push_back(ds);
  }
  GeneratorSpec csf;
  csf.kind = GeneratorKind::ComplexSpaceForm;
  csf.p = 4;
  csf.kappa = 2.0;
  specs.push_back(csf);

  for (const auto& s : specs) {
    CAPTURE(to_string(s.kind));
    const GeneratedModel a = generate(s);
    const GeneratedModel b = generate(s);
    const auto& r = a.model.curvature();
    CHECK(validate_curvature(r).worst.residual <= 1e-12 * (1 + r.max_abs()));
    CHECK(oracle::symmetry_residual(r) <= 1e-12 * (1 + r.max_abs()));
    CHECK(std::equal(r.components().begin(), r.components().end(), b.model.curvature().components().begin()));
  }

  // Rotation does not change the classification verdicts.
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::vector<GeneratorSpec> kids{constant_spec(2, 0, 1.0 + static_cast<double>(seed)),
                                          constant_spec(3, 0, 0.5)};
    const Model flat_layout = gen_direct_sum(kids, false, seed).model;
    const Model rotated = gen_direct_sum(kids, true, seed).model;
    CHECK(einstein_check(flat_layout).lambda.has_value() == einstein_check(rotated).lambda.has_value());
    CHECK(pseudo_einstein_check(ricci_operator(flat_layout)).pseudo_einstein ==
          pseudo_einstein_check(ricci_operator(rotated)).pseudo_einstein);
    CHECK(puffini_videv_check(flat_layout).puffini_videv == puffini_videv_check(rotated).puffini_videv);
  }
}

TEST_CASE("generator kind names") {
  for (auto k : {GeneratorKind::Flat, GeneratorKind::Constant, GeneratorKind::RPhi, GeneratorKind::RandomAcurv,
                 GeneratorKind::ComplexSpaceForm, GeneratorKind::DirectSum}) {
    CHECK(generator_kind_from_string(to_string(k)) == k);
  }
  CHECK_FALSE(generator_kind_from_string("sphere"));
}
