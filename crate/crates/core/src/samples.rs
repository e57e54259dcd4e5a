//! Small named models used by tests, benches and the shipped model files,
//! plus seeded generators of random valid models.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cdga::{tensor, BasicModel, BasicModelBuilder};
use crate::gmodel::GModel;
use crate::lie::{change_basis, direct_sum, validate, LieAlgebraData};
use crate::linalg::{kernel, q, Rational, RationalMatrix};

fn brackets(dim: usize, entries: &[(usize, usize, usize, i64)]) -> LieAlgebraData {
    let entries: Vec<_> = entries
        .iter()
        .map(|&(i, j, k, v)| (i - 1, j - 1, k - 1, q(v)))
        .collect();
    LieAlgebraData::from_brackets(dim, &entries).expect("sample algebra")
}

/// `[e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2`.
pub fn su2() -> LieAlgebraData {
    brackets(3, &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)])
}

/// The three-dimensional Heisenberg algebra `[e1,e2] = e3`.
pub fn heisenberg() -> LieAlgebraData {
    brackets(3, &[(1, 2, 3, 1)])
}

/// The non-abelian two-dimensional algebra `[e1,e2] = e2`.
pub fn affine_line() -> LieAlgebraData {
    brackets(2, &[(1, 2, 2, 1)])
}

/// `sl(2)`: `[h,e] = 2e, [h,f] = -2f, [e,f] = h`.
pub fn sl2() -> LieAlgebraData {
    brackets(3, &[(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)])
}

/// Euclidean algebra `e(2)`: `[e1,e2] = e3, [e1,e3] = -e2`.
pub fn euclidean_plane() -> LieAlgebraData {
    brackets(3, &[(1, 2, 3, 1), (1, 3, 2, -1)])
}

/// Four-dimensional filiform algebra `[e1,e2] = e3, [e1,e3] = e4`.
pub fn filiform4() -> LieAlgebraData {
    brackets(4, &[(1, 2, 3, 1), (1, 3, 4, 1)])
}

fn model(names: &[(&str, usize)]) -> BasicModelBuilder {
    names
        .iter()
        .fold(BasicModelBuilder::new(), |b, &(n, d)| b.generator(n, d))
        .unit("one")
}

pub fn point() -> BasicModel {
    model(&[("one", 0)]).build().expect("point model")
}

/// `{1, t}` with `deg t = 1`.
pub fn circle() -> BasicModel {
    model(&[("one", 0), ("t", 1)]).build().expect("circle model")
}

/// `{1, v}` with `deg v = 2`, `v² = 0`.
pub fn sphere2() -> BasicModel {
    model(&[("one", 0), ("v", 2)]).build().expect("sphere model")
}

/// `{1, a, b, ab}` with `ab = a·b = -b·a`.
pub fn torus2() -> BasicModel {
    model(&[("one", 0), ("a", 1), ("b", 1), ("ab", 2)])
        .product_by_name("a", "b", &[("ab", 1)])
        .and_then(|b| b.build())
        .expect("torus model")
}

/// `{1, w}` with `deg w = 3`.
pub fn sphere3() -> BasicModel {
    model(&[("one", 0), ("w", 3)]).build().expect("sphere model")
}

/// `{1, t, v}` with `deg t = 1`, `deg v = 2` and all products zero: a valid
/// model with `b_1 = 1`, used to exercise precondition failures.
pub fn sphere2_with_loop() -> BasicModel {
    model(&[("one", 0), ("t", 1), ("v", 2)]).build().expect("model")
}

/// `{1, u, w}` with `deg u = 2`, `du = w`: curvature `u` is not closed.
pub fn nonclosed_basic() -> BasicModel {
    model(&[("one", 0), ("u", 2), ("w", 3)])
        .differential_by_name("u", &[("w", 1)])
        .and_then(|b| b.build())
        .expect("model")
}

fn zero_curvature(s: usize, b: &BasicModel) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); b.dim()]; s]
}

fn flat(g: LieAlgebraData, b: BasicModel) -> GModel {
    let e = zero_curvature(g.dim(), &b);
    GModel::new(g, b, e).expect("flat model")
}

/// Circle bundle over `S²` with Euler class `v` (the Hopf fibration).
pub fn hopf() -> GModel {
    hopf_scaled(1)
}

/// The Hopf model with curvature `c·v`.
pub fn hopf_scaled(c: i64) -> GModel {
    let b = sphere2();
    let mut e = vec![Rational::zero(); b.dim()];
    e[b.index_of("v").expect("v")] = q(c);
    GModel::new(LieAlgebraData::abelian(1), b, vec![e]).expect("hopf model")
}

/// Circle bundle over `T²` with curvature `ab`.
pub fn heisenberg_nilmanifold() -> GModel {
    let b = torus2();
    let mut e = vec![Rational::zero(); b.dim()];
    e[b.index_of("ab").expect("ab")] = q(1);
    GModel::new(LieAlgebraData::abelian(1), b, vec![e]).expect("nilmanifold model")
}

pub fn torus2_model() -> GModel {
    flat(LieAlgebraData::abelian(1), circle())
}

pub fn su2_point() -> GModel {
    flat(su2(), point())
}

pub fn su2_over_circle() -> GModel {
    flat(su2(), circle())
}

pub fn su2_over_s2() -> GModel {
    flat(su2(), sphere2())
}

pub fn su2_over_s3() -> GModel {
    flat(su2(), sphere3())
}

pub fn h3_over_circle() -> GModel {
    flat(heisenberg(), circle())
}

pub fn abelian_over_s3() -> GModel {
    flat(LieAlgebraData::abelian(1), sphere3())
}

/// The shipped example models, by file stem.
pub fn shipped() -> Vec<(&'static str, GModel)> {
    vec![
        ("hopf", hopf()),
        ("heisenberg-nilmanifold", heisenberg_nilmanifold()),
        ("torus2", torus2_model()),
        ("su2-point", su2_point()),
        ("su2-over-circle", su2_over_circle()),
        ("su2-over-s2", su2_over_s2()),
        ("su2-over-s3", su2_over_s3()),
        ("h3-over-circle", h3_over_circle()),
    ]
}

/// A random invertible integer matrix with small entries.
fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> RationalMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2))).collect())
            .collect();
        let m = RationalMatrix::from_rows(rows, n);
        if crate::linalg::rank(&m) == n {
            return m;
        }
    }
}

/// A random valid Lie algebra of dimension at most `max_dim` (≤ 4): a
/// direct sum drawn from a small catalogue, written in a random basis.
pub fn random_lie_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> LieAlgebraData {
    assert!(max_dim <= 4, "catalogue covers dimension ≤ 4");
    let catalogue: Vec<LieAlgebraData> = vec![
        LieAlgebraData::abelian(1),
        affine_line(),
        su2(),
        heisenberg(),
        sl2(),
        euclidean_plane(),
        filiform4(),
    ];
    let mut g = LieAlgebraData::abelian(0);
    loop {
        let fits: Vec<&LieAlgebraData> = catalogue.iter().filter(|h| g.dim() + h.dim() <= max_dim).collect();
        if fits.is_empty() || (g.dim() > 0 && rng.gen_bool(0.4)) {
            break;
        }
        g = direct_sum(&g, fits.choose(rng).expect("nonempty"));
    }
    let p = random_invertible(rng, g.dim());
    let out = change_basis(&g, &p).expect("invertible");
    debug_assert!(validate(&out).passed());
    out
}

/// A random basic model with zero differential, from products of circles
/// and spheres, of total dimension at most `max_dim`.
pub fn random_basic_model<R: Rng>(rng: &mut R, max_dim: usize) -> BasicModel {
    let factors = [circle(), sphere2(), sphere3()];
    let mut b = point();
    loop {
        let f = factors.choose(rng).expect("nonempty");
        if b.dim() * f.dim() > max_dim || rng.gen_bool(0.35) {
            break;
        }
        b = tensor(&b, f);
    }
    b
}

/// Curvature `e` with `Σ_a c^i_{ab} e_a = 0` for all `i, b` and `d e_a = 0`,
/// which is exactly what `d∘d = 0` requires of it. Random within that space.
pub fn random_closed_curvature<R: Rng>(rng: &mut R, g: &LieAlgebraData, b: &BasicModel) -> Vec<Vec<Rational>> {
    let s = g.dim();
    let mut constraints = Vec::new();
    for i in 0..s {
        for bb in 0..s {
            constraints.push((0..s).map(|a| g.c(i, a, bb).clone()).collect());
        }
    }
    let allowed = kernel(&RationalMatrix::from_rows(constraints, s));
    let closed_2 = kernel(&b.complex().differential(2));
    let degree2 = b.basis_of_degree(2);
    let mut e = zero_curvature(s, b);
    for beta in closed_2.vectors() {
        for z in allowed.vectors() {
            let c = q(rng.gen_range(-2..=2));
            if c.is_zero() {
                continue;
            }
            for (a, za) in z.iter().enumerate() {
                for (slot, x) in degree2.iter().zip(beta) {
                    e[a][*slot] += &c * za * x;
                }
            }
        }
    }
    e
}

/// A random valid [`GModel`]: random algebra, random `d = 0` basic model and
/// random closed curvature.
pub fn random_gmodel<R: Rng>(rng: &mut R, max_lie_dim: usize, max_basic_dim: usize) -> GModel {
    let g = random_lie_algebra(rng, max_lie_dim);
    let b = random_basic_model(rng, max_basic_dim);
    let e = random_closed_curvature(rng, &g, &b);
    GModel::new(g, b, e).expect("random model satisfies d∘d = 0")
}
