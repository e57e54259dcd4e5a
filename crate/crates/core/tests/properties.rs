use lieseq::cdga::{basic_cohomology, tensor};
use lieseq::complex::convolve;
use lieseq::gmodel::as_filtered;
use lieseq::lie::{abelianization_dim, lie_cohomology, orthonormalize, InnerProductData};
use lieseq::linalg::{
    image, intersect, kernel, preimage, q, quotient_basis, quotient_dim, rank, sum, RationalMatrix, Subspace,
};
use lieseq::samples;
use lieseq::spectral::{check_convergence, run};
use lieseq::GModel;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |xs| {
        RationalMatrix::from_rows(xs.chunks(cols.max(1)).take(rows).map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    })
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    (0..=n).prop_flat_map(move |k| matrix(k, n).prop_map(move |m| Subspace::span(n, m.row_vectors())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grassmann(a in subspace(5), b in subspace(5)) {
        let s = sum(&a, &b).unwrap();
        let i = intersect(&a, &b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
    }

    #[test]
    fn rank_nullity(m in matrix(4, 6)) {
        prop_assert_eq!(rank(&m) + kernel(&m).dim(), 6);
        prop_assert_eq!(image(&m).dim(), rank(&m));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn preimage_of_image_is_everything(m in matrix(3, 4)) {
        prop_assert_eq!(preimage(&m, &image(&m)).unwrap(), Subspace::full(4));
        prop_assert_eq!(preimage(&m, &Subspace::zero(3)).unwrap(), kernel(&m));
    }

    #[test]
    fn quotient_basis_size(a in subspace(5), b in subspace(5)) {
        let inner = intersect(&a, &b).unwrap();
        let reps = quotient_basis(&a, &inner).unwrap();
        prop_assert_eq!(reps.len(), quotient_dim(&a, &inner).unwrap());
        let all = Subspace::span(5, inner.vectors().iter().cloned().chain(reps).collect());
        prop_assert_eq!(all, a);
    }

    #[test]
    fn random_algebras(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = samples::random_lie_algebra(&mut rng, 4);
        let b = lie_cohomology(&g).unwrap();
        prop_assert_eq!(b[0], 1);
        prop_assert_eq!(b[1], abelianization_dim(&g).unwrap());
        // Euler characteristic of Λ(g*) vanishes in positive dimension
        let chi: i64 = b.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(chi, 0);
    }

    #[test]
    fn orthonormalizing_keeps_cohomology(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = samples::random_lie_algebra(&mut rng, 3);
        let o = orthonormalize(&g, &InnerProductData::identity(g.dim())).unwrap();
        prop_assert_eq!(lie_cohomology(&o.algebra).unwrap(), lie_cohomology(&g).unwrap());
    }

    #[test]
    fn kunneth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = samples::random_basic_model(&mut rng, 4);
        let b = samples::random_basic_model(&mut rng, 4);
        let t = tensor(&a, &b);
        prop_assert_eq!(
            basic_cohomology(&t).unwrap(),
            convolve(&basic_cohomology(&a).unwrap(), &basic_cohomology(&b).unwrap())
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_models_converge(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = samples::random_gmodel(&mut rng, 3, 4);
        let f = as_filtered(&m).unwrap();
        let ss = run(&f).unwrap();
        prop_assert!(check_convergence(&ss, m.complex()).unwrap().passed());
        // each page is the cohomology of the previous one
        for w in ss.pages.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            for (&(p, qq), e) in &next.entries {
                let (pi, qi, r) = (p as isize, qq as isize, prev.r as isize);
                let out = prev.rank_from(pi, qi);
                let inc = prev.rank_from(pi - r, qi + r - 1);
                prop_assert_eq!(e.dim, prev.dim(p, qq) - out - inc);
            }
        }
        // d_r ∘ d_r = 0
        for page in &ss.pages {
            for d in page.differentials.values() {
                if let Some(next) = page.differentials.get(&d.target) {
                    prop_assert!(next.matrix.mul(&d.matrix).is_zero());
                }
            }
        }
    }

    #[test]
    fn rescaling_curvature_keeps_ranks(seed in any::<u64>(), c in prop::sample::select(vec![-3i64, -1, 2, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = samples::random_gmodel(&mut rng, 3, 4);
        let scaled: Vec<Vec<_>> = m.curvature().iter().map(|e| e.iter().map(|x| x * q(c)).collect()).collect();
        let m2 = GModel::new(m.algebra().clone(), m.basic().clone(), scaled).unwrap();
        let a = run(&as_filtered(&m).unwrap()).unwrap();
        let b = run(&as_filtered(&m2).unwrap()).unwrap();
        prop_assert_eq!(a.stabilization, b.stabilization);
        for (x, y) in a.pages.iter().zip(&b.pages) {
            prop_assert_eq!(x.nonzero(), y.nonzero());
            let rx: Vec<usize> = x.differentials.values().map(|d| d.rank).collect();
            let ry: Vec<usize> = y.differentials.values().map(|d| d.rank).collect();
            prop_assert_eq!(rx, ry);
        }
    }
}
