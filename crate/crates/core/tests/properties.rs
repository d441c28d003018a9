//! Property tests. Each property is checked against an oracle written here,
//! independent of the library routine under test.

use std::sync::Arc;

use cohomolab::complexes::{
    cohomology_dims, sniper_demo, sum_homotopies, verify_chain_isomorphism, ChainMap, Direction, NormedComplex,
};
use cohomolab::corpus::Corpus;
use cohomolab::groups::{
    centralizer, conjugacy_classes, conjugation_action, is_commutative_transitive, orbit_decompose, GAction, Group,
    Subgroup, Transversal,
};
use cohomolab::hochschild::{
    augmentation_bimodule, function_dual_of_action, group_algebra_bimodule, hochschild_cohomology, hochschild_complex,
    left_action_bimodule, Bimodule,
};
use cohomolab::linalg::ExactMatrix;
use cohomolab::scalars::{Field, PrimeField, Rationals};
use cohomolab::shapiro::{brute_force_oracle, disintegrate};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const CAP: u128 = 50_000_000;

/// Dense Gaussian elimination, the reference for every rank computation.
fn oracle_rank<F: Field>(f: &F, mut m: Vec<Vec<F::Elem>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !f.is_zero(&m[r][c])) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(&m[rank][c]).unwrap();
        for r in 0..m.len() {
            if r != rank && !f.is_zero(&m[r][c]) {
                let factor = f.mul(&m[r][c], &inv);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot).skip(c) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

fn int_matrix(rows: usize, cols: usize, big: bool) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let entry = if big {
        prop_oneof![3 => Just(0i64), 1 => -(1i64 << 40)..(1i64 << 40)].boxed()
    } else {
        prop_oneof![3 => Just(0i64), 2 => -3i64..=3].boxed()
    };
    proptest::collection::vec(proptest::collection::vec(entry, cols), rows)
}

fn shaped(big: bool) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..14, 1usize..14).prop_flat_map(move |(r, c)| int_matrix(r, c, big))
}

fn rational_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    let entry = (-9i64..=9, 1i64..=5).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)));
    proptest::collection::vec(proptest::collection::vec(entry, cols), rows)
}

fn check_rank<F: Field>(f: &F, m: &[Vec<i64>]) {
    let mat = ExactMatrix::from_i64(f, m).unwrap();
    let dense: Vec<Vec<F::Elem>> = m.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
    let expected = oracle_rank(f, dense);
    assert_eq!(mat.rank(), expected);
    assert_eq!(mat.transpose().rank(), expected);
    let ker = mat.kernel_basis();
    assert_eq!(ker.len() + expected, mat.cols());
    for v in &ker {
        assert!(mat.mul_vec(v).unwrap().iter().all(|x| f.is_zero(x)));
    }
}

fn small_groups() -> Vec<Arc<Group>> {
    let c = Corpus::embedded();
    ["trivial", "C2", "C3", "C5", "C6", "S3", "D4", "Q8"].iter().map(|n| c.group(n).unwrap()).collect()
}

fn cyclic_subgroup(g: &Arc<Group>, h: usize) -> Subgroup {
    let mut elems = vec![g.identity()];
    let mut x = h;
    while x != g.identity() {
        elems.push(x);
        x = g.mul(x, h);
    }
    Subgroup::new(g, elems).unwrap()
}

/// Disjoint union of the actions on left cosets of the cyclic subgroups
/// generated by `gens`.
fn coset_action(g: &Arc<Group>, gens: &[usize]) -> GAction {
    let mut blocks: Vec<Vec<Vec<usize>>> = Vec::new();
    for &h in gens {
        let sub = cyclic_subgroup(g, h);
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for x in g.elements() {
            let mut c: Vec<usize> = sub.elements().iter().map(|&y| g.mul(x, y)).collect();
            c.sort_unstable();
            if !cosets.contains(&c) {
                cosets.push(c);
            }
        }
        blocks.push(cosets);
    }
    let mut table = vec![Vec::new(); g.order()];
    let mut offset = 0;
    for cosets in &blocks {
        for (gi, row) in table.iter_mut().enumerate() {
            for c in cosets {
                let mut image: Vec<usize> = c.iter().map(|&y| g.mul(gi, y)).collect();
                image.sort_unstable();
                row.push(offset + cosets.iter().position(|d| *d == image).unwrap());
            }
        }
        offset += cosets.len();
    }
    GAction::new(g, offset, table).unwrap()
}

fn group_and_elements(max_order: usize) -> impl Strategy<Value = (Arc<Group>, Vec<usize>)> {
    let groups: Vec<Arc<Group>> = small_groups().into_iter().filter(|g| g.order() <= max_order).collect();
    proptest::sample::select(groups).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), proptest::collection::vec(0..n, 1..3))
    })
}

/// Product of transvections `I + a E_ij`, with its inverse built from the
/// inverse factors in reverse order.
fn unitriangular<F: Field>(f: &F, n: usize, seed: &[i64]) -> (ExactMatrix<F>, ExactMatrix<F>) {
    let mut p = ExactMatrix::identity(f, n);
    let mut inv = ExactMatrix::identity(f, n);
    if n < 2 {
        return (p, inv);
    }
    for (t, &a) in seed.iter().enumerate() {
        let i = (t * 7919 + 3) % n;
        let j = (i + 1 + (t * 104_729) % (n - 1)) % n;
        let mut step = vec![vec![0i64; n]; n];
        let mut back = vec![vec![0i64; n]; n];
        for k in 0..n {
            step[k][k] = 1;
            back[k][k] = 1;
        }
        step[i][j] = a;
        back[i][j] = -a;
        p = p.mul(&ExactMatrix::from_i64(f, &step).unwrap()).unwrap();
        inv = ExactMatrix::from_i64(f, &back).unwrap().mul(&inv).unwrap();
    }
    (p, inv)
}

fn conjugated<F: Field>(m: &Bimodule<F>, seed: &[i64]) -> Bimodule<F> {
    let (p, inv) = unitriangular(m.field(), m.dim(), seed);
    let conj = |a: &ExactMatrix<F>| p.mul(a).unwrap().mul(&inv).unwrap();
    let g = m.group();
    Bimodule::new(
        g,
        g.elements().map(|x| conj(m.left(x))).collect(),
        g.elements().map(|x| conj(m.right(x))).collect(),
        "conjugated",
    )
    .unwrap()
}

/// `dim {m : g.m = m.g for all g}` by dense elimination of the stacked
/// `L(g) - R(g)`.
fn centre_oracle<F: Field>(m: &Bimodule<F>) -> usize {
    let f = m.field();
    let mut rows = Vec::new();
    for g in m.group().elements() {
        rows.extend(m.left(g).sub(m.right(g)).unwrap().to_dense());
    }
    if rows.is_empty() {
        return m.dim();
    }
    m.dim() - oracle_rank(f, rows)
}

fn coefficient_modules<F: Field>(g: &Arc<Group>, f: &F, gens: &[usize]) -> Vec<Bimodule<F>> {
    let action = coset_action(g, gens);
    vec![
        augmentation_bimodule(g, f),
        group_algebra_bimodule(g, f),
        group_algebra_bimodule(g, f).dualize(),
        left_action_bimodule(&action, f),
        function_dual_of_action(&action, f),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_dense_oracle(m in shaped(false)) {
        check_rank(&Rationals, &m);
        for p in [2, 3, 5] {
            check_rank(&PrimeField::new(p).unwrap(), &m);
        }
    }

    #[test]
    fn rank_with_large_entries(m in shaped(true)) {
        check_rank(&Rationals, &m);
        check_rank(&PrimeField::new(7).unwrap(), &m);
    }

    #[test]
    fn rank_of_low_rank_products(a in int_matrix(24, 4, false), b in int_matrix(4, 20, false)) {
        let f = Rationals;
        let prod = ExactMatrix::from_i64(&f, &a).unwrap().mul(&ExactMatrix::from_i64(&f, &b).unwrap()).unwrap();
        let expected = oracle_rank(&f, prod.to_dense());
        prop_assert!(expected <= 4);
        prop_assert_eq!(prod.rank(), expected);
        prop_assert_eq!(prod.transpose().rank(), expected);
    }

    #[test]
    fn l1_is_submultiplicative(a in rational_matrix(4, 5), b in rational_matrix(5, 3)) {
        let f = Rationals;
        let a = ExactMatrix::from_rationals(&f, &a).unwrap();
        let b = ExactMatrix::from_rationals(&f, &b).unwrap();
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.l1_norm().unwrap() <= a.l1_norm().unwrap() * b.l1_norm().unwrap());
        prop_assert!(ab.linf_norm().unwrap() <= a.linf_norm().unwrap() * b.linf_norm().unwrap());
    }

    #[test]
    fn l1_is_linf_of_transpose(m in rational_matrix(5, 7)) {
        let m = ExactMatrix::from_rationals(&Rationals, &m).unwrap();
        prop_assert_eq!(m.l1_norm().unwrap(), m.transpose().linf_norm().unwrap());
    }

    #[test]
    fn block_homotopy_norm_is_max(a in rational_matrix(3, 2), b in rational_matrix(4, 5)) {
        let f = Rationals;
        let a = ExactMatrix::from_rationals(&f, &a).unwrap();
        let b = ExactMatrix::from_rationals(&f, &b).unwrap();
        let sum = sum_homotopies(&f, &[std::slice::from_ref(&a), std::slice::from_ref(&b)]).unwrap();
        let expected = a.l1_norm().unwrap().max(b.l1_norm().unwrap());
        prop_assert_eq!(sum[0].l1_norm().unwrap(), expected);
    }

    #[test]
    fn sniper_inverse_norm_is_n(n in 1usize..300) {
        let r = sniper_demo(n).unwrap();
        prop_assert_eq!(r.inverse_norm, n.to_string());
        prop_assert_eq!(r.forward_norm, "1");
        prop_assert_eq!(r.sum_of_cokernels, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_stabilizer((g, gens) in group_and_elements(8)) {
        let action = coset_action(&g, &gens);
        let d = orbit_decompose(&action).unwrap();
        prop_assert_eq!(d.orbits.iter().map(Vec::len).sum::<usize>(), action.set_size());
        for (orbit, stab) in d.orbits.iter().zip(&d.stabilizers) {
            prop_assert_eq!(orbit.len() * stab.order(), g.order());
        }
        let mut seen: Vec<usize> = d.orbits.concat();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..action.set_size()).collect::<Vec<_>>());
    }

    #[test]
    fn classes_partition_and_divide((g, _) in group_and_elements(8)) {
        let classes = conjugacy_classes(&g);
        let mut all: Vec<usize> = classes.concat();
        all.sort_unstable();
        prop_assert_eq!(all, g.elements().collect::<Vec<_>>());
        for c in &classes {
            prop_assert_eq!(g.order() % c.len(), 0);
            for &x in c {
                let mut orbit: Vec<usize> = g.elements().map(|y| g.mul(g.mul(y, x), g.inv(y))).collect();
                orbit.sort_unstable();
                orbit.dedup();
                let mut sorted = c.clone();
                sorted.sort_unstable();
                prop_assert_eq!(&orbit, &sorted);
            }
        }
    }

    #[test]
    fn transversal_laws((g, gens) in group_and_elements(8), seed in any::<u64>()) {
        let h = cyclic_subgroup(&g, gens[0]);
        for t in [Transversal::smallest(&h), Transversal::random(&h, seed)] {
            for x in g.elements() {
                let j = t.coset_of(x);
                prop_assert_eq!(g.mul(t.tau(j), t.eta(x)), x);
                prop_assert!(h.contains(t.eta(x)));
                for &y in h.elements() {
                    prop_assert_eq!(t.eta(g.mul(x, y)), g.mul(t.eta(x), y));
                }
            }
        }
    }

    #[test]
    fn conjugation_stabilizers_are_centralizers((g, _) in group_and_elements(8)) {
        prop_assume!(g.order() >= 2);
        let action = conjugation_action(&g).unwrap();
        let d = orbit_decompose(&action).unwrap();
        let others: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
        for (rep, stab) in d.representatives.iter().zip(&d.stabilizers) {
            let x = others[*rep];
            let c = centralizer(&g, x).unwrap();
            prop_assert_eq!(stab.elements(), c.elements());
        }
    }

    #[test]
    fn ct_matches_double_loop(a in 0usize..8, b in 0usize..8) {
        let gs = small_groups();
        let (ga, gb) = (&gs[a], &gs[b]);
        let prod = Arc::new(Group::direct_product(ga, gb));
        let oracle = prod.elements().filter(|&x| x != prod.identity()).all(|x| {
            let c: Vec<usize> = prod.elements().filter(|&y| prod.mul(x, y) == prod.mul(y, x)).collect();
            c.iter().all(|&p| c.iter().all(|&q| prod.mul(p, q) == prod.mul(q, p)))
        });
        let (verdict, witness) = is_commutative_transitive(&prod);
        prop_assert_eq!(verdict, oracle);
        if let Some(w) = witness {
            prop_assert!(prod.mul(w.x, w.a) == prod.mul(w.a, w.x) && prod.mul(w.x, w.b) == prod.mul(w.b, w.x));
            prop_assert!(prod.mul(w.a, w.b) != prod.mul(w.b, w.a));
        }
        if ga.order() > 1 && !gb.is_abelian() {
            prop_assert!(!verdict);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_equals_fast_path((g, gens) in group_and_elements(8), p in prop_oneof![Just(0u64), Just(2), Just(3)]) {
        let degree = if g.order() <= 6 { 2 } else { 1 };
        let action = coset_action(&g, &gens);
        let (oracle, fast) = if p == 0 {
            (brute_force_oracle(&action, &Rationals, degree, CAP).unwrap().homology_dims(),
             disintegrate(&action, &Rationals, degree, CAP).unwrap().homology_dims())
        } else {
            let f = PrimeField::new(p).unwrap();
            (brute_force_oracle(&action, &f, degree, CAP).unwrap().homology_dims(),
             disintegrate(&action, &f, degree, CAP).unwrap().homology_dims())
        };
        prop_assert_eq!(oracle, fast);
    }

    #[test]
    fn cochain_laws((g, gens) in group_and_elements(6), seed in proptest::collection::vec(-2i64..=2, 1..6)) {
        let f3 = PrimeField::new(3).unwrap();
        for m in coefficient_modules(&g, &f3, &gens) {
            let dd = m.dualize().dualize();
            for x in g.elements() {
                prop_assert_eq!(dd.left(x), m.left(x));
                prop_assert_eq!(dd.right(x), m.right(x));
            }
            let c = hochschild_complex(&m, 2, CAP).unwrap();
            for (n, &d) in c.dims().iter().take(3).enumerate() {
                prop_assert_eq!(d, g.order().pow(n as u32) * m.dim());
            }
            let dims = cohomology_dims(&c, "m").unwrap();
            for deg in &dims.degrees {
                prop_assert!(deg.boundaries <= deg.cycles);
            }
            let h = dims.homology_dims();
            prop_assert_eq!(h[0], centre_oracle(&m));
            let other = hochschild_cohomology(&conjugated(&m, &seed), 2, CAP).unwrap().homology_dims();
            prop_assert_eq!(h, other);
        }
    }

    #[test]
    fn semisimple_vanishing((g, gens) in group_and_elements(6)) {
        for m in coefficient_modules(&g, &Rationals, &gens) {
            let h = hochschild_cohomology(&m, 2, CAP).unwrap().homology_dims();
            prop_assert!(h[1..].iter().all(|&x| x == 0), "{} {:?}", m.label(), h);
        }
    }

    #[test]
    fn cohomology_invariant_under_chain_isomorphism((g, gens) in group_and_elements(6), seed in proptest::collection::vec(-3i64..=3, 1..5)) {
        let f = Rationals;
        let action = coset_action(&g, &gens);
        let c = Arc::new(hochschild_complex(&function_dual_of_action(&action, &f), 2, CAP).unwrap());
        let pairs: Vec<_> = c.dims().iter().map(|&d| unitriangular(&f, d, &seed)).collect();
        let maps: Vec<ExactMatrix<Rationals>> = c
            .maps()
            .iter()
            .enumerate()
            .map(|(n, d)| pairs[n + 1].0.mul(d).unwrap().mul(&pairs[n].1).unwrap())
            .collect();
        let moved = Arc::new(
            NormedComplex::new(&f, Direction::Cochain, c.dims().to_vec(), maps, c.norm_kinds().to_vec())
                .unwrap()
                .with_truncated(c.is_truncated()),
        );
        let forward = ChainMap::new(c.clone(), moved.clone(), pairs.iter().map(|p| p.0.clone()).collect()).unwrap();
        let backward = ChainMap::new(moved.clone(), c.clone(), pairs.iter().map(|p| p.1.clone()).collect()).unwrap();
        let check = verify_chain_isomorphism(&forward, &backward, false).unwrap();
        prop_assert!(check.isomorphism);
        prop_assert_eq!(
            cohomology_dims(&c, "a").unwrap().homology_dims(),
            cohomology_dims(&moved, "b").unwrap().homology_dims()
        );
    }
}
