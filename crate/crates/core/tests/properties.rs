use std::sync::Arc;

use proptest::prelude::*;

use tiltlab::exactlin::{Field, Matrix};
use tiltlab::quiveralg::{build_algebra, Quiver, Relation};
use tiltlab::repmod::{decompose, direct_sum_of, injective, projective, simple, Algebra, Representation};
use tiltlab::stablecm::{padded_envelope, stable_ext1_underline, stable_ext1_underline_with};
use tiltlab::suite::{fixture, SuiteConfig, FIXTURES};

fn matrix_strategy() -> impl Strategy<Value = (bool, usize, usize, Vec<i64>)> {
    (any::<bool>(), 0usize..7, 0usize..7).prop_flat_map(|(prime, r, c)| {
        (Just(prime), Just(r), Just(c), prop::collection::vec(-5i64..=5, r * c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rank_nullity((prime, r, c, entries) in matrix_strategy()) {
        let field = if prime { Field::Prime(7) } else { Field::Rational };
        let m = Matrix::from_i64(field, r, c, &entries);
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), c);
        prop_assert!(m.try_mul(&k).unwrap().is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }
}

fn standard(a: &Algebra, kind: usize, v: usize) -> Representation {
    let v = v % a.vertex_count();
    match kind % 3 {
        0 => projective(a, v).unwrap(),
        1 => injective(a, v).unwrap(),
        _ => simple(a, v).unwrap(),
    }
}

/// The six-vertex quiver with its commutativity relations rescaled.
fn rescaled_selfinjective(c1: i64, c2: i64, c3: i64) -> Algebra {
    let f = Field::Rational;
    let mut q = Quiver::numbered(6);
    for (a, s, t) in [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "5"), ("d", "5", "6"), ("e", "6", "4"), ("f", "4", "1"), ("x", "2", "4"), ("y", "4", "5"), ("z", "5", "2")] {
        q.add_arrow(a, s, t).unwrap();
    }
    let mut rels: Vec<Relation> = [["x", "f"], ["a", "x"], ["c", "z"], ["z", "b"], ["e", "y"], ["y", "d"]]
        .iter()
        .map(|p| Relation::zero(q.path(p).unwrap(), f).unwrap())
        .collect();
    for (p1, p2, c) in [(["f", "a"], ["y", "z"], c1), (["d", "e"], ["z", "x"], c2), (["b", "c"], ["x", "y"], c3)] {
        rels.push(
            Relation::new(vec![
                (f.one(), q.path(&p1).unwrap()),
                (tiltlab::exactlin::Scalar::from_i64(c, f), q.path(&p2).unwrap()),
            ])
            .unwrap(),
        );
    }
    Arc::new(build_algebra("rescaled", f, q, rels, 30).unwrap())
}

#[test]
fn rewriting_is_associative_on_fixtures() {
    let cfg = SuiteConfig::default();
    for (name, _) in FIXTURES {
        assert!(fixture(name, &cfg).unwrap().check_associativity(), "{name}");
        let over_f5 = SuiteConfig { field: Field::Prime(5), ..SuiteConfig::default() };
        assert!(fixture(name, &over_f5).unwrap().check_associativity(), "{name} over F_5");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rewriting_is_associative_for_rescaled_relations(c1 in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
                                                       c2 in prop::sample::select(vec![-3i64, -1, 1, 2]),
                                                       c3 in prop::sample::select(vec![-2i64, -1, 1, 3])) {
        let a = rescaled_selfinjective(c1, c2, c3);
        prop_assert!(a.check_associativity());
        prop_assert_eq!(a.dim(), 21);
    }

    #[test]
    fn stable_ext_ignores_the_chosen_envelope(f in 0usize..3, kx in 0usize..3, x in 0usize..6, ky in 0usize..3, y in 0usize..6, extra in 0usize..6) {
        let name = ["a4_cluster", "d4_cluster", "cycle4_rad2"][f];
        let a = fixture(name, &SuiteConfig::default()).unwrap();
        let mx = standard(&a, kx, x);
        let my = standard(&a, ky, y);
        let base = stable_ext1_underline(&mx, &my);
        let padded = padded_envelope(&mx, extra % a.vertex_count());
        prop_assert_eq!(stable_ext1_underline_with(&padded, &my), base);
    }

    #[test]
    fn decompose_is_idempotent(f in 0usize..3, parts in prop::collection::vec((0usize..3, 0usize..6), 1..4)) {
        let name = ["a4_cluster", "d4_cluster", "cycle4_rad2"][f];
        let a = fixture(name, &SuiteConfig::default()).unwrap();
        let mods: Vec<Representation> = parts.iter().map(|&(k, v)| standard(&a, k, v)).collect();
        let d = decompose(&direct_sum_of(&a, &mods)).unwrap();
        prop_assert_eq!(d.summand_count(), mods.len());
        let mut again = Vec::new();
        for (rep, mult) in &d.classes {
            prop_assert_eq!(decompose(rep).unwrap().summand_count(), 1);
            again.extend(std::iter::repeat(rep.clone()).take(*mult));
        }
        let d2 = decompose(&direct_sum_of(&a, &again)).unwrap();
        let mut dims1: Vec<Vec<usize>> = d.summands.iter().map(|s| s.module.dims().to_vec()).collect();
        let mut dims2: Vec<Vec<usize>> = d2.summands.iter().map(|s| s.module.dims().to_vec()).collect();
        dims1.sort();
        dims2.sort();
        prop_assert_eq!(dims1, dims2);
    }
}
