//! Exact integer and rational homology of finite chain complexes.

mod chain_map;
mod complex;
mod eliminate;
mod matrix;
mod reduce;
mod snf;

pub use chain_map::{dense_rank_q, induced_map, induced_maps, ChainMap, HomologyBasis, InducedMap};
pub use complex::{ChainComplex, ComplexJson, DimJson, HomologySummary};
pub use eliminate::{elementary_divisors, rank_q};
pub use matrix::{combine, normalize_column, MatrixJson, SparseColumn, SparseMatrix};
pub use snf::{determinant, smith_normal_form, SmithForm};

/// Chain complex of the simplicial complex generated by `facets`, with
/// simplices listed in each dimension in lexicographic order.
pub fn simplicial_chain_complex(facets: &[Vec<usize>]) -> ChainComplex {
    use std::collections::BTreeSet;

    use num_bigint::BigInt;

    let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        f.dedup();
        let k = f.len();
        for mask in 1u64..(1u64 << k) {
            let s: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            let d = s.len() - 1;
            if faces.len() <= d {
                faces.resize_with(d + 1, BTreeSet::new);
            }
            faces[d].insert(s);
        }
    }
    let lists: Vec<Vec<Vec<usize>>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
    let higher = (1..lists.len())
        .map(|d| {
            let triplets = lists[d].iter().enumerate().flat_map(|(j, s)| {
                let lower = &lists[d - 1];
                (0..s.len()).map(move |i| {
                    let mut face = s.clone();
                    face.remove(i);
                    let row = lower.binary_search(&face).expect("face present");
                    let v = if i % 2 == 0 { 1 } else { -1 };
                    (row, j, BigInt::from(v))
                })
            });
            SparseMatrix::from_triplets(lists[d - 1].len(), lists[d].len(), triplets).expect("in range")
        })
        .collect();
    let cells = lists
        .iter()
        .map(|l| l.iter().map(|s| serde_json::json!(s)).collect())
        .collect();
    ChainComplex::from_boundaries(cells, higher).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    use super::*;

    fn circle() -> ChainComplex {
        simplicial_chain_complex(&[vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    fn rp2() -> ChainComplex {
        simplicial_chain_complex(&[
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 4, 5],
        ])
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn basic_betti_numbers() {
        let c = circle();
        assert!(c.verify_dd_zero());
        assert_eq!(c.betti_q().unwrap(), vec![1, 1]);
        let sphere = simplicial_chain_complex(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(sphere.betti_q().unwrap(), vec![1, 0, 1]);
        let two_points = simplicial_chain_complex(&[vec![0], vec![1]]);
        assert_eq!(two_points.betti_q().unwrap(), vec![2]);
        let point = simplicial_chain_complex(&[vec![0]]);
        assert_eq!(point.homology_z().unwrap().betti, vec![1]);
    }

    #[test]
    fn corrupted_sign_is_detected() {
        let tri = simplicial_chain_complex(&[vec![0, 1, 2]]);
        assert!(tri.verify_dd_zero());
        let mut json = tri.to_json();
        json.dims[2].boundary.entries[0].2 *= -1;
        let bad = ChainComplex::from_json(&json).unwrap();
        assert!(!bad.verify_dd_zero());
        assert!(bad.betti_q().is_err());
        assert!(bad.homology_z().is_err());
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        let c = rp2();
        assert_eq!(c.cell_counts(), vec![6, 15, 10]);
        let h = c.homology_z().unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], ints(&[2]), vec![]]);
        assert!(h.euler_consistent());
        assert_eq!(c.betti_q().unwrap(), vec![1, 0, 0]);
        let circle = circle().homology_z().unwrap();
        assert_eq!(circle.betti, vec![1, 1]);
        assert!(circle.torsion.iter().all(Vec::is_empty));
    }

    fn degree_two_map() -> ChainMap {
        let m = |t: &[(usize, usize, i64)]| {
            SparseMatrix::from_triplets(3, 3, t.iter().map(|&(i, j, v)| (i, j, BigInt::from(v)))).unwrap()
        };
        // edges 0: v0->v1, 1: v1->v2, 2: v2->v0; vertex k goes to 2k mod 3
        let f0 = m(&[(0, 0, 1), (2, 1, 1), (1, 2, 1)]);
        let f1 = m(&[(0, 0, 1), (1, 0, 1), (2, 1, 1), (0, 1, 1), (1, 2, 1), (2, 2, 1)]);
        ChainMap::new(vec![f0, f1])
    }

    fn oriented_circle() -> ChainComplex {
        let d1 = SparseMatrix::from_triplets(
            3,
            3,
            [(0, 0, -1), (1, 0, 1), (1, 1, -1), (2, 1, 1), (2, 2, -1), (0, 2, 1)]
                .into_iter()
                .map(|(i, j, v)| (i, j, BigInt::from(v))),
        )
        .unwrap();
        let cells = vec![
            (0..3).map(|i| serde_json::json!(i)).collect(),
            (0..3).map(|i| serde_json::json!(i)).collect(),
        ];
        ChainComplex::from_boundaries(cells, vec![d1]).unwrap()
    }

    #[test]
    fn degree_two_self_map_of_circle() {
        let c = oriented_circle();
        let f = degree_two_map();
        assert!(f.commutes(&c, &c));
        let h1 = induced_map(&f, &c, &c, 1).unwrap();
        assert_eq!(h1.matrix, vec![vec![BigRational::from_integer(2.into())]]);
        assert!(h1.iso);
        let h0 = induced_map(&f, &c, &c, 0).unwrap();
        assert!(h0.is_identity());
    }

    #[test]
    fn identity_and_non_chain_maps() {
        let c = rp2();
        let id = ChainMap::identity(&c);
        for h in induced_maps(&id, &c, &c).unwrap() {
            assert!(h.is_identity());
        }
        let s = circle();
        let mut bad = ChainMap::identity(&s).map(1).to_json();
        bad.entries[0].2 = 2;
        let f = ChainMap::new(vec![ChainMap::identity(&s).map(0).clone(), SparseMatrix::from_json(&bad).unwrap()]);
        assert!(matches!(induced_map(&f, &s, &s, 1), Err(crate::error::HomologyError::NotAChainMap(1))));
    }

    #[test]
    fn map_to_acyclic_target_vanishes_above_zero() {
        let s = oriented_circle();
        let disk = simplicial_chain_complex(&[vec![0, 1, 2]]).truncate(1);
        let t = simplicial_chain_complex(&[vec![0, 1, 2]]);
        // v0->v1, v1->v2, v2->v0 against the sorted edges 01, 02, 12
        let f1 = SparseMatrix::from_triplets(
            3,
            3,
            [(0, 0, 1), (2, 1, 1), (1, 2, -1)].into_iter().map(|(i, j, v)| (i, j, BigInt::from(v))),
        )
        .unwrap();
        let f = ChainMap::new(vec![SparseMatrix::identity(3), f1]);
        assert!(f.commutes(&s, &disk));
        let h1 = induced_map(&f, &s, &t, 1).unwrap();
        assert_eq!(h1.target_rank, 0);
        assert_eq!(h1.rank, 0);
        assert!(!h1.injective && h1.surjective);
    }

    fn naive_rank(m: &SparseMatrix) -> usize {
        let rows = m
            .to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        dense_rank_q(rows)
    }

    fn matrix_strategy(max: usize) -> impl Strategy<Value = SparseMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![6 => Just(0i64), 2 => -1i64..=1, 1 => -4i64..=4], r * c).prop_map(
                move |v| {
                    let t = v
                        .into_iter()
                        .enumerate()
                        .filter(|(_, x)| *x != 0)
                        .map(|(k, x)| (k / c, k % c, BigInt::from(x)));
                    SparseMatrix::from_triplets(r, c, t).unwrap()
                },
            )
        })
    }

    /// Product of random elementary matrices.
    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> SparseMatrix {
        let mut d = SparseMatrix::identity(n).to_dense();
        for &(i, j, f) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                d.swap(i, (i + 1) % n);
            } else {
                let src = d[j].clone();
                for (x, y) in d[i].iter_mut().zip(&src) {
                    *x += BigInt::from(f) * y;
                }
            }
        }
        SparseMatrix::from_dense(&d, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn sparse_rank_matches_naive(m in matrix_strategy(14)) {
            prop_assert_eq!(rank_q(&m), naive_rank(&m));
            prop_assert_eq!(elementary_divisors(&m).len(), naive_rank(&m));
        }

        #[test]
        fn smith_form_reconstructs(m in matrix_strategy(7)) {
            let s = smith_normal_form(&m);
            prop_assert!(s.verify(&m));
            prop_assert_eq!(&s.divisors, &elementary_divisors(&m));
        }

        #[test]
        fn scrambling_preserves_ranks_and_divisors(
            m in matrix_strategy(10),
            row_ops in proptest::collection::vec((0usize..10, 0usize..10, -2i64..=2), 0..12),
            col_ops in proptest::collection::vec((0usize..10, 0usize..10, -2i64..=2), 0..12),
        ) {
            let p = unimodular(m.rows(), &row_ops);
            let q = unimodular(m.cols(), &col_ops);
            let scrambled = p.mul(&m).unwrap().mul(&q).unwrap();
            prop_assert_eq!(rank_q(&scrambled), rank_q(&m));
            prop_assert_eq!(elementary_divisors(&scrambled), elementary_divisors(&m));
        }
    }

    #[test]
    fn scrambled_boundaries_keep_betti_numbers() {
        // change of basis in each chain group: ∂'_d = P_{d-1} ∂_d P_d^{-1}
        let c = rp2();
        let counts = c.cell_counts();
        let ops: Vec<(usize, usize, i64)> = (0..20).map(|k| (k * 7 + 1, k * 3 + 2, if k % 2 == 0 { 1 } else { -1 })).collect();
        let p: Vec<SparseMatrix> = counts.iter().map(|&n| unimodular(n, &ops)).collect();
        let p_inv: Vec<SparseMatrix> = p.iter().map(|m| inverse_unimodular(m)).collect();
        let higher = (1..c.dims())
            .map(|d| p[d - 1].mul(c.boundary(d)).unwrap().mul(&p_inv[d]).unwrap())
            .collect();
        let cells = (0..c.dims()).map(|d| c.cells(d).to_vec()).collect();
        let s = ChainComplex::from_boundaries(cells, higher).unwrap();
        assert!(s.verify_dd_zero());
        assert_eq!(s.betti_q().unwrap(), c.betti_q().unwrap());
        assert_eq!(s.homology_z().unwrap(), c.homology_z().unwrap());
    }

    fn inverse_unimodular(m: &SparseMatrix) -> SparseMatrix {
        let n = m.rows();
        let rows: Vec<Vec<BigRational>> = m
            .to_dense()
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r: Vec<BigRational> = r.into_iter().map(BigRational::from_integer).collect();
                r.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))));
                r
            })
            .collect();
        let mut a = rows;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).unwrap();
            a.swap(c, p);
            let piv = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x = &*x / &piv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in 0..2 * n {
                        let delta = &f * &a[c][k];
                        a[r][k] -= delta;
                    }
                }
            }
        }
        let dense: Vec<Vec<BigInt>> = a.into_iter().map(|r| r[n..].iter().map(|x| x.to_integer()).collect()).collect();
        SparseMatrix::from_dense(&dense, n)
    }
}
