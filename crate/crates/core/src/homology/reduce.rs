//! Left-to-right column reduction keeping track of the column operations,
//! used to pick cycle and boundary bases in cell order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::eliminate::divide_content;
use super::matrix::{combine, SparseColumn, SparseMatrix};

pub(crate) struct ColumnReduction {
    pub reduced: Vec<SparseColumn>,
    /// `reduced[j] = m * ops[j]`; `ops[j]` has its lowest nonzero entry at `j`.
    pub ops: Vec<SparseColumn>,
    /// Column whose reduced form has its lowest entry at each row.
    pub low_owner: Vec<Option<usize>>,
}

pub(crate) fn reduce_columns(m: &SparseMatrix) -> ColumnReduction {
    let mut reduced: Vec<SparseColumn> = Vec::with_capacity(m.cols());
    let mut ops: Vec<SparseColumn> = Vec::with_capacity(m.cols());
    let mut low_owner = vec![None; m.rows()];
    for j in 0..m.cols() {
        let mut c = m.column(j).to_vec();
        let mut v: SparseColumn = vec![(j, BigInt::one())];
        while let Some((low, b)) = c.last().cloned() {
            let Some(p) = low_owner[low] else {
                low_owner[low] = Some(j);
                break;
            };
            let a = &reduced[p].last().unwrap().1;
            let g = a.gcd(&b);
            let (fa, fb) = (a / &g, -(&b / &g));
            c = combine(&fa, &c, &fb, &reduced[p]);
            v = combine(&fa, &v, &fb, &ops[p]);
            let mut joint: SparseColumn = c.clone();
            let split = joint.len();
            joint.extend(v.iter().cloned());
            divide_content(&mut joint);
            v = joint.split_off(split);
            c = joint;
        }
        reduced.push(c);
        ops.push(v);
    }
    ColumnReduction {
        reduced,
        ops,
        low_owner,
    }
}
