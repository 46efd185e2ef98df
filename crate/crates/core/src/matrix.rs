//! Exact integer matrices and the Smith normal form.
//!
//! Everything in this module is arbitrary-precision: entries are [`BigInt`]s
//! and no modular shortcuts are taken anywhere. The Smith reduction tracks
//! the row and column transforms *and their inverses* simultaneously, so
//! callers can read off lattice bases, solve `Ax = b` exactly, and express
//! vectors in a lattice basis without re-running elimination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in matrix literal"
        );
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor used all over the test suite.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += c * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        for j in 0..self.cols {
            let add = c * self.get(source, j);
            let cur = self.get(target, j) + add;
            self.set(target, j, cur);
        }
    }

    /// col[target] += c * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        for i in 0..self.rows {
            let add = c * self.get(i, source);
            let cur = self.get(i, target) + add;
            self.set(i, target, cur);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics on
    /// non-square input; exact for any entry size.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let pivot_row = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
                match pivot_row {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    // Exact division is guaranteed by the Bareiss identity.
                    m.set(i, j, num / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Smith normal form `U * A * V = D` with `U`, `V` unimodular and `D`
    /// diagonal, each diagonal entry nonnegative and dividing the next.
    /// The inverses of `U` and `V` are accumulated alongside, so
    /// `A = u_inv * D * v_inv`.
    pub fn smith_normal_form(&self) -> SmithForm {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut u_inv = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let mut v_inv = IntMatrix::identity(self.cols);

        let bound = self.rows.min(self.cols);
        let mut t = 0;
        while t < bound {
            // Locate a pivot: smallest nonzero entry of the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    if d.get(i, j).is_zero() {
                        continue;
                    }
                    match pivot {
                        Some((pi, pj)) if d.get(pi, pj).abs() <= d.get(i, j).abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            swap_rows_tracked(&mut d, &mut u, &mut u_inv, pi, t);
            swap_cols_tracked(&mut d, &mut v, &mut v_inv, pj, t);

            'reduce: loop {
                // Clear the pivot column by Euclidean steps.
                for i in t + 1..self.rows {
                    while !d.get(i, t).is_zero() {
                        let q = d.get(i, t) / d.get(t, t);
                        if !q.is_zero() {
                            add_row_tracked(&mut d, &mut u, &mut u_inv, i, t, &-q);
                        }
                        if !d.get(i, t).is_zero() {
                            swap_rows_tracked(&mut d, &mut u, &mut u_inv, i, t);
                        }
                    }
                }
                // Clear the pivot row. A swap here can dirty the column, in
                // which case we go around again; each swap shrinks the pivot
                // so the loop terminates.
                let mut dirty = false;
                for j in t + 1..self.cols {
                    while !d.get(t, j).is_zero() {
                        let q = d.get(t, j) / d.get(t, t);
                        if !q.is_zero() {
                            add_col_tracked(&mut d, &mut v, &mut v_inv, j, t, &-q);
                        }
                        if !d.get(t, j).is_zero() {
                            swap_cols_tracked(&mut d, &mut v, &mut v_inv, j, t);
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue 'reduce;
                }
                // Divisibility repair: the pivot must divide every entry of
                // the trailing block, or later diagonal entries would break
                // the chain d_t | d_{t+1}.
                for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !(d.get(i, j) % d.get(t, t)).is_zero() {
                            add_row_tracked(&mut d, &mut u, &mut u_inv, t, i, &BigInt::one());
                            continue 'reduce;
                        }
                    }
                }
                break;
            }

            if d.get(t, t).is_negative() {
                negate_row_tracked(&mut d, &mut u, &mut u_inv, t);
            }
            t += 1;
        }

        let rank = (0..bound).take_while(|&i| !d.get(i, i).is_zero()).count();
        SmithForm {
            d,
            u,
            u_inv,
            v,
            v_inv,
            rank,
        }
    }
}

// The tracked elementary operations keep four invariants in lockstep:
//   d = u * A * v,   u * u_inv = 1,   v * v_inv = 1.
// A row operation is a left factor E (u <- E u, u_inv <- u_inv E^{-1});
// a column operation is a right factor (v <- v E, v_inv <- E^{-1} v_inv).

fn swap_rows_tracked(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    u_inv: &mut IntMatrix,
    a: usize,
    b: usize,
) {
    d.swap_rows(a, b);
    u.swap_rows(a, b);
    u_inv.swap_cols(a, b);
}

fn swap_cols_tracked(
    d: &mut IntMatrix,
    v: &mut IntMatrix,
    v_inv: &mut IntMatrix,
    a: usize,
    b: usize,
) {
    d.swap_cols(a, b);
    v.swap_cols(a, b);
    v_inv.swap_rows(a, b);
}

/// row[target] += c * row[source] on `d`.
fn add_row_tracked(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    u_inv: &mut IntMatrix,
    target: usize,
    source: usize,
    c: &BigInt,
) {
    d.add_row_multiple(target, source, c);
    u.add_row_multiple(target, source, c);
    // (I + c e_{ts})^{-1} = I - c e_{ts}: column `source` of u_inv loses
    // c times column `target`.
    let neg = -c.clone();
    u_inv.add_col_multiple(source, target, &neg);
}

/// col[target] += c * col[source] on `d`.
fn add_col_tracked(
    d: &mut IntMatrix,
    v: &mut IntMatrix,
    v_inv: &mut IntMatrix,
    target: usize,
    source: usize,
    c: &BigInt,
) {
    d.add_col_multiple(target, source, c);
    v.add_col_multiple(target, source, c);
    let neg = -c.clone();
    v_inv.add_row_multiple(source, target, &neg);
}

fn negate_row_tracked(d: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, i: usize) {
    d.negate_row(i);
    u.negate_row(i);
    u_inv.negate_col(i);
}

/// Result of a Smith reduction: `u * a * v = d`, `u * u_inv = 1`,
/// `v * v_inv = 1`, and `rank` nonzero diagonal entries.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The full diagonal (length `min(rows, cols)`), zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Basis of the integer solution lattice of `A x = 0`: the columns of
    /// `v` past the rank. Every integer solution is a unique integer
    /// combination of these.
    pub fn nullspace_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank..self.d.cols())
            .map(|j| self.v.column(j))
            .collect()
    }

    /// Basis of the column lattice (the image of `A` in Z^rows): the first
    /// `rank` columns of `u_inv`, scaled by the diagonal.
    pub fn column_lattice_basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank)
            .map(|j| {
                let dj = self.d.get(j, j);
                self.u_inv.column(j).into_iter().map(|x| x * dj).collect()
            })
            .collect()
    }

    /// Exact solve of `A x = b`; `None` when no integer solution exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.d.rows(), "right-hand side has wrong length");
        let c = self.u.mul_vec(b);
        let mut z = vec![BigInt::zero(); self.d.cols()];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                let di = self.d.get(i, i);
                if !(ci % di).is_zero() {
                    return None;
                }
                z[i] = ci / di;
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&z))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_form(a: &IntMatrix) {
        let s = a.smith_normal_form();
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U A V != D");
        assert!(s.u.mul(&s.u_inv).is_identity_test(), "U U^-1 != I");
        assert!(s.v.mul(&s.v_inv).is_identity_test(), "V V^-1 != I");
        assert!(s.u.is_unimodular(), "U not unimodular");
        assert!(s.v.is_unimodular(), "V not unimodular");
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero on diagonal");
                assert!(
                    (&w[1] % &w[0]).is_zero(),
                    "divisibility chain broken: {diag:?}"
                );
            }
        }
        for (i, x) in diag.iter().enumerate() {
            assert!(!x.is_negative(), "negative diagonal entry");
            assert_eq!(x.is_zero(), i >= s.rank, "rank inconsistent with diagonal");
        }
    }

    impl IntMatrix {
        fn is_identity_test(&self) -> bool {
            self.rows == self.cols && *self == IntMatrix::identity(self.rows)
        }
    }

    #[test]
    fn smith_form_of_known_matrix() {
        // Classic example: diag terms 1, 2, 6.
        let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        check_form(&a);
        let s = a.smith_normal_form();
        let diag: Vec<i64> = s
            .diagonal()
            .iter()
            .map(|x| i64::try_from(x).expect("small"))
            .collect();
        assert_eq!(diag, vec![2, 6, 12]);
    }

    #[test]
    fn smith_form_handles_zero_and_rectangular() {
        check_form(&IntMatrix::zeros(3, 2));
        check_form(&IntMatrix::from_i64(&[&[0, 0, 5]]));
        check_form(&IntMatrix::from_i64(&[&[3], &[6], &[0]]));
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        check_form(&a);
        assert_eq!(a.smith_normal_form().rank, 2);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = IntMatrix::from_i64(&[&[3, -1, 2], &[0, 4, 1], &[5, 2, -2]]);
        // Expanded by hand: 3*(4*-2 - 1*2) - (-1)*(0*-2 - 1*5) + 2*(0*2 - 4*5)
        assert_eq!(a.det(), BigInt::from(3 * (-10) - (-1) * (-5) + 2 * (-20)));
        assert_eq!(IntMatrix::identity(4).det(), BigInt::one());
        assert_eq!(IntMatrix::zeros(2, 2).det(), BigInt::zero());
    }

    #[test]
    fn solve_finds_integer_solutions_and_rejects_others() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = a.smith_normal_form();
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = s.solve(&b).expect("solvable");
        assert_eq!(a.mul_vec(&x), b);
        // 2x = 3 has no integer solution.
        assert!(s.solve(&[BigInt::from(3), BigInt::zero()]).is_none());
    }

    #[test]
    fn nullspace_spans_kernel() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3]]);
        let s = a.smith_normal_form();
        let basis = s.nullspace_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        // (1, 1, -1) is in the kernel and must be an integer combination:
        // solve via the 3x2 matrix of basis vectors.
        let bm = IntMatrix::from_rows(vec![
            vec![basis[0][0].clone(), basis[1][0].clone()],
            vec![basis[0][1].clone(), basis[1][1].clone()],
            vec![basis[0][2].clone(), basis[1][2].clone()],
        ]);
        let coeffs =
            bm.smith_normal_form()
                .solve(&[BigInt::one(), BigInt::one(), BigInt::from(-1)]);
        assert!(coeffs.is_some());
    }

    #[test]
    fn column_lattice_basis_spans_image() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[0, 6]]);
        let s = a.smith_normal_form();
        let basis = s.column_lattice_basis();
        assert_eq!(basis.len(), 2);
        // Each original column must be an integer combination of the basis.
        for j in 0..2 {
            let col = a.column(j);
            let bm = IntMatrix::from_rows(
                (0..2)
                    .map(|i| vec![basis[0][i].clone(), basis[1][i].clone()])
                    .collect(),
            );
            assert!(
                bm.smith_normal_form().solve(&col).is_some(),
                "column {j} outside lattice"
            );
        }
    }
}
