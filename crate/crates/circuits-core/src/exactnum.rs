//! Arbitrary-precision exact rational scalars, vectors, and matrices, plus
//! the elimination-based linear algebra everything else is built on.
//!
//! All arithmetic is exact; support and sign decisions are made on reduced
//! rationals, never on approximations. Gaussian elimination pivots on the
//! first nonzero entry of a column: exact arithmetic needs no numerical
//! pivoting, and the fixed order keeps every result deterministic.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

/// Exact rational scalar, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Fixed-length vector of rationals.
pub type RatVector = Vec<Rational>;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// Rational n/d; panics if d = 0.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// Parses a rational token: optional '-', digits, optional '/' followed by
/// digits denoting a positive denominator. Examples: `3`, `-7`, `2/5`,
/// `-11/4`. Returns None on any deviation from that grammar.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let (numer_str, denom_str) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let numer = parse_signed_digits(numer_str)?;
    let denom = match denom_str {
        Some(d) => {
            if d.starts_with('-') {
                return None;
            }
            let d = parse_signed_digits(d)?;
            if d.is_zero() {
                return None;
            }
            d
        }
        None => Int::one(),
    };
    Some(Rational::new(numer, denom))
}

fn parse_signed_digits(s: &str) -> Option<Int> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Exact dot product.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Sum of absolute values.
pub fn one_norm(v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for x in v {
        acc += x.abs();
    }
    acc
}

/// Indices of the nonzero entries.
pub fn support(v: &[Rational]) -> BTreeSet<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Lifts an integer vector to rationals.
pub fn int_vec_to_rat(v: &[Int]) -> RatVector {
    v.iter()
        .map(|x| Rational::from_integer(x.clone()))
        .collect()
}

/// Componentwise a + s*b.
pub fn add_scaled(a: &[Rational], s: &Rational, b: &[Rational]) -> RatVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn sub_vec(a: &[Rational], b: &[Rational]) -> RatVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The unique positive scalar multiple of `v` with coprime integer entries.
///
/// The scaling is always positive, so signs are preserved:
/// (-2/3, -4/3) maps to (-1, -2).
pub fn normalize_primitive(v: &[Rational]) -> Result<Vec<Int>, Error> {
    if is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    let mut denom_lcm = Int::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = Int::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Ok(ints.iter().map(|x| x / &g).collect())
}

/// Dense row-major rational matrix. A matrix may have zero rows (an absent
/// equality system) but always has a definite column count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVector>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        RatMatrix {
            rows: n_rows,
            cols,
            data,
        }
    }

    /// Test/CLI convenience: integer literal rows.
    pub fn from_i64_rows(rows: &[&[i64]], cols: usize) -> Self {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        is_zero_vec(self.row(r))
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.row_iter().map(|r| dot(r, v)).collect()
    }

    pub fn mul_int_vec(&self, v: &[Int]) -> RatVector {
        self.mul_vec(&int_vec_to_rat(v))
    }

    /// Stacks `self` on top of `other` (column counts must agree).
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend(self.row(r).iter().cloned());
        }
        RatMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            for &c in idx {
                data.push(self.at(r, c).clone());
            }
        }
        RatMatrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Exact rank via fraction-exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        reduced_row_echelon(&mut work, None).len()
    }

    /// Basis of ker(M): cols - rank linearly independent vectors, one per
    /// non-pivot column, in column order. Empty when the kernel is trivial.
    pub fn kernel_basis(&self) -> Vec<RatVector> {
        let mut work = self.clone();
        let pivots = reduced_row_echelon(&mut work, None);
        let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for &(r, c) in &pivots {
                v[c] = -work.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// A solution of M z = q if consistent, otherwise None. Underdetermined
    /// systems are determinized by assigning zero to non-pivot variables.
    pub fn solve(&self, q: &[Rational]) -> Option<RatVector> {
        assert_eq!(q.len(), self.rows, "rhs length mismatch");
        let mut work = self.clone();
        let mut rhs = q.to_vec();
        let pivots = reduced_row_echelon(&mut work, Some(&mut rhs));
        // Pivot rows are swapped to the top, so the tail decides consistency.
        if rhs[pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut z = vec![Rational::zero(); self.cols];
        for &(r, c) in &pivots {
            z[c] = rhs[r].clone();
        }
        Some(z)
    }

    /// The unique solution of M z = q, or None when the system is
    /// inconsistent or the columns are rank-deficient (solution not unique).
    pub fn solve_unique(&self, q: &[Rational]) -> Option<RatVector> {
        assert_eq!(q.len(), self.rows, "rhs length mismatch");
        let mut work = self.clone();
        let mut rhs = q.to_vec();
        let pivots = reduced_row_echelon(&mut work, Some(&mut rhs));
        if pivots.len() < self.cols || rhs[pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut z = vec![Rational::zero(); self.cols];
        for &(r, c) in &pivots {
            z[c] = rhs[r].clone();
        }
        Some(z)
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut work = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !work.at(r, col).is_zero()) {
                Some(p) => p,
                None => return Rational::zero(),
            };
            if pivot != col {
                for c in 0..n {
                    let tmp = work.at(pivot, c).clone();
                    *work.at_mut(pivot, c) = work.at(col, c).clone();
                    *work.at_mut(col, c) = tmp;
                }
                det = -det;
            }
            let p = work.at(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                if work.at(r, col).is_zero() {
                    continue;
                }
                let f = work.at(r, col) / &p;
                for c in col..n {
                    let delta = &f * work.at(col, c);
                    *work.at_mut(r, c) -= delta;
                }
            }
        }
        det
    }

    /// True when every square submatrix (all sizes up to min(rows, cols))
    /// has nonzero determinant. Exhaustive; intended for small matrices.
    pub fn all_square_subdeterminants_nonzero(&self) -> bool {
        self.check_subdeterminants(|d| !d.is_zero())
    }

    /// Total unimodularity: every square subdeterminant lies in {0, 1, -1}.
    /// Exhaustive; intended for small matrices.
    pub fn is_totally_unimodular(&self) -> bool {
        self.check_subdeterminants(|d| d.is_zero() || d.abs().is_one())
    }

    fn check_subdeterminants(&self, ok: impl Fn(&Rational) -> bool) -> bool {
        use crate::comb::Combinations;
        for size in 1..=self.rows.min(self.cols) {
            for row_set in Combinations::new(self.rows, size) {
                let sub_rows = self.select_rows(&row_set);
                for col_set in Combinations::new(self.cols, size) {
                    let sub = sub_rows.select_cols(&col_set);
                    if !ok(&sub.determinant()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// In-place reduced row echelon form; returns (row, col) pivot pairs in
/// elimination order. Pivot choice is the first row with a nonzero entry.
fn reduced_row_echelon(
    m: &mut RatMatrix,
    mut rhs: Option<&mut RatVector>,
) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..m.cols {
        if next_row == m.rows {
            break;
        }
        let pivot = match (next_row..m.rows).find(|&r| !m.at(r, col).is_zero()) {
            Some(p) => p,
            None => continue,
        };
        if pivot != next_row {
            for c in 0..m.cols {
                let tmp = m.at(pivot, c).clone();
                *m.at_mut(pivot, c) = m.at(next_row, c).clone();
                *m.at_mut(next_row, c) = tmp;
            }
            if let Some(rhs) = rhs.as_deref_mut() {
                rhs.swap(pivot, next_row);
            }
        }
        let p = m.at(next_row, col).clone();
        for c in 0..m.cols {
            *m.at_mut(next_row, c) /= &p;
        }
        if let Some(rhs) = rhs.as_deref_mut() {
            rhs[next_row] /= &p;
        }
        for r in 0..m.rows {
            if r == next_row || m.at(r, col).is_zero() {
                continue;
            }
            let f = m.at(r, col).clone();
            for c in 0..m.cols {
                let delta = &f * m.at(next_row, c);
                *m.at_mut(r, c) -= delta;
            }
            if let Some(rhs) = rhs.as_deref_mut() {
                let delta = &f * &rhs[next_row];
                rhs[r] -= delta;
            }
        }
        pivots.push((next_row, col));
        next_row += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rv(xs: &[i64]) -> RatVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn parse_rational_accepts_grammar() {
        assert_eq!(parse_rational("3"), Some(rat(3)));
        assert_eq!(parse_rational("-7"), Some(rat(-7)));
        assert_eq!(parse_rational("2/5"), Some(ratio(2, 5)));
        assert_eq!(parse_rational("-11/4"), Some(ratio(-11, 4)));
        assert_eq!(parse_rational("4/6"), Some(ratio(2, 3)));
    }

    #[test]
    fn parse_rational_rejects_malformed() {
        for bad in ["", "-", "1/", "/2", "1/-2", "1/0", "1.5", "a", "1 2", "+3"] {
            assert_eq!(parse_rational(bad), None, "should reject {bad:?}");
        }
    }

    #[test]
    fn rational_tokens_round_trip() {
        for tok in ["0", "3", "-7", "2/5", "-11/4"] {
            let r = parse_rational(tok).unwrap();
            assert_eq!(alloc::format!("{r}"), tok);
        }
    }

    #[test]
    fn normalize_primitive_clears_denominators() {
        let v = vec![ratio(1, 2), ratio(-3, 4)];
        assert_eq!(
            normalize_primitive(&v).unwrap(),
            vec![Int::from(2), Int::from(-3)]
        );
    }

    #[test]
    fn normalize_primitive_divides_gcd() {
        assert_eq!(
            normalize_primitive(&rv(&[0, 5, 0])).unwrap(),
            vec![Int::from(0), Int::from(1), Int::from(0)]
        );
    }

    #[test]
    fn normalize_primitive_preserves_sign() {
        let v = vec![ratio(-2, 3), ratio(-4, 3)];
        assert_eq!(
            normalize_primitive(&v).unwrap(),
            vec![Int::from(-1), Int::from(-2)]
        );
    }

    #[test]
    fn normalize_primitive_rejects_zero() {
        assert_eq!(normalize_primitive(&rv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn normalize_primitive_idempotent_and_scale_invariant() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let v: RatVector = (0..4)
                .map(|_| ratio(rng.int_in(-9, 9), rng.int_in(1, 9)))
                .collect();
            if is_zero_vec(&v) {
                continue;
            }
            let g = normalize_primitive(&v).unwrap();
            let again = normalize_primitive(&int_vec_to_rat(&g)).unwrap();
            assert_eq!(g, again);
            let scale = ratio(rng.int_in(1, 9), rng.int_in(1, 9));
            let scaled: RatVector = v.iter().map(|x| x * &scale).collect();
            assert_eq!(normalize_primitive(&scaled).unwrap(), g);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(RatMatrix::zero(2, 2).rank(), 0);
        assert_eq!(RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]], 2).rank(), 1);
    }

    #[test]
    fn rank_matches_transpose_rank() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..40 {
            let rows = rng.index(4) + 1;
            let cols = rng.index(4) + 1;
            let m = RatMatrix::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| rat(rng.int_in(-3, 3))).collect())
                    .collect(),
                cols,
            );
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_basis_examples() {
        let m = RatMatrix::from_i64_rows(&[&[1, 1]], 2);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        // One-dimensional kernel spanned by (1, -1) up to scaling.
        assert!(is_zero_vec(&m.mul_vec(&basis[0])));
        assert!(!basis[0][0].is_zero() && basis[0][0] == -basis[0][1].clone());

        assert!(RatMatrix::identity(2).kernel_basis().is_empty());

        let m = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]], 2);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let g = normalize_primitive(&basis[0]).unwrap();
        let canonical: Vec<Int> = if g[0].is_negative() {
            g.iter().map(|x| -x).collect()
        } else {
            g
        };
        assert_eq!(canonical, vec![Int::from(2), Int::from(-1)]);
    }

    #[test]
    fn kernel_vectors_annihilated_exactly() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..40 {
            let rows = rng.index(3) + 1;
            let cols = rng.index(4) + 2;
            let m = RatMatrix::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| rat(rng.int_in(-4, 4))).collect())
                    .collect(),
                cols,
            );
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), cols - m.rank());
            for v in &basis {
                assert!(is_zero_vec(&m.mul_vec(v)));
            }
        }
    }

    #[test]
    fn solve_examples() {
        let id = RatMatrix::identity(2);
        assert_eq!(id.solve(&rv(&[3, 7])), Some(rv(&[3, 7])));

        let wide = RatMatrix::from_i64_rows(&[&[1, 1]], 2);
        // Non-pivot variables are zeroed, so the answer is pinned to (2, 0).
        assert_eq!(wide.solve(&rv(&[2])), Some(rv(&[2, 0])));

        let tall = RatMatrix::from_i64_rows(&[&[1], &[1]], 1);
        assert_eq!(tall.solve(&rv(&[1, 2])), None);
    }

    #[test]
    fn rational_field_axioms_hold_exactly() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..200 {
            let a = ratio(rng.int_in(-50, 50), rng.int_in(1, 50));
            let b = ratio(rng.int_in(-50, 50), rng.int_in(1, 50));
            assert_eq!(&(&a + &b) - &b, a);
            if !b.is_zero() {
                assert_eq!(&(&a * &b) / &b, a);
            }
        }
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(RatMatrix::identity(3).determinant(), rat(1));
        let m = RatMatrix::from_i64_rows(&[&[2, 1], &[1, 1]], 2);
        assert_eq!(m.determinant(), rat(1));
        let singular = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]], 2);
        assert_eq!(singular.determinant(), rat(0));
        let swapped = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]], 2);
        assert_eq!(swapped.determinant(), rat(-1));
    }

    #[test]
    fn subdeterminant_checks() {
        let b = RatMatrix::from_i64_rows(&[&[1, 2], &[3, 1], &[2, 5]], 2);
        assert!(b.all_square_subdeterminants_nonzero());
        let with_zero = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]], 2);
        assert!(!with_zero.all_square_subdeterminants_nonzero());
        assert!(RatMatrix::identity(3).is_totally_unimodular());
        let not_tu = RatMatrix::from_i64_rows(&[&[1, 1], &[-1, 1]], 2);
        assert!(!not_tu.is_totally_unimodular());
    }
}
